"""Concept graph extraction and OWL (RDF/XML) serialization.

Each concept vertex becomes an owl:Class plus a DatatypeProperty holding
its name and evidence value.  Each edge becomes a Relationship class whose
identifier concatenates the two concept labels, and leaf concepts (no
outgoing edge) trigger a single Result class whose property collects the
leaf name/value pairs and is domained on every Relationship class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .index import format_float
from .inference_net import InferenceGraph, NodeKind

_OWL_NS = "http://www.w3.org/2002/07/owl#"
_RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
_RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"

_NON_ALNUM = re.compile(r"[^a-z0-9]+")


@dataclass(frozen=True)
class ConceptVertex:
    label: str
    value: str


@dataclass(frozen=True)
class ConceptGraph:
    vertices: tuple[ConceptVertex, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        labels = [v.label for v in self.vertices]
        if len(labels) != len(set(labels)):
            raise ValueError("vertex labels must be unique")
        known = set(labels)
        for src, dst in self.edges:
            if src not in known or dst not in known:
                raise ValueError(f"edge endpoint missing: {src!r} -> {dst!r}")

    def leaves(self) -> list[ConceptVertex]:
        with_outgoing = {src for src, _ in self.edges}
        return [v for v in self.vertices if v.label not in with_outgoing]


@dataclass(frozen=True)
class OwlDocument:
    text: str
    class_count: int


def slugify(label: str) -> str:
    """Lowercase, non-alphanumerics to single hyphens, trimmed."""
    slug = _NON_ALNUM.sub("-", label.lower()).strip("-")
    if not slug:
        raise ValueError(f"label produces an empty slug: {label!r}")
    return slug


def concept_graph_from_inference(graph: InferenceGraph) -> ConceptGraph:
    """Project the concept layer of an inference graph.

    Vertex values aggregate the incoming evidence weights; edges connect
    concepts co-occurring in at least one document, directed from the
    lexicographically smaller label to the larger.
    """
    prefix = "concept:"
    evidence: dict[str, float] = {}
    docs_with: dict[str, set[str]] = {}
    for node in graph.nodes.values():
        if node.kind is NodeKind.CONCEPT:
            label = node.id[len(prefix):]
            evidence[label] = 0.0
            docs_with[label] = set()
    for edge in graph.edges:
        child = graph.nodes[edge.child]
        if child.kind is not NodeKind.CONCEPT:
            continue
        label = child.id[len(prefix):]
        evidence[label] += edge.weight
        # Text node ids are "text:<field>:<doc_id>".
        docs_with[label].add(edge.parent.split(":", 2)[2])
    vertices = tuple(
        ConceptVertex(label, format_float(evidence[label]))
        for label in sorted(evidence)
    )
    edges: set[tuple[str, str]] = set()
    labels = sorted(docs_with)
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            if docs_with[a] & docs_with[b]:
                edges.add((a, b) if a < b else (b, a))
    return ConceptGraph(vertices=vertices, edges=tuple(sorted(edges)))


def _class_block(iri: str, label: str) -> list[str]:
    return [
        f'  <owl:Class rdf:about="{escape(iri, {chr(34): "&quot;"})}">',
        f"    <rdfs:label>{escape(label)}</rdfs:label>",
        "  </owl:Class>",
    ]


def export_owl(cg: ConceptGraph) -> OwlDocument:
    """Serialize a concept graph as deterministic RDF/XML."""
    seen_iris: set[str] = set()

    def iri(value: str) -> str:
        if value in seen_iris:
            raise ValueError(f"duplicate IRI: {value!r}")
        seen_iris.add(value)
        return value

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        "<rdf:RDF",
        f'    xmlns:owl="{_OWL_NS}"',
        f'    xmlns:rdf="{_RDF_NS}"',
        f'    xmlns:rdfs="{_RDFS_NS}">',
    ]
    class_count = 0
    for vertex in sorted(cg.vertices, key=lambda v: v.label):
        slug = slugify(vertex.label)
        class_iri = iri(f"urn:mir:concept:{slug}")
        lines += _class_block(class_iri, vertex.label)
        class_count += 1
        prop_iri = iri(f"{class_iri}:value")
        lines += [
            f'  <owl:DatatypeProperty rdf:about="{prop_iri}">',
            f"    <rdfs:label>{escape(vertex.label)}</rdfs:label>",
            f"    <rdfs:comment>{escape(vertex.value)}</rdfs:comment>",
            f'    <rdfs:domain rdf:resource="{class_iri}"/>',
            "  </owl:DatatypeProperty>",
        ]
    relationship_iris: list[str] = []
    for src, dst in sorted(cg.edges):
        rel_iri = iri(f"urn:mir:relationship:{slugify(src)}:{slugify(dst)}")
        relationship_iris.append(rel_iri)
        lines += _class_block(rel_iri, f"{src}{dst}")
        class_count += 1
    leaves = sorted(cg.leaves(), key=lambda v: v.label)
    if leaves:
        result_iri = iri("urn:mir:result")
        lines += _class_block(result_iri, "Result")
        class_count += 1
        prop_iri = iri("urn:mir:result:value")
        lines += [
            f'  <owl:DatatypeProperty rdf:about="{prop_iri}">',
            "    <rdfs:label>Result</rdfs:label>",
            f'    <rdfs:domain rdf:resource="{result_iri}"/>',
        ]
        lines += [
            f'    <rdfs:domain rdf:resource="{rel_iri}"/>'
            for rel_iri in relationship_iris
        ]
        lines += [
            f"    <rdfs:comment>{escape(leaf.label)}={escape(leaf.value)}</rdfs:comment>"
            for leaf in leaves
        ]
        lines.append("  </owl:DatatypeProperty>")
    lines.append("</rdf:RDF>")
    lines.append("")
    return OwlDocument(text="\n".join(lines), class_count=class_count)
