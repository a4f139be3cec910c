"""Belief-network retrieval over a document/query DAG.

The graph layers document nodes (roots), per-field text nodes, concept
nodes, query nodes, and a single result node.  Every non-root node combines
its parents with a weighted-sum link matrix: over all 2^n true/false parent
assignments, the column probability is the product of parent probabilities
(or complements) and the column weight is the normalized sum of the weights
of the true parents.  That rule is linear in each parent, so it collapses
to sum(w_i * p_i) / sum(w_i), which is what evaluation uses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

from .corpus import Corpus, field_tokens
from .index import InvertedIndex, idf
from .ranking import RankedList, top_k

RESULT_NODE_ID = "result"

# Keeps text->concept edges positive when a term's idf is 0 (term present in
# every document); such edges carry no real evidence but must exist so the
# concept layer stays connected.
MIN_EDGE_WEIGHT = 1e-9

ENUMERATION_LIMIT = 20


class NotADagError(ValueError):
    pass


class NodeKind(str, Enum):
    DOCUMENT = "document"
    TEXT = "text"
    CONCEPT = "concept"
    QUERY = "query"
    RESULT = "result"


@dataclass(frozen=True)
class NetNode:
    id: str
    kind: NodeKind
    prior: float = 0.0


class Edge(NamedTuple):
    parent: str
    child: str
    weight: float


def doc_node_id(doc_id: str) -> str:
    return f"doc:{doc_id}"


def text_node_id(field_name: str, doc_id: str) -> str:
    # The variable part goes last so ids split unambiguously.
    return f"text:{field_name}:{doc_id}"


def concept_node_id(label: str) -> str:
    return f"concept:{label}"


def query_node_id(term: str) -> str:
    return f"query:{term}"


@dataclass
class InferenceGraph:
    nodes: dict[str, NetNode] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)

    def add_node(self, node: NetNode) -> None:
        self.nodes[node.id] = node

    def add_edge(self, parent: str, child: str, weight: float) -> None:
        if weight <= 0.0:
            raise ValueError("edge weight must be positive")
        if parent not in self.nodes or child not in self.nodes:
            raise ValueError(f"edge endpoints must exist: {parent!r} -> {child!r}")
        self.edges.append(Edge(parent, child, weight))

    def copy(self) -> "InferenceGraph":
        return InferenceGraph(nodes=dict(self.nodes), edges=list(self.edges))

    def parent_map(self) -> dict[str, list[Edge]]:
        parents: dict[str, list[Edge]] = {}
        for edge in self.edges:
            parents.setdefault(edge.child, []).append(edge)
        return parents

    def topological_order(self) -> list[str]:
        """Kahn's algorithm with sorted tie-breaking; raises on a cycle."""
        out_edges: dict[str, list[str]] = {}
        in_degree = {node_id: 0 for node_id in self.nodes}
        for edge in self.edges:
            out_edges.setdefault(edge.parent, []).append(edge.child)
            in_degree[edge.child] += 1
        ready = sorted(n for n, deg in in_degree.items() if deg == 0)
        order: list[str] = []
        while ready:
            node_id = ready.pop(0)
            order.append(node_id)
            for child in out_edges.get(node_id, ()):
                in_degree[child] -= 1
                if in_degree[child] == 0:
                    ready.append(child)
            ready.sort()
        if len(order) != len(self.nodes):
            raise NotADagError("not a DAG")
        return order

    def document_ids(self) -> list[str]:
        prefix = "doc:"
        return [
            node.id[len(prefix):]
            for node in self.nodes.values()
            if node.kind is NodeKind.DOCUMENT
        ]


@dataclass(frozen=True)
class LinkMatrix:
    """Parent probabilities and weights of one node's combination rule."""

    parent_probs: tuple[float, ...]
    parent_weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.parent_probs) != len(self.parent_weights):
            raise ValueError("probs and weights must have equal length")
        if not self.parent_probs:
            raise ValueError("at least one parent required")
        if any(not 0.0 <= p <= 1.0 for p in self.parent_probs):
            raise ValueError("parent probabilities must lie in [0, 1]")
        if any(w <= 0.0 for w in self.parent_weights):
            raise ValueError("parent weights must be positive")


def eval_link_matrix_enum(lm: LinkMatrix) -> float:
    """Evaluate the weighted-sum rule by enumerating all 2^n columns."""
    n = len(lm.parent_probs)
    if n > ENUMERATION_LIMIT:
        raise ValueError("use closed form")
    total_weight = sum(lm.parent_weights)
    belief = 0.0
    for mask in range(1 << n):
        prob = 1.0
        weight_sum = 0.0
        for i in range(n):
            if mask & (1 << i):
                prob *= lm.parent_probs[i]
                weight_sum += lm.parent_weights[i]
            else:
                prob *= 1.0 - lm.parent_probs[i]
        belief += prob * (weight_sum / total_weight)
    return belief


def eval_link_matrix_closed(lm: LinkMatrix) -> float:
    """Closed form of the weighted-sum rule: sum(w_i * p_i) / sum(w_i)."""
    total_weight = sum(lm.parent_weights)
    return (
        sum(w * p for w, p in zip(lm.parent_weights, lm.parent_probs))
        / total_weight
    )


def build_document_network(corpus: Corpus, index: InvertedIndex) -> InferenceGraph:
    """Document -> text -> concept layers for a whole corpus.

    Concept labels come from a document's declared concepts when present
    (edge weight 1 from each of its text nodes) and otherwise from its
    indexed terms (edge weight tf*idf from the fields containing the term).
    """
    if corpus.n_docs == 0:
        raise ValueError("empty corpus")
    graph = InferenceGraph()
    prior = 1.0 / corpus.n_docs
    for doc in sorted(corpus.documents, key=lambda d: d.id):
        d_id = doc_node_id(doc.id)
        graph.add_node(NetNode(d_id, NodeKind.DOCUMENT, prior))
        tokens_by_field = {
            name: tokens
            for name, tokens in field_tokens(doc, corpus.config).items()
            if tokens
        }
        for name in tokens_by_field:
            t_id = text_node_id(name, doc.id)
            graph.add_node(NetNode(t_id, NodeKind.TEXT))
            graph.add_edge(d_id, t_id, 1.0)
        if doc.concepts:
            for label in sorted(doc.concepts):
                c_id = concept_node_id(label)
                if c_id not in graph.nodes:
                    graph.add_node(NetNode(c_id, NodeKind.CONCEPT))
                for name in tokens_by_field:
                    graph.add_edge(text_node_id(name, doc.id), c_id, 1.0)
        else:
            counts = corpus.doc_counts[doc.id]
            for term in sorted(counts):
                weight = max(counts[term] * idf(index, term), MIN_EDGE_WEIGHT)
                c_id = concept_node_id(term)
                if c_id not in graph.nodes:
                    graph.add_node(NetNode(c_id, NodeKind.CONCEPT))
                for name, tokens in tokens_by_field.items():
                    if term in tokens:
                        graph.add_edge(text_node_id(name, doc.id), c_id, weight)
    return graph


def attach_query_network(
    graph: InferenceGraph, query_terms: Sequence[tuple[str, float]]
) -> InferenceGraph:
    """Return a new graph with query nodes and the single result node added.

    Duplicate terms merge with summed weight.  A term matching no concept
    node yields a parentless query node, which evaluates to belief 0.
    """
    if not query_terms:
        raise ValueError("at least one query term required")
    merged: dict[str, float] = {}
    for term, weight in query_terms:
        if weight <= 0.0:
            raise ValueError("query term weights must be positive")
        merged[term] = merged.get(term, 0.0) + weight
    extended = graph.copy()
    extended.add_node(NetNode(RESULT_NODE_ID, NodeKind.RESULT))
    for term, weight in merged.items():
        q_id = query_node_id(term)
        extended.add_node(NetNode(q_id, NodeKind.QUERY))
        c_id = concept_node_id(term)
        if c_id in extended.nodes:
            extended.add_edge(c_id, q_id, weight)
        extended.add_edge(q_id, RESULT_NODE_ID, weight)
    return extended


def _beliefs(graph: InferenceGraph, instantiated_doc: str) -> dict[str, float]:
    order = graph.topological_order()
    parents = graph.parent_map()
    belief: dict[str, float] = {}
    for node_id in order:
        node = graph.nodes[node_id]
        if node.kind is NodeKind.DOCUMENT:
            belief[node_id] = 1.0 if node_id == instantiated_doc else 0.0
            continue
        incoming = parents.get(node_id)
        if not incoming:
            belief[node_id] = 0.0
            continue
        lm = LinkMatrix(
            parent_probs=tuple(belief[e.parent] for e in incoming),
            parent_weights=tuple(e.weight for e in incoming),
        )
        belief[node_id] = eval_link_matrix_closed(lm)
    return belief


def score_inference(graph: InferenceGraph, doc_id: str) -> float:
    """Belief of the result node with ``doc_id`` instantiated true.

    The candidate document's node is set to probability 1 and every other
    document node to 0, making scores comparable across documents.
    """
    d_id = doc_node_id(doc_id)
    if d_id not in graph.nodes:
        raise KeyError(f"unknown document: {doc_id!r}")
    if RESULT_NODE_ID not in graph.nodes:
        raise ValueError("graph has no result node; attach a query network first")
    return _beliefs(graph, d_id)[RESULT_NODE_ID]


def rank_inference(graph: InferenceGraph, k: int) -> RankedList:
    """Top-k documents by result-node belief."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scores = (
        (doc_id, score_inference(graph, doc_id))
        for doc_id in graph.document_ids()
    )
    return top_k(scores, k)


def graph_dump(graph: InferenceGraph) -> str:
    """Deterministic JSON debug dump: sorted nodes and edges."""
    payload = {
        "nodes": [
            {
                "id": node.id,
                "kind": node.kind.value,
                "prior": float(node.prior),
            }
            for node in sorted(graph.nodes.values(), key=lambda n: n.id)
        ],
        "edges": [
            [edge.parent, edge.child, edge.weight] for edge in sorted(graph.edges)
        ],
    }
    return json.dumps(payload, ensure_ascii=False)
