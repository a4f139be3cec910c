import json
import random

import pytest

from helpers import NO_STEM, make_corpus
from mirstat.corpus import Corpus, Document
from mirstat.index import build_index
from mirstat.inference_net import (
    RESULT_NODE_ID,
    InferenceGraph,
    LinkMatrix,
    NetNode,
    NodeKind,
    NotADagError,
    attach_query_network,
    build_document_network,
    concept_node_id,
    doc_node_id,
    eval_link_matrix_closed,
    eval_link_matrix_enum,
    graph_dump,
    query_node_id,
    rank_inference,
    score_inference,
    text_node_id,
)


def single_doc_network():
    corpus = make_corpus({"d1": "cat"})
    return build_document_network(corpus, build_index(corpus)), corpus


class TestBuildDocumentNetwork:
    def test_single_doc_single_field_chain(self):
        graph, _ = single_doc_network()
        assert set(graph.nodes) == {
            doc_node_id("d1"),
            text_node_id("body", "d1"),
            concept_node_id("cat"),
        }
        assert len(graph.edges) == 2

    def test_document_priors_uniform(self):
        corpus = make_corpus({"d1": "cat", "d2": "dog"})
        graph = build_document_network(corpus, build_index(corpus))
        for node in graph.nodes.values():
            if node.kind is NodeKind.DOCUMENT:
                assert node.prior == pytest.approx(0.5)

    def test_shared_declared_concept_has_two_parents(self):
        docs = [
            Document(id="d1", body="x", concepts=frozenset({"animal"})),
            Document(id="d2", body="y", concepts=frozenset({"animal"})),
        ]
        corpus = Corpus.from_documents(docs, NO_STEM)
        graph = build_document_network(corpus, build_index(corpus))
        parents = [
            e.parent for e in graph.edges if e.child == concept_node_id("animal")
        ]
        assert sorted(parents) == [
            text_node_id("body", "d1"),
            text_node_id("body", "d2"),
        ]

    def test_empty_corpus_rejected(self):
        corpus = make_corpus({})
        with pytest.raises(ValueError, match="empty corpus"):
            build_document_network(corpus, build_index(corpus))

    def test_one_text_node_per_nonempty_field(self):
        docs = [Document(id="d1", title="Sky", body="cloud rain")]
        corpus = Corpus.from_documents(docs, NO_STEM)
        graph = build_document_network(corpus, build_index(corpus))
        text_nodes = [
            n.id for n in graph.nodes.values() if n.kind is NodeKind.TEXT
        ]
        assert sorted(text_nodes) == [
            text_node_id("body", "d1"),
            text_node_id("title", "d1"),
        ]

    def test_always_acyclic(self):
        corpus = make_corpus({"d1": "cat dog", "d2": "dog bird", "d3": "cat"})
        graph = build_document_network(corpus, build_index(corpus))
        graph.topological_order()


class TestAttachQueryNetwork:
    def test_matched_term_links_to_result(self):
        base, _ = single_doc_network()
        graph = attach_query_network(base, [("cat", 1.0)])
        result_parents = [
            e.parent for e in graph.edges if e.child == RESULT_NODE_ID
        ]
        assert result_parents == [query_node_id("cat")]

    def test_unmatched_term_evaluates_to_zero(self):
        base, _ = single_doc_network()
        graph = attach_query_network(base, [("unicorn", 1.0), ("cat", 1.0)])
        # d1 fully supports "cat" but "unicorn" contributes belief 0.
        assert score_inference(graph, "d1") == pytest.approx(0.5)

    def test_duplicate_terms_merge_with_summed_weight(self):
        base, _ = single_doc_network()
        graph = attach_query_network(base, [("cat", 0.5), ("cat", 0.25)])
        query_nodes = [
            n for n in graph.nodes.values() if n.kind is NodeKind.QUERY
        ]
        assert len(query_nodes) == 1
        weights = [e.weight for e in graph.edges if e.child == RESULT_NODE_ID]
        assert weights == [pytest.approx(0.75)]

    def test_base_graph_not_mutated(self):
        base, _ = single_doc_network()
        before_nodes = dict(base.nodes)
        before_edges = list(base.edges)
        attach_query_network(base, [("cat", 1.0)])
        assert base.nodes == before_nodes
        assert base.edges == before_edges

    def test_requires_terms(self):
        base, _ = single_doc_network()
        with pytest.raises(ValueError):
            attach_query_network(base, [])


class TestLinkMatrix:
    def test_true_true_false_column(self):
        lm = LinkMatrix((1.0, 1.0, 0.0), (1.0, 1.0, 1.0))
        assert eval_link_matrix_enum(lm) == pytest.approx(2 / 3, abs=1e-15)
        assert eval_link_matrix_closed(lm) == pytest.approx(2 / 3, abs=1e-15)

    def test_all_true_gives_one(self):
        lm = LinkMatrix((1.0, 1.0, 1.0, 1.0), (0.3, 2.0, 1.5, 0.1))
        assert eval_link_matrix_enum(lm) == pytest.approx(1.0, abs=1e-12)

    def test_single_parent_passthrough(self):
        assert eval_link_matrix_enum(LinkMatrix((0.5,), (3.0,))) == 0.5
        assert eval_link_matrix_closed(LinkMatrix((0.37,), (9.0,))) == 0.37

    def test_two_parents_mean(self):
        lm = LinkMatrix((0.2, 0.8), (1.0, 1.0))
        assert eval_link_matrix_enum(lm) == pytest.approx(0.5, abs=1e-12)
        assert eval_link_matrix_closed(lm) == pytest.approx(0.5, abs=1e-12)

    def test_enumeration_guard(self):
        n = 21
        lm = LinkMatrix((0.5,) * n, (1.0,) * n)
        with pytest.raises(ValueError, match="closed form"):
            eval_link_matrix_enum(lm)

    def test_closed_matches_enumeration(self):
        rng = random.Random(61)
        for _ in range(300):
            n = rng.randint(1, 10)
            lm = LinkMatrix(
                tuple(rng.random() for _ in range(n)),
                tuple(rng.uniform(0.01, 5.0) for _ in range(n)),
            )
            assert eval_link_matrix_closed(lm) == pytest.approx(
                eval_link_matrix_enum(lm), abs=1e-9
            )

    def test_weight_scale_invariance(self):
        rng = random.Random(67)
        for _ in range(100):
            n = rng.randint(1, 6)
            probs = tuple(rng.random() for _ in range(n))
            weights = tuple(rng.uniform(0.1, 2.0) for _ in range(n))
            scale = rng.uniform(0.01, 100.0)
            scaled = tuple(w * scale for w in weights)
            assert eval_link_matrix_closed(
                LinkMatrix(probs, scaled)
            ) == pytest.approx(
                eval_link_matrix_closed(LinkMatrix(probs, weights)), abs=1e-12
            )

    def test_validation(self):
        with pytest.raises(ValueError):
            LinkMatrix((), ())
        with pytest.raises(ValueError):
            LinkMatrix((0.5,), (0.0,))
        with pytest.raises(ValueError):
            LinkMatrix((1.5,), (1.0,))


def reference_beliefs(graph, instantiated_doc):
    """Memoized recursive evaluation using the enumerated link matrix."""
    parents = {}
    for edge in graph.edges:
        parents.setdefault(edge.child, []).append(edge)
    memo = {}

    def belief(node_id):
        if node_id in memo:
            return memo[node_id]
        node = graph.nodes[node_id]
        if node.kind is NodeKind.DOCUMENT:
            value = 1.0 if node_id == instantiated_doc else 0.0
        else:
            incoming = parents.get(node_id, [])
            if not incoming:
                value = 0.0
            else:
                value = eval_link_matrix_enum(
                    LinkMatrix(
                        tuple(belief(e.parent) for e in incoming),
                        tuple(e.weight for e in incoming),
                    )
                )
        memo[node_id] = value
        return value

    return belief


class TestScoreInference:
    def test_unit_chain_scores_one(self):
        graph = InferenceGraph()
        graph.add_node(NetNode("doc:d1", NodeKind.DOCUMENT, 1.0))
        graph.add_node(NetNode("text:body:d1", NodeKind.TEXT))
        graph.add_node(NetNode("concept:cat", NodeKind.CONCEPT))
        graph.add_node(NetNode("query:cat", NodeKind.QUERY))
        graph.add_node(NetNode(RESULT_NODE_ID, NodeKind.RESULT))
        graph.add_edge("doc:d1", "text:body:d1", 1.0)
        graph.add_edge("text:body:d1", "concept:cat", 1.0)
        graph.add_edge("concept:cat", "query:cat", 1.0)
        graph.add_edge("query:cat", RESULT_NODE_ID, 1.0)
        assert score_inference(graph, "d1") == 1.0

    def test_doc_without_query_term_scores_zero(self):
        corpus = make_corpus({"d1": "cat dog", "d2": "dog"})
        graph = build_document_network(corpus, build_index(corpus))
        graph = attach_query_network(graph, [("cat", 1.0)])
        assert score_inference(graph, "d1") > 0.0
        assert score_inference(graph, "d2") == 0.0

    def test_random_dags_match_enumeration_oracle(self):
        rng = random.Random(71)
        for _ in range(30):
            graph = InferenceGraph()
            doc_ids = ["d1", "d2"]
            for d in doc_ids:
                graph.add_node(NetNode(doc_node_id(d), NodeKind.DOCUMENT, 0.5))
            layer_ids = [doc_node_id(d) for d in doc_ids]
            for layer, kind in enumerate(
                (NodeKind.TEXT, NodeKind.CONCEPT, NodeKind.QUERY)
            ):
                new_ids = []
                for i in range(rng.randint(1, 2)):
                    node_id = f"{kind.value}{layer}:{i}"
                    graph.add_node(NetNode(node_id, kind))
                    for parent in layer_ids:
                        if rng.random() < 0.8:
                            graph.add_edge(parent, node_id, rng.uniform(0.1, 2.0))
                    new_ids.append(node_id)
                layer_ids = new_ids
            graph.add_node(NetNode(RESULT_NODE_ID, NodeKind.RESULT))
            for parent in layer_ids:
                graph.add_edge(parent, RESULT_NODE_ID, rng.uniform(0.1, 2.0))
            for d in doc_ids:
                expected = reference_beliefs(graph, doc_node_id(d))(RESULT_NODE_ID)
                assert score_inference(graph, d) == pytest.approx(
                    expected, abs=1e-9
                )

    def test_beliefs_stay_in_unit_interval(self):
        corpus = make_corpus(
            {"d1": "cat dog bird", "d2": "dog", "d3": "cat cat bird"}
        )
        graph = build_document_network(corpus, build_index(corpus))
        graph = attach_query_network(graph, [("cat", 0.7), ("dog", 0.2)])
        for d in ("d1", "d2", "d3"):
            assert 0.0 <= score_inference(graph, d) <= 1.0

    def test_cycle_detected(self):
        graph = InferenceGraph()
        graph.add_node(NetNode("doc:d1", NodeKind.DOCUMENT))
        graph.add_node(NetNode("a", NodeKind.TEXT))
        graph.add_node(NetNode("b", NodeKind.TEXT))
        graph.add_node(NetNode(RESULT_NODE_ID, NodeKind.RESULT))
        graph.add_edge("a", "b", 1.0)
        graph.add_edge("b", "a", 1.0)
        graph.add_edge("doc:d1", "a", 1.0)
        with pytest.raises(NotADagError, match="not a DAG"):
            score_inference(graph, "d1")

    def test_unknown_document(self):
        base, _ = single_doc_network()
        graph = attach_query_network(base, [("cat", 1.0)])
        with pytest.raises(KeyError):
            score_inference(graph, "zz")

    def test_monotone_in_parent_probability(self):
        rng = random.Random(73)
        for _ in range(100):
            n = rng.randint(1, 5)
            probs = [rng.random() for _ in range(n)]
            weights = tuple(rng.uniform(0.1, 2.0) for _ in range(n))
            base_val = eval_link_matrix_closed(LinkMatrix(tuple(probs), weights))
            i = rng.randrange(n)
            probs[i] = min(1.0, probs[i] + rng.uniform(0.0, 0.2))
            bumped = eval_link_matrix_closed(LinkMatrix(tuple(probs), weights))
            assert bumped >= base_val - 1e-12


class TestRankInference:
    def make_ranked(self, query_terms):
        corpus = make_corpus(
            {"d1": "cat cat dog", "d2": "dog wolf", "d3": "cat bird"}
        )
        graph = build_document_network(corpus, build_index(corpus))
        graph = attach_query_network(graph, query_terms)
        return graph, rank_inference(graph, 10)

    def test_empty_intersection_gives_empty_ranking(self):
        _, ranked = self.make_ranked([("unicorn", 1.0)])
        assert ranked == []

    def test_matches_per_document_oracle(self):
        graph, ranked = self.make_ranked([("cat", 1.0), ("dog", 0.5)])
        expected = []
        for d in ("d1", "d2", "d3"):
            score = reference_beliefs(graph, doc_node_id(d))(RESULT_NODE_ID)
            if score > 0:
                expected.append((d, score))
        expected.sort(key=lambda pair: (-pair[1], pair[0]))
        assert [d for d, _ in ranked] == [d for d, _ in expected]
        for (_, got), (_, want) in zip(ranked, expected):
            assert got == pytest.approx(want, abs=1e-9)

    def test_identical_documents_tie_by_id(self):
        corpus = make_corpus({"db": "cat", "da": "cat", "dz": "dog"})
        graph = build_document_network(corpus, build_index(corpus))
        graph = attach_query_network(graph, [("cat", 1.0)])
        ranked = rank_inference(graph, 10)
        assert [d for d, _ in ranked] == ["da", "db"]


class TestGraphDump:
    def test_sorted_and_well_formed(self):
        corpus = make_corpus({"d2": "dog", "d1": "cat dog"})
        graph = build_document_network(corpus, build_index(corpus))
        payload = json.loads(graph_dump(graph))
        ids = [node["id"] for node in payload["nodes"]]
        assert ids == sorted(ids)
        for node in payload["nodes"]:
            assert set(node) == {"id", "kind", "prior"}
        node_ids = set(ids)
        for parent, child, weight in payload["edges"]:
            assert parent in node_ids and child in node_ids
            assert weight > 0
