"""HTTP service tying the retrieval models together, plus ranking evaluation.

All JSON endpoints answer with a ``status`` field; errors carry
``error.code`` and ``error.message``.  The index and corpus are read-only;
only the query store is written, and every search is persisted there so
follow-up feedback can reference it by id.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Mapping, Sequence

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .bim import RelevanceJudgments, rank_bim
from .corpus import Corpus, Document, TokenizerConfig, tokenize
from .expansion import (
    WeightedQuery,
    default_feedback_coefficients,
    expand_lca,
    retrieval_tree,
    rocchio_refine,
)
from .index import InvertedIndex, doc_term_weight
from .inference_net import (
    InferenceGraph,
    attach_query_network,
    build_document_network,
    rank_inference,
)
from .ontology import concept_graph_from_inference, export_owl
from .pnorm import QueryError, parse_query, query_term_weights, rank_pnorm
from .query_store import DEFAULT_SIMILARITY_THRESHOLD, QueryStore
from .ranking import RankedList

DEFAULT_PORT = 8750
PORT_ENV_VAR = "MIRSTAT_PORT"

MODELS = ("pnorm", "bim", "inet")
SNIPPET_LENGTH = 160


# --- evaluation ----------------------------------------------------------


@dataclass(frozen=True)
class QueryMetrics:
    precision: float
    recall: float


@dataclass(frozen=True)
class EvalReport:
    per_query: dict[str, QueryMetrics]
    macro_precision: float
    macro_recall: float


def evaluate(
    index: InvertedIndex,
    queries: Sequence[str],
    qrels: Mapping[str, Sequence[str]],
    k: int = 10,
) -> EvalReport:
    """Precision@k and recall@k of the p-norm ranker per query, plus macros."""
    if k < 1:
        raise ValueError("k must be >= 1")
    for query in queries:
        if query not in qrels:
            raise ValueError(f"query missing from qrels: {query!r}")
    per_query: dict[str, QueryMetrics] = {}
    for query in queries:
        ranked = rank_pnorm(index, parse_query(query), k)
        retrieved = {doc_id for doc_id, _ in ranked}
        relevant = set(qrels[query])
        hits = len(retrieved & relevant)
        per_query[query] = QueryMetrics(
            precision=hits / k,
            recall=hits / len(relevant) if relevant else 0.0,
        )
    count = len(per_query)
    return EvalReport(
        per_query=per_query,
        macro_precision=(
            sum(m.precision for m in per_query.values()) / count if count else 0.0
        ),
        macro_recall=(
            sum(m.recall for m in per_query.values()) / count if count else 0.0
        ),
    )


# --- service state --------------------------------------------------------


@dataclass
class ServiceState:
    """Shared, read-mostly state behind the HTTP handlers."""

    store: QueryStore
    index: InvertedIndex | None = None
    corpus: Corpus | None = None
    reuse_threshold: float = DEFAULT_SIMILARITY_THRESHOLD
    static_dir: Path | None = None
    _network: InferenceGraph | None = dataclass_field(default=None, repr=False)
    _docs_by_id: dict[str, Document] | None = dataclass_field(
        default=None, repr=False
    )

    def document(self, doc_id: str) -> Document | None:
        if self.corpus is None:
            return None
        if self._docs_by_id is None:
            self._docs_by_id = {doc.id: doc for doc in self.corpus.documents}
        return self._docs_by_id.get(doc_id)

    def document_network(self) -> InferenceGraph:
        if self.corpus is None or self.index is None:
            raise ValueError("corpus and index required")
        if self._network is None:
            self._network = build_document_network(self.corpus, self.index)
        return self._network


def _error(status_code: int, code: str, message: str, **extra) -> JSONResponse:
    body = {"status": "error", "error": {"code": code, "message": message, **extra}}
    return JSONResponse(body, status_code=status_code)


def _snippet(state: ServiceState, doc_id: str) -> str:
    doc = state.document(doc_id)
    if doc is None:
        return ""
    return (doc.body or doc.title or doc.caption)[:SNIPPET_LENGTH]


def _result_rows(state: ServiceState, ranked: RankedList) -> list[dict]:
    return [
        {"doc_id": doc_id, "score": score, "snippet": _snippet(state, doc_id)}
        for doc_id, score in ranked
    ]


def _query_terms_list(query) -> list[str]:
    """Normalize a bim/inet query (string or list of terms) to term form."""
    if isinstance(query, str):
        return tokenize(query, TokenizerConfig())
    if isinstance(query, list) and all(isinstance(t, str) for t in query):
        return [t.lower() for t in query]
    raise ValueError("query must be a string or a list of terms")


def _positive_int(payload: dict, key: str, default: int) -> int:
    value = payload.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{key!r} must be a positive integer")
    return value


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="mirstat", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return _error(400, "bad_request", "invalid request body")

    @app.get("/api/health")
    def health() -> JSONResponse:
        return JSONResponse(
            {
                "status": "ok",
                "index_loaded": state.index is not None,
                "corpus_loaded": state.corpus is not None,
                "documents": state.index.n_docs if state.index else 0,
            }
        )

    @app.post("/api/search")
    async def search(request: Request) -> JSONResponse:
        payload = await _json_body(request)
        if not isinstance(payload, dict):
            return _error(400, "bad_request", "expected a JSON object")
        if state.index is None:
            return _error(409, "no_index", "no index is loaded")
        index = state.index
        model = payload.get("model", "pnorm")
        if model not in MODELS:
            return _error(
                400, "bad_request", f"model must be one of {list(MODELS)}"
            )
        try:
            k = _positive_int(payload, "k", 10)
            query = payload.get("query")
            if model == "pnorm":
                if not isinstance(query, str):
                    return _error(400, "bad_request", "query must be a string")
                default_p = payload.get("p", 2.0)
                if not isinstance(default_p, (int, float)) or default_p < 1:
                    return _error(400, "bad_request", "'p' must be a number >= 1")
                tree = parse_query(query, float(default_p))
                vector = query_term_weights(tree)
                ranked = rank_pnorm(index, tree, k)
            else:
                terms = _query_terms_list(query)
                if not terms:
                    return _error(400, "bad_request", "query has no terms")
                vector = {t: 1.0 for t in terms}
                if model == "bim":
                    relevant = payload.get("relevant", [])
                    unknown = [d for d in relevant if d not in index.doc_max_tfidf]
                    if unknown:
                        return _error(
                            400, "bad_request", f"unknown document: {unknown[0]!r}"
                        )
                    judgments = RelevanceJudgments(
                        frozenset(relevant), index.n_docs
                    )
                    ranked = rank_bim(index, terms, judgments, "half", k)
                else:
                    if state.corpus is None:
                        return _error(
                            409,
                            "no_corpus",
                            "inference model needs the corpus; start with --corpus",
                        )
                    graph = attach_query_network(
                        state.document_network(), [(t, 1.0) for t in terms]
                    )
                    ranked = rank_inference(graph, k)
        except QueryError as exc:
            return _error(400, "parse_error", str(exc), column=exc.column)
        except (ValueError, KeyError) as exc:
            return _error(400, "bad_request", str(exc))

        reused = None
        if payload.get("reuse"):
            hit = state.store.find_reusable(vector, state.reuse_threshold)
            if hit is not None:
                entry, sim = hit
                reused = {
                    "id": entry.id,
                    "similarity": sim,
                    "results": list(entry.result_doc_ids),
                }
        saved = state.store.save(vector, [doc_id for doc_id, _ in ranked])
        return JSONResponse(
            {
                "status": "ok",
                "model": model,
                "query_id": saved.id,
                "results": _result_rows(state, ranked),
                "reused_from": reused,
            }
        )

    @app.post("/api/expand")
    async def expand(request: Request) -> JSONResponse:
        payload = await _json_body(request)
        if not isinstance(payload, dict):
            return _error(400, "bad_request", "expected a JSON object")
        if state.index is None:
            return _error(409, "no_index", "no index is loaded")
        query = payload.get("query")
        if not isinstance(query, str):
            return _error(400, "bad_request", "query must be a string")
        try:
            num_top = _positive_int(payload, "m_top", 5)
            if num_top < 2:
                return _error(400, "bad_request", "'m_top' must be at least 2")
            num_concepts = _positive_int(payload, "k_concepts", 10)
            tree = parse_query(query)
            result = expand_lca(
                state.index,
                WeightedQuery(query_term_weights(tree)),
                num_top,
                num_concepts,
            )
        except QueryError as exc:
            return _error(400, "parse_error", str(exc), column=exc.column)
        except (ValueError, KeyError) as exc:
            return _error(400, "bad_request", str(exc))
        return JSONResponse(
            {
                "status": "ok",
                "no_expansion": not result.expanded,
                "query": result.query.terms,
                "added": [
                    {
                        "concept": cand.concept,
                        "belief": cand.belief,
                        "cooccurrence": cand.cooccurrence,
                        "weight": result.query.terms[cand.concept],
                    }
                    for cand in result.added
                ],
            }
        )

    @app.post("/api/feedback")
    async def feedback(request: Request) -> JSONResponse:
        payload = await _json_body(request)
        if not isinstance(payload, dict):
            return _error(400, "bad_request", "expected a JSON object")
        if state.index is None:
            return _error(409, "no_index", "no index is loaded")
        index = state.index
        query_id = payload.get("query_id")
        if not isinstance(query_id, str):
            return _error(400, "bad_request", "'query_id' must be a string")
        stored = state.store.get(query_id)
        if stored is None:
            return _error(404, "unknown_query", f"unknown query_id: {query_id!r}")
        relevant = payload.get("relevant", [])
        nonrelevant = payload.get("nonrelevant", [])
        for doc_id in [*relevant, *nonrelevant]:
            if doc_id not in index.doc_max_tfidf:
                return _error(400, "bad_request", f"unknown document: {doc_id!r}")
        try:
            k = _positive_int(payload, "k", 10)
            rd_maps = [_doc_weight_map(index, d) for d in relevant]
            nrd_maps = [_doc_weight_map(index, d) for d in nonrelevant]
            default_y, default_z = default_feedback_coefficients(rd_maps, nrd_maps)
            x = _coefficient(payload, "x", 1.0)
            y = _coefficient(payload, "y", default_y)
            z = _coefficient(payload, "z", default_z)
            refined = rocchio_refine(
                WeightedQuery(stored.vector), rd_maps, nrd_maps, x, y, z
            )
        except (ValueError, KeyError) as exc:
            return _error(400, "bad_request", str(exc))
        if not refined.terms:
            return JSONResponse(
                {
                    "status": "ok",
                    "query_id": None,
                    "weights": {},
                    "results": [],
                    "warning": "all term weights were discarded",
                }
            )
        ranked = rank_pnorm(index, retrieval_tree(refined.terms), k)
        saved = state.store.save(refined, [doc_id for doc_id, _ in ranked])
        return JSONResponse(
            {
                "status": "ok",
                "query_id": saved.id,
                "weights": refined.terms,
                "results": _result_rows(state, ranked),
                "warning": None,
            }
        )

    @app.get("/api/queries")
    def list_queries() -> JSONResponse:
        return JSONResponse(
            {
                "status": "ok",
                "queries": [
                    {
                        "id": entry.id,
                        "created_at": entry.created_at,
                        "vector": entry.vector,
                        "results": list(entry.result_doc_ids),
                    }
                    for entry in state.store.entries()
                ],
            }
        )

    @app.get("/api/documents/{doc_id}")
    def get_document(doc_id: str) -> JSONResponse:
        if state.corpus is None:
            return _error(409, "no_corpus", "no corpus is loaded")
        doc = state.document(doc_id)
        if doc is None:
            return _error(404, "unknown_document", f"unknown document: {doc_id!r}")
        return JSONResponse(
            {
                "status": "ok",
                "document": {
                    "id": doc.id,
                    "title": doc.title,
                    "body": doc.body,
                    "caption": doc.caption,
                    "media_type": doc.media_type.value,
                    "concepts": sorted(doc.concepts),
                },
            }
        )

    @app.get("/api/ontology.owl")
    def ontology() -> Response:
        if state.index is None:
            return _error(409, "no_index", "no index is loaded")
        if state.corpus is None:
            return _error(409, "no_corpus", "no corpus is loaded")
        concept_graph = concept_graph_from_inference(state.document_network())
        owl = export_owl(concept_graph)
        return Response(content=owl.text, media_type="application/rdf+xml")

    if state.static_dir is not None and Path(state.static_dir).is_dir():
        app.mount(
            "/", StaticFiles(directory=str(state.static_dir), html=True), name="ui"
        )

    return app


async def _json_body(request: Request):
    try:
        return await request.json()
    except Exception:
        return None


def _coefficient(payload: dict, key: str, default: float) -> float:
    value = payload.get(key)
    if value is None:
        return default
    if not isinstance(value, (int, float)) or isinstance(value, bool) or value < 0:
        raise ValueError(f"{key!r} must be a non-negative number")
    return float(value)


def _doc_weight_map(index: InvertedIndex, doc_id: str) -> dict[str, float]:
    """Normalized tf*idf weights of every term in one document."""
    weights: dict[str, float] = {}
    for term, plist in index.postings.items():
        for posting in plist:
            if posting.doc_id == doc_id:
                weight = doc_term_weight(index, doc_id, term)
                if weight > 0.0:
                    weights[term] = weight
    return weights
