"""Automatic query expansion (local context analysis) and Rocchio refinement.

Expansion ranks candidate concepts from the top-ranked documents by a
belief product over the query terms:

    belief(Q, c) = prod_i [ s + ln(co(c, t_i)) * idf_c / ln(n_top) ] ^ idf_i

where co(c, t) is the summed per-document product of occurrence counts of
concept and query term, s is a small smoothing constant, and the logarithm
is guarded to 0 below a count of 1.  Refinement re-weights query terms
toward judged-relevant documents and away from judged-non-relevant ones,
discarding terms whose weight drops to 0 or below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .index import InvertedIndex, idf
from .pnorm import Or, Term, rank_pnorm

DEFAULT_SMOOTHING = 0.1


class QueryOrigin(str, Enum):
    USER = "user"
    EXPANDED = "expanded"
    REFINED = "refined"


@dataclass(frozen=True)
class WeightedQuery:
    """Term-to-weight mapping with the provenance of its weights."""

    terms: dict[str, float]
    origin: QueryOrigin = QueryOrigin.USER

    def __post_init__(self) -> None:
        for term, weight in self.terms.items():
            if weight == 0.0:
                raise ValueError(f"zero-weight term not allowed: {term!r}")
            if self.origin is QueryOrigin.REFINED and weight < 0.0:
                raise ValueError("refined queries cannot carry negative weights")


@dataclass(frozen=True)
class ConceptCandidate:
    concept: str
    cooccurrence: float
    belief: float


@dataclass(frozen=True)
class ExpansionResult:
    query: WeightedQuery
    added: tuple[ConceptCandidate, ...] = ()
    expanded: bool = True


def cooccurrence(
    concept: str, query_term: str, top_docs: Sequence[Mapping[str, int]]
) -> float:
    """Summed product of per-document occurrence counts."""
    if not top_docs:
        raise ValueError("top_docs must be non-empty")
    return float(
        sum(doc.get(query_term, 0) * doc.get(concept, 0) for doc in top_docs)
    )


def lca_belief(
    query_terms: Sequence[tuple[str, float]],
    concept: str,
    concept_idf: float,
    top_docs: Sequence[Mapping[str, int]],
    smoothing: float = DEFAULT_SMOOTHING,
) -> float:
    """Belief that ``concept`` expands the query, from top-document evidence.

    ``query_terms`` pairs each term with its idf, which becomes the factor
    exponent.  Needs at least two top documents so ln(n_top) is positive.
    """
    if smoothing <= 0.0:
        raise ValueError("smoothing must be positive")
    if len(top_docs) < 2:
        raise ValueError("insufficient top documents")
    log_n = math.log(len(top_docs))
    belief = 1.0
    for term, term_idf in query_terms:
        count = cooccurrence(concept, term, top_docs)
        evidence = math.log(count) if count >= 1.0 else 0.0
        belief *= (smoothing + evidence * concept_idf / log_n) ** term_idf
    return belief


def _top_doc_counts(
    index: InvertedIndex, doc_ids: Sequence[str]
) -> list[dict[str, int]]:
    wanted = {doc_id: i for i, doc_id in enumerate(doc_ids)}
    counts: list[dict[str, int]] = [dict() for _ in doc_ids]
    for term, plist in index.postings.items():
        for posting in plist:
            slot = wanted.get(posting.doc_id)
            if slot is not None:
                counts[slot][term] = posting.tf
    return counts


def retrieval_tree(terms: Mapping[str, float]) -> Or | Term:
    """Soft-OR retrieval tree for a weighted query, weights scaled into (0, 1]."""
    if not terms:
        raise ValueError("query has no terms")
    w_max = max(terms.values())
    leaves = tuple(Term(t, terms[t] / w_max) for t in sorted(terms))
    return leaves[0] if len(leaves) == 1 else Or(leaves)


def expand_lca(
    index: InvertedIndex,
    query: WeightedQuery,
    num_top_docs: int = 5,
    num_concepts: int = 10,
    smoothing: float = DEFAULT_SMOOTHING,
) -> ExpansionResult:
    """Append the best co-occurring concepts to a query.

    Retrieves the top documents with a p-norm OR over the query terms,
    scores every non-query term of those documents by belief, and appends
    the top ``num_concepts`` with weights normalized by the best belief.
    Returns the query unchanged (``expanded=False``) when retrieval yields
    fewer than the two documents the belief formula needs.
    """
    if num_top_docs < 2:
        raise ValueError("num_top_docs must be >= 2")
    if num_concepts < 1:
        raise ValueError("num_concepts must be >= 1")
    ranked = rank_pnorm(index, retrieval_tree(query.terms), num_top_docs)
    if len(ranked) < 2:
        return ExpansionResult(query=query, added=(), expanded=False)
    doc_ids = [doc_id for doc_id, _ in ranked]
    top_docs = _top_doc_counts(index, doc_ids)
    query_idfs = [
        (term, idf(index, term))
        for term in sorted(query.terms)
        if index.df(term) > 0
    ]
    candidates = sorted(
        {term for counts in top_docs for term in counts} - set(query.terms)
    )
    if not candidates or not query_idfs:
        return ExpansionResult(query=query, added=(), expanded=False)
    scored = [
        ConceptCandidate(
            concept=c,
            cooccurrence=sum(
                cooccurrence(c, term, top_docs) for term, _ in query_idfs
            ),
            belief=lca_belief(query_idfs, c, idf(index, c), top_docs, smoothing),
        )
        for c in candidates
    ]
    scored.sort(key=lambda cand: (-cand.belief, cand.concept))
    added = tuple(scored[:num_concepts])
    best = added[0].belief
    new_terms = dict(query.terms)
    for cand in added:
        new_terms[cand.concept] = cand.belief / best
    return ExpansionResult(
        query=WeightedQuery(new_terms, QueryOrigin.EXPANDED),
        added=added,
        expanded=True,
    )


def rocchio_refine(
    old: WeightedQuery,
    relevant_docs: Sequence[Mapping[str, float]],
    nonrelevant_docs: Sequence[Mapping[str, float]],
    x: float = 1.0,
    y: float = 0.0,
    z: float = 0.0,
) -> WeightedQuery:
    """Linear feedback re-weighting with automatic discard of dropped terms.

    new_w(t) = x*old_w(t) + y*mean over relevant docs of w(t, d)
                          - z*mean over non-relevant docs of w(t, d)

    An empty document set contributes nothing; terms ending at or below 0
    are removed.  Candidate terms are the old query's terms plus every term
    of the relevant documents.
    """
    if x < 0.0 or y < 0.0 or z < 0.0:
        raise ValueError("x, y, z must be non-negative")
    vocab = set(old.terms)
    for doc in relevant_docs:
        vocab.update(doc)
    new_terms: dict[str, float] = {}
    for term in sorted(vocab):
        weight = x * old.terms.get(term, 0.0)
        # fsum keeps the result independent of document order.
        if relevant_docs:
            weight += y * math.fsum(d.get(term, 0.0) for d in relevant_docs) / len(
                relevant_docs
            )
        if nonrelevant_docs:
            weight -= z * math.fsum(
                d.get(term, 0.0) for d in nonrelevant_docs
            ) / len(nonrelevant_docs)
        if weight > 0.0:
            new_terms[term] = weight
    return WeightedQuery(new_terms, QueryOrigin.REFINED)


def default_feedback_coefficients(
    relevant_docs: Sequence[Mapping[str, float]],
    nonrelevant_docs: Sequence[Mapping[str, float]],
) -> tuple[float, float]:
    """(y, z) as the mean of the judged documents' term weights."""

    def mean_weight(docs: Sequence[Mapping[str, float]]) -> float:
        values = [w for doc in docs for w in doc.values()]
        return math.fsum(values) / len(values) if values else 0.0

    return mean_weight(relevant_docs), mean_weight(nonrelevant_docs)
