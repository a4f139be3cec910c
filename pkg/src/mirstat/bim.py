"""Binary-independence (relevance weighting) retrieval model.

Each term gets a log-odds weight from the probability of the term appearing
in relevant versus non-relevant documents; a document scores the sum of the
weights of the query terms it contains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .index import InvertedIndex
from .ranking import RankedList, top_k

Smoothing = Literal["raw", "half"]


@dataclass(frozen=True)
class RelevanceJudgments:
    """User-judged relevant documents within a corpus of ``n_docs``."""

    relevant: frozenset[str]
    n_docs: int

    def __post_init__(self) -> None:
        if len(self.relevant) > self.n_docs:
            raise ValueError("more relevant documents than documents")

    @property
    def n_relevant(self) -> int:
        return len(self.relevant)


@dataclass(frozen=True)
class TermRelevanceStats:
    """Occurrence counts for one term: in all docs (n) and in relevant docs (r)."""

    term: str
    n: int
    r: int

    def __post_init__(self) -> None:
        if not 0 <= self.r <= self.n:
            raise ValueError("need 0 <= r <= n")


@dataclass(frozen=True)
class TermWeight:
    p_relevant: float
    p_nonrelevant: float
    odds_ratio: float
    log_weight: float

    @property
    def relevant_odds(self) -> float:
        return self.p_relevant / (1.0 - self.p_relevant)

    @property
    def nonrelevant_odds(self) -> float:
        return self.p_nonrelevant / (1.0 - self.p_nonrelevant)


def estimate_probabilities(
    stats: TermRelevanceStats,
    judgments: RelevanceJudgments,
    smoothing: Smoothing = "half",
) -> tuple[float, float]:
    """Estimate (p_relevant, p_nonrelevant) for a term.

    ``raw`` uses the plain ratios r/R and (n-r)/(N-R); ``half`` adds the
    usual +0.5/+1 correction so degenerate counts stay off 0 and 1.
    """
    n_rel = judgments.n_relevant
    n_docs = judgments.n_docs
    if stats.n > n_docs:
        raise ValueError("term cannot occur in more documents than exist")
    if stats.r > n_rel:
        raise ValueError("r cannot exceed the number of relevant documents")
    if smoothing == "raw":
        if n_rel == 0 or n_docs == n_rel:
            raise ValueError("degenerate judgments; use smoothing")
        return stats.r / n_rel, (stats.n - stats.r) / (n_docs - n_rel)
    if smoothing == "half":
        return (
            (stats.r + 0.5) / (n_rel + 1),
            (stats.n - stats.r + 0.5) / (n_docs - n_rel + 1),
        )
    raise ValueError(f"unknown smoothing mode: {smoothing!r}")


def term_weight(p_relevant: float, p_nonrelevant: float) -> TermWeight:
    """Odds ratio and log-odds weight of a term.

    The weight is positive exactly when the term is more likely in relevant
    documents, zero when equally likely.  ``p_relevant`` of 0 yields an odds
    ratio of 0 and a log weight of -inf.
    """
    if not 0.0 <= p_relevant <= 1.0 or not 0.0 <= p_nonrelevant <= 1.0:
        raise ValueError("probabilities must lie in [0, 1]")
    if p_nonrelevant == 0.0 or p_relevant == 1.0:
        raise ValueError("infinite odds; use smoothing")
    odds_ratio = (p_relevant * (1.0 - p_nonrelevant)) / (
        p_nonrelevant * (1.0 - p_relevant)
    )
    log_weight = math.log(odds_ratio) if odds_ratio > 0.0 else float("-inf")
    return TermWeight(p_relevant, p_nonrelevant, odds_ratio, log_weight)


def query_term_weights(
    index: InvertedIndex,
    query_terms: Iterable[str],
    judgments: RelevanceJudgments,
    smoothing: Smoothing = "half",
) -> dict[str, TermWeight]:
    """Log-odds weight per distinct indexed query term.

    Terms absent from the index occur in no document and are skipped.
    """
    weights: dict[str, TermWeight] = {}
    for term in dict.fromkeys(query_terms):
        plist = index.postings.get(term)
        if not plist:
            continue
        r = sum(1 for posting in plist if posting.doc_id in judgments.relevant)
        stats = TermRelevanceStats(term=term, n=len(plist), r=r)
        p_rel, p_non = estimate_probabilities(stats, judgments, smoothing)
        weights[term] = term_weight(p_rel, p_non)
    return weights


def rank_bim(
    index: InvertedIndex,
    query_terms: Sequence[str],
    judgments: RelevanceJudgments,
    smoothing: Smoothing = "half",
    k: int | None = None,
) -> RankedList:
    """Rank documents by summed log-odds weights of matched query terms.

    Query terms are treated as a set; documents with a total score of 0 or
    below are omitted.
    """
    if not query_terms:
        raise ValueError("at least one query term required")
    weights = query_term_weights(index, query_terms, judgments, smoothing)
    scores: dict[str, float] = {}
    for term, tw in weights.items():
        for posting in index.postings[term]:
            scores[posting.doc_id] = scores.get(posting.doc_id, 0.0) + tw.log_weight
    return top_k(scores.items(), k)
