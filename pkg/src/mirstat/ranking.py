"""Shared ranked-list ordering: descending score, ties by ascending doc id."""

from __future__ import annotations

from typing import Iterable

RankedList = list[tuple[str, float]]


def top_k(scores: Iterable[tuple[str, float]], k: int | None = None) -> RankedList:
    """Order ``(doc_id, score)`` pairs, dropping non-positive scores.

    ``k`` of ``None`` keeps the whole list.
    """
    if k is not None and k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(
        ((d, s) for d, s in scores if s > 0),
        key=lambda pair: (-pair[1], pair[0]),
    )
    return ranked if k is None else ranked[:k]
