"""Persistent queries: durable storage and similarity-based reuse.

Queries are appended to a newline-delimited JSON file, one object per line
with sorted vector keys, so the store is diffable and recoverable.  Reuse
lookups scan the stored vectors for the best cosine match at or above a
threshold.
"""

from __future__ import annotations

import json
import math
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .expansion import WeightedQuery

DEFAULT_SIMILARITY_THRESHOLD = 0.7

QueryVector = Mapping[str, float]


class QueryStoreError(ValueError):
    pass


@dataclass(frozen=True)
class PersistentQuery:
    id: str
    vector: dict[str, float]
    result_doc_ids: tuple[str, ...]
    created_at: int

    def __post_init__(self) -> None:
        if not self.vector:
            raise ValueError("persistent query vector must be non-empty")


def _as_vector(query: WeightedQuery | QueryVector) -> dict[str, float]:
    terms = query.terms if isinstance(query, WeightedQuery) else query
    return dict(terms)


def similarity(a: WeightedQuery | QueryVector, b: WeightedQuery | QueryVector) -> float:
    """Cosine similarity over the union of terms, clamped to [0, 1].

    Identical vectors compare at exactly 1.0.
    """
    va = _as_vector(a)
    vb = _as_vector(b)
    if not va or not vb:
        raise ValueError("similarity requires non-empty queries")
    if va == vb:
        return 1.0
    # Exact summation keeps the measure symmetric and order-independent.
    shared = sorted(va.keys() & vb.keys())
    dot = math.fsum(va[t] * vb[t] for t in shared)
    norm_a = math.sqrt(math.fsum(w * w for w in va.values()))
    norm_b = math.sqrt(math.fsum(w * w for w in vb.values()))
    return min(1.0, max(0.0, dot / (norm_a * norm_b)))


class QueryStore:
    """Append-only store over ``queries.ndjson`` with serialized writes."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: list[PersistentQuery] = []
        if self.path.exists():
            self._entries = list(self._read_all())

    def _read_all(self) -> list[PersistentQuery]:
        entries: list[PersistentQuery] = []
        with self.path.open(encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    raw = json.loads(line)
                    entries.append(
                        PersistentQuery(
                            id=str(raw["id"]),
                            vector={t: float(w) for t, w in raw["vector"].items()},
                            result_doc_ids=tuple(raw["results"]),
                            created_at=int(raw["created_at"]),
                        )
                    )
                except (KeyError, TypeError, ValueError) as exc:
                    raise QueryStoreError(
                        f"corrupt query store {self.path} at line {line_no}: {exc}"
                    ) from exc
        return entries

    def entries(self) -> tuple[PersistentQuery, ...]:
        with self._lock:
            return tuple(self._entries)

    def get(self, query_id: str) -> PersistentQuery | None:
        with self._lock:
            for entry in self._entries:
                if entry.id == query_id:
                    return entry
        return None

    def save(
        self,
        vector: WeightedQuery | QueryVector,
        result_doc_ids: Sequence[str],
        created_at: int | None = None,
    ) -> PersistentQuery:
        """Append a query durably and return it with its assigned id."""
        terms = _as_vector(vector)
        if not terms:
            raise ValueError("cannot persist an empty query vector")
        with self._lock:
            next_id = 1 + max((int(e.id) for e in self._entries), default=0)
            entry = PersistentQuery(
                id=str(next_id),
                vector=terms,
                result_doc_ids=tuple(result_doc_ids),
                created_at=int(time.time()) if created_at is None else created_at,
            )
            line = json.dumps(
                {
                    "id": entry.id,
                    "created_at": entry.created_at,
                    "vector": dict(sorted(entry.vector.items())),
                    "results": list(entry.result_doc_ids),
                },
                ensure_ascii=False,
            )
            try:
                with self.path.open("a", encoding="utf-8") as handle:
                    handle.write(line + "\n")
                    handle.flush()
            except OSError as exc:
                raise QueryStoreError(
                    f"cannot write query store {self.path}: {exc}"
                ) from exc
            self._entries.append(entry)
        return entry

    def find_reusable(
        self,
        query: WeightedQuery | QueryVector,
        threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
    ) -> tuple[PersistentQuery, float] | None:
        """Best stored query at or above ``threshold``; ties favor the newest."""
        if not 0.0 <= threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        best: tuple[PersistentQuery, float] | None = None
        for entry in self.entries():
            sim = similarity(query, entry.vector)
            if sim < threshold:
                continue
            if (
                best is None
                or sim > best[1]
                or (sim == best[1] and int(entry.id) > int(best[0].id))
            ):
                best = (entry, sim)
        return best
