"""Inverted index with tf-idf weighting and a JSON snapshot format.

Per-document term weights are tf*idf normalized by the document's largest
tf*idf value, so every weight lies in [0, 1] and each non-degenerate
document has at least one term at weight 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus

SNAPSHOT_VERSION = "mirstat-index/1"


class IndexSnapshotError(ValueError):
    """Raised when an index snapshot cannot be read."""


@dataclass(frozen=True)
class Posting:
    doc_id: str
    tf: int

    def __post_init__(self) -> None:
        if self.tf < 1:
            raise ValueError("tf must be >= 1")


@dataclass
class InvertedIndex:
    """Term dictionary with postings plus per-document normalization data.

    ``postings`` lists are sorted ascending by doc id; ``doc_max_tfidf``
    covers every document, holding 0.0 for documents without any
    positive-idf term.
    """

    n_docs: int
    postings: dict[str, list[Posting]]
    doc_max_tfidf: dict[str, float]

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def term_frequency(self, term: str, doc_id: str) -> int:
        for posting in self.postings.get(term, ()):
            if posting.doc_id == doc_id:
                return posting.tf
        return 0


def build_index(corpus: Corpus) -> InvertedIndex:
    """Build a deterministic inverted index from an ingested corpus."""
    by_term: dict[str, list[Posting]] = {}
    for doc_id in sorted(corpus.doc_counts):
        for term, tf in corpus.doc_counts[doc_id].items():
            by_term.setdefault(term, []).append(Posting(doc_id, tf))
    postings = {term: by_term[term] for term in sorted(by_term)}

    n = corpus.n_docs
    idf_by_term = {
        term: math.log(n / len(plist)) for term, plist in postings.items()
    }
    doc_max: dict[str, float] = {}
    for doc_id in sorted(corpus.doc_counts):
        counts = corpus.doc_counts[doc_id]
        doc_max[doc_id] = max(
            (tf * idf_by_term[term] for term, tf in counts.items()),
            default=0.0,
        )
    return InvertedIndex(n_docs=n, postings=postings, doc_max_tfidf=doc_max)


def idf(index: InvertedIndex, term: str) -> float:
    """Inverse document frequency: ln(N / df)."""
    if index.n_docs == 0:
        raise ValueError("empty index")
    df = index.df(term)
    if df == 0:
        raise KeyError(f"term not indexed: {term!r}")
    return math.log(index.n_docs / df)


def doc_term_weight(index: InvertedIndex, doc_id: str, term: str) -> float:
    """Normalized tf*idf of ``term`` in ``doc_id``; 0 when the term is absent."""
    if doc_id not in index.doc_max_tfidf:
        raise KeyError(f"unknown document: {doc_id!r}")
    tf = index.term_frequency(term, doc_id)
    if tf == 0:
        return 0.0
    denom = index.doc_max_tfidf[doc_id]
    if denom <= 0.0:
        # Every term of this document occurs in all documents (idf 0).
        return 0.0
    return tf * idf(index, term) / denom


def format_float(value: float) -> str:
    """Render a float with up to 17 significant digits (lossless round-trip)."""
    return format(float(value), ".17g")


def _emit_json(value) -> str:
    """Serialize with sorted object keys and 17-significant-digit floats."""
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_emit_json(v) for v in value) + "]"
    if isinstance(value, dict):
        items = (
            f"{json.dumps(k, ensure_ascii=False)}:{_emit_json(value[k])}"
            for k in sorted(value)
        )
        return "{" + ",".join(items) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def save_index(index: InvertedIndex, path: str | Path) -> None:
    """Write a deterministic UTF-8 JSON snapshot of the index."""
    snapshot = {
        "version": SNAPSHOT_VERSION,
        "N": index.n_docs,
        "docs": [
            {"id": doc_id, "max_tfidf": float(index.doc_max_tfidf[doc_id])}
            for doc_id in sorted(index.doc_max_tfidf)
        ],
        "terms": {
            term: {
                "df": len(plist),
                "postings": [[p.doc_id, p.tf] for p in plist],
            }
            for term, plist in index.postings.items()
        },
    }
    Path(path).write_text(_emit_json(snapshot), encoding="utf-8")


def load_index(path: str | Path) -> InvertedIndex:
    """Load a snapshot written by :func:`save_index`."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        byte_offset = len(text[: exc.pos].encode("utf-8"))
        raise IndexSnapshotError(
            f"corrupt snapshot {path}: {exc.msg} at byte {byte_offset}"
        ) from exc
    version = raw.get("version") if isinstance(raw, dict) else None
    if version != SNAPSHOT_VERSION:
        raise IndexSnapshotError(
            f"snapshot version mismatch: found {version!r}, "
            f"expected {SNAPSHOT_VERSION!r}"
        )
    postings = {
        term: [Posting(doc_id, tf) for doc_id, tf in entry["postings"]]
        for term, entry in sorted(raw["terms"].items())
    }
    for term, entry in raw["terms"].items():
        if entry["df"] != len(entry["postings"]):
            raise IndexSnapshotError(
                f"snapshot df mismatch for term {term!r}"
            )
    doc_max = {
        doc["id"]: float(doc["max_tfidf"])
        for doc in sorted(raw["docs"], key=lambda d: d["id"])
    }
    return InvertedIndex(
        n_docs=int(raw["N"]), postings=postings, doc_max_tfidf=doc_max
    )
