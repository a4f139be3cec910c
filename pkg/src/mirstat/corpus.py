"""Document loading, tokenization, and term/phrase extraction.

A corpus is a directory of ``*.txt`` files (UTF-8 body text).  Each file may
carry a ``<stem>.meta.json`` sidecar supplying title, caption, media type,
and concept annotations.  Ingestion is tolerant: per-file problems are
collected on the resulting :class:`Corpus` instead of aborting the run.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

# Small built-in English stopword list (classic Lucene default set).
DEFAULT_STOPWORDS = frozenset(
    {
        "a", "an", "and", "are", "as", "at", "be", "but", "by", "for", "if",
        "in", "into", "is", "it", "no", "not", "of", "on", "or", "such",
        "that", "the", "their", "then", "there", "these", "they", "this",
        "to", "was", "will", "with",
    }
)

# Alphanumeric runs; underscores and punctuation are separators.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Endings that take an "es" plural ("boxes", "classes"); other words keep
# their final "e" so singular and plural map to the same stem
# ("whales" -> "whale", not "whal").
_SIBILANT_ENDINGS = ("ss", "x", "z", "ch", "sh")

_SIDECAR_KEYS = frozenset({"title", "caption", "media_type", "concepts"})

_TEXT_FIELDS = ("title", "body", "caption")


class MediaType(str, Enum):
    TEXT = "text"
    IMAGE = "image"
    VIDEO = "video"
    AUDIO = "audio"


class SidecarError(ValueError):
    """Raised for a malformed ``*.meta.json`` sidecar."""


@dataclass(frozen=True)
class Document:
    """One corpus entry; multimedia items are represented by their text fields."""

    id: str
    title: str = ""
    body: str = ""
    caption: str = ""
    media_type: MediaType = MediaType.TEXT
    concepts: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("document id must be non-empty")


@dataclass(frozen=True)
class TokenizerConfig:
    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    stem: bool = True
    min_token_len: int = 1

    def __post_init__(self) -> None:
        if self.min_token_len < 1:
            raise ValueError("min_token_len must be >= 1")


@dataclass(frozen=True)
class Phrase:
    """Adjacent two-term unit with its document frequency."""

    terms: tuple[str, str]
    df: int


class TermStats:
    """Per-term corpus statistics: document frequency and total occurrences."""

    __slots__ = ("df", "total_tf")

    def __init__(self, df: int, total_tf: int) -> None:
        self.df = df
        self.total_tf = total_tf

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TermStats)
            and self.df == other.df
            and self.total_tf == other.total_tf
        )

    def __repr__(self) -> str:
        return f"TermStats(df={self.df}, total_tf={self.total_tf})"


def _strip_suffix(token: str) -> str:
    """Light stripping of the suffixes ing/ed/es/s.

    A suffix comes off only when at least two characters remain ("sing"
    stays intact); "es" only after sibilant endings; a bare "s" never off
    "ss"/"us" words ("class", "bus").
    """
    for suffix in ("ing", "ed"):
        if token.endswith(suffix) and len(token) - len(suffix) >= 2:
            return token[: -len(suffix)]
    if token.endswith("es") and len(token) >= 4:
        stem = token[:-2]
        if stem.endswith(_SIBILANT_ENDINGS):
            return stem
    if (
        token.endswith("s")
        and not token.endswith(("ss", "us"))
        and len(token) >= 3
    ):
        return token[:-1]
    return token


def tokenize(text: str, config: TokenizerConfig | None = None) -> list[str]:
    """Split ``text`` into normalized terms, in order of occurrence.

    Terms are lowercased alphanumeric runs with stopwords removed, optional
    light suffix stripping, and a minimum-length filter.
    """
    config = config or TokenizerConfig()
    terms: list[str] = []
    for raw in _TOKEN_RE.findall(text):
        token = raw.lower()
        if token in config.stopwords:
            continue
        if config.stem:
            token = _strip_suffix(token)
        if len(token) >= config.min_token_len:
            terms.append(token)
    return terms


def extract_phrases(
    token_lists: Sequence[Sequence[str]], min_df: int
) -> list[Phrase]:
    """Return adjacent bigrams occurring in at least ``min_df`` documents.

    A bigram is counted at most once per document; output is sorted
    lexicographically by the term pair.
    """
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    counts: Counter[tuple[str, str]] = Counter()
    for tokens in token_lists:
        counts.update(set(zip(tokens, tokens[1:])))
    return [
        Phrase(pair, df) for pair, df in sorted(counts.items()) if df >= min_df
    ]


def field_tokens(
    doc: Document, config: TokenizerConfig
) -> dict[str, list[str]]:
    """Tokenize each text field of ``doc`` separately."""
    return {name: tokenize(getattr(doc, name), config) for name in _TEXT_FIELDS}


def document_tokens(doc: Document, config: TokenizerConfig) -> list[str]:
    """All terms of a document: title, body, then caption."""
    per_field = field_tokens(doc, config)
    return [t for name in _TEXT_FIELDS for t in per_field[name]]


@dataclass
class Corpus:
    """Immutable view of an ingested document collection.

    ``term_stats`` maps each term to its document frequency and total
    occurrence count; ``doc_counts`` keeps the per-document term counts the
    indexer consumes.  ``errors`` lists per-file ingestion problems.
    """

    documents: list[Document]
    term_stats: dict[str, TermStats]
    doc_counts: dict[str, Counter[str]]
    config: TokenizerConfig
    errors: list[str] = field(default_factory=list)

    @property
    def n_docs(self) -> int:
        return len(self.documents)

    @classmethod
    def from_documents(
        cls,
        documents: Iterable[Document],
        config: TokenizerConfig | None = None,
        errors: Iterable[str] = (),
    ) -> "Corpus":
        config = config or TokenizerConfig()
        docs = list(documents)
        seen: set[str] = set()
        for doc in docs:
            if doc.id in seen:
                raise ValueError(f"duplicate document id: {doc.id!r}")
            seen.add(doc.id)
        doc_counts = {
            doc.id: Counter(document_tokens(doc, config)) for doc in docs
        }
        stats: dict[str, TermStats] = {}
        for counts in doc_counts.values():
            for term, tf in counts.items():
                entry = stats.get(term)
                if entry is None:
                    stats[term] = TermStats(df=1, total_tf=tf)
                else:
                    entry.df += 1
                    entry.total_tf += tf
        return cls(
            documents=docs,
            term_stats=stats,
            doc_counts=doc_counts,
            config=config,
            errors=list(errors),
        )


def _parse_sidecar(path: Path) -> dict:
    raw = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise SidecarError(f"{path.name}: expected a JSON object")
    for key in sorted(raw):
        if key not in _SIDECAR_KEYS:
            raise SidecarError(f"{path.name}: unknown key {key!r}")
    meta: dict = {}
    for key in ("title", "caption"):
        if key in raw:
            if not isinstance(raw[key], str):
                raise SidecarError(f"{path.name}: {key!r} must be a string")
            meta[key] = raw[key]
    if "media_type" in raw:
        try:
            meta["media_type"] = MediaType(raw["media_type"])
        except ValueError:
            raise SidecarError(
                f"{path.name}: media_type must be one of "
                f"{sorted(m.value for m in MediaType)}"
            ) from None
    if "concepts" in raw:
        concepts = raw["concepts"]
        if not isinstance(concepts, list) or not all(
            isinstance(c, str) for c in concepts
        ):
            raise SidecarError(f"{path.name}: 'concepts' must be a list of strings")
        meta["concepts"] = frozenset(concepts)
    return meta


def ingest_corpus(
    dir_path: str | Path, config: TokenizerConfig | None = None
) -> Corpus:
    """Load every ``*.txt`` file under ``dir_path`` into a :class:`Corpus`.

    Document ids are the file stems.  Sidecar metadata is applied when a
    ``<stem>.meta.json`` file is present and valid; a broken sidecar or an
    unreadable text file is recorded in ``Corpus.errors`` and skipped.
    """
    root = Path(dir_path)
    if not root.is_dir():
        raise NotADirectoryError(f"corpus directory not found: {root}")
    config = config or TokenizerConfig()
    documents: list[Document] = []
    errors: list[str] = []
    for txt in sorted(root.glob("*.txt")):
        try:
            body = txt.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            errors.append(f"{txt.name}: {exc}")
            continue
        meta: dict = {}
        sidecar = txt.with_suffix(".meta.json")
        if sidecar.exists():
            try:
                meta = _parse_sidecar(sidecar)
            except (OSError, SidecarError) as exc:
                errors.append(str(exc))
            except json.JSONDecodeError as exc:
                errors.append(f"{sidecar.name}: invalid JSON ({exc.msg})")
        documents.append(Document(id=txt.stem, body=body, **meta))
    return Corpus.from_documents(documents, config, errors)


def term_counts(text: str, config: TokenizerConfig | None = None) -> Counter[str]:
    """Term counts of a whole text under one tokenizer configuration."""
    return Counter(tokenize(text, config))


def ingest_segmented(
    doc_text: str, k: int, config: TokenizerConfig | None = None
) -> Counter[str]:
    """Tokenize ``doc_text`` in ``k`` contiguous segments and merge counts.

    Segment boundaries snap to whitespace so no token is split; the merged
    counts are always identical to whole-document tokenization.  Splitting
    exists purely so segments can be processed independently.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    words = doc_text.split()
    merged: Counter[str] = Counter()
    for i in range(k):
        lo = i * len(words) // k
        hi = (i + 1) * len(words) // k
        merged.update(tokenize(" ".join(words[lo:hi]), config))
    return merged
