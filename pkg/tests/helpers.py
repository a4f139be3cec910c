"""Shared builders for hand-made and randomized corpora."""

import random

from mirstat.corpus import Corpus, Document, TokenizerConfig

# Words that pass the default tokenizer untouched (no strippable suffix, not
# stopwords), so tests can reason about counts directly.
VOCAB = [
    "cat", "dog", "bird", "wolf", "fish", "nest", "moon", "rock", "fern",
    "leaf", "rain", "wind", "hill", "lake", "moth", "crab", "reef", "dust",
    "clay", "bark",
]

NO_STEM = TokenizerConfig(stopwords=frozenset(), stem=False)


def make_corpus(doc_texts: dict[str, str], config: TokenizerConfig | None = None) -> Corpus:
    docs = [Document(id=doc_id, body=text) for doc_id, text in sorted(doc_texts.items())]
    return Corpus.from_documents(docs, config or NO_STEM)


def random_corpus(
    rng: random.Random,
    n_docs: int = 6,
    vocab_size: int = 8,
    max_doc_len: int = 12,
) -> Corpus:
    vocab = VOCAB[:vocab_size]
    texts = {}
    for i in range(n_docs):
        length = rng.randint(1, max_doc_len)
        texts[f"d{i:02d}"] = " ".join(rng.choice(vocab) for _ in range(length))
    return make_corpus(texts)


def kitten_corpus() -> Corpus:
    """20 documents where 'kitten' rides along with 'cat' in every top
    document for the query 'cat'; 'toy' co-occurs less; the rest is filler."""
    texts = {}
    for i in range(1, 6):
        extra = " toy" if i <= 3 else ""
        texts[f"d{i:02d}"] = f"cat kitten{extra}"
    for i in range(6, 9):
        texts[f"d{i:02d}"] = f"cat rock{i} fern{i} lake{i} hill{i}"
    for i in range(9, 21):
        texts[f"d{i:02d}"] = f"dust{i} clay{i}"
    return make_corpus(texts)
