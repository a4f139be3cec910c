"""Weighted Boolean query language and the extended Boolean (p-norm) ranker.

The soft operators interpolate between strict Boolean matching (large p)
and a weighted vector-space mean (p = 1):

    and_score = 1 - [ sum((1-d_i)^p * w_i^p) / sum(w_i^p) ]^(1/p)
    or_score  =     [ sum(d_i^p     * w_i^p) / sum(w_i^p) ]^(1/p)

where d_i are document term weights in [0, 1] and w_i are query weights
in (0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .index import InvertedIndex, doc_term_weight
from .ranking import RankedList, top_k

DEFAULT_P = 2.0


class QueryError(ValueError):
    """Base class for query-string problems; carries a 1-based column."""

    def __init__(self, message: str, column: int) -> None:
        super().__init__(f"{message} (column {column})")
        self.column = column


class QuerySyntaxError(QueryError):
    pass


class QueryRangeError(QueryError):
    pass


@dataclass(frozen=True)
class Term:
    term: str
    weight: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.weight <= 1.0:
            raise ValueError("term weight must be in (0, 1]")


@dataclass(frozen=True)
class And:
    children: tuple["QueryNode", ...]
    p: float = DEFAULT_P

    def __post_init__(self) -> None:
        _check_combiner(self.children, self.p)


@dataclass(frozen=True)
class Or:
    children: tuple["QueryNode", ...]
    p: float = DEFAULT_P

    def __post_init__(self) -> None:
        _check_combiner(self.children, self.p)


QueryNode = Union[Term, And, Or]


def _check_combiner(children: tuple[QueryNode, ...], p: float) -> None:
    if len(children) < 2:
        raise ValueError("AND/OR nodes need at least two children")
    if p < 1.0:
        raise ValueError("p must be >= 1")


# --- parsing ------------------------------------------------------------

_PUNCT = {"(": "LPAREN", ")": "RPAREN", ":": "COLON", "^": "CARET"}


@dataclass(frozen=True)
class _Token:
    kind: str  # LPAREN RPAREN COLON CARET ATOM END
    text: str
    column: int  # 1-based


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, i + 1))
            i += 1
            continue
        if ch.isalnum() or ch == ".":
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "."):
                i += 1
            tokens.append(_Token("ATOM", text[start:i], start + 1))
            continue
        raise QuerySyntaxError(f"unexpected character {ch!r}", i + 1)
    tokens.append(_Token("END", "", len(text) + 1))
    return tokens


class _Parser:
    """Recursive descent over: or := and ("OR" and)* ; and := atom ("AND" atom)*."""

    def __init__(self, tokens: list[_Token], default_p: float) -> None:
        self.tokens = tokens
        self.pos = 0
        self.default_p = default_p

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def at_keyword(self, word: str) -> bool:
        token = self.peek()
        return token.kind == "ATOM" and token.text.upper() == word

    def parse(self) -> QueryNode:
        if self.peek().kind == "END":
            raise QuerySyntaxError("empty query", 1)
        node = self.parse_or()
        trailing = self.peek()
        if trailing.kind != "END":
            raise QuerySyntaxError(
                f"unexpected {trailing.text!r}; expected AND, OR, or end of query",
                trailing.column,
            )
        return node

    def parse_or(self) -> QueryNode:
        children = [self.parse_and()]
        while self.at_keyword("OR"):
            self.advance()
            children.append(self.parse_and())
        if len(children) == 1:
            return children[0]
        return Or(tuple(children), self.default_p)

    def parse_and(self) -> QueryNode:
        children = [self.parse_atom()]
        while self.at_keyword("AND"):
            self.advance()
            children.append(self.parse_atom())
        if len(children) == 1:
            return children[0]
        return And(tuple(children), self.default_p)

    def parse_atom(self) -> QueryNode:
        token = self.peek()
        if token.kind == "LPAREN":
            self.advance()
            node = self.parse_or()
            closing = self.advance()
            if closing.kind != "RPAREN":
                raise QuerySyntaxError("expected ')'", closing.column)
            if self.peek().kind == "CARET":
                self.advance()
                p = self.parse_number("p")
                if p < 1.0:
                    raise QueryRangeError("p must be >= 1", self.tokens[self.pos - 1].column)
                if isinstance(node, (And, Or)):
                    node = type(node)(node.children, p)
                # p on a single term is a mathematical no-op; accept and drop.
            return node
        if token.kind == "ATOM":
            if token.text.upper() in ("AND", "OR"):
                raise QuerySyntaxError(
                    f"expected a term, found operator {token.text!r}", token.column
                )
            if "." in token.text:
                raise QuerySyntaxError(
                    f"invalid term {token.text!r}", token.column
                )
            self.advance()
            weight = 1.0
            if self.peek().kind == "COLON":
                self.advance()
                weight = self.parse_number("weight")
                if not 0.0 < weight <= 1.0:
                    raise QueryRangeError(
                        "weight must be in (0, 1]", self.tokens[self.pos - 1].column
                    )
            return Term(token.text.lower(), weight)
        raise QuerySyntaxError(
            "expected a term or '('", token.column
        )

    def parse_number(self, what: str) -> float:
        token = self.advance()
        if token.kind != "ATOM":
            raise QuerySyntaxError(f"expected a number for {what}", token.column)
        try:
            return float(token.text)
        except ValueError:
            raise QuerySyntaxError(
                f"invalid number {token.text!r} for {what}", token.column
            ) from None


def parse_query(text: str, default_p: float = DEFAULT_P) -> QueryNode:
    """Parse the weighted Boolean grammar into a query tree.

    Grammar: ``expr := or``; ``or := and ("OR" and)*``;
    ``and := atom ("AND" atom)*``;
    ``atom := TERM (":" WEIGHT)? | "(" expr ")" ("^" P)?``.
    Operators are case-insensitive; terms are lowercased.
    """
    if default_p < 1.0:
        raise ValueError("default_p must be >= 1")
    return _Parser(_lex(text), default_p).parse()


def query_term_weights(node: QueryNode) -> dict[str, float]:
    """Flatten a query tree into term -> weight (max weight on repeats)."""
    weights: dict[str, float] = {}

    def walk(current: QueryNode) -> None:
        if isinstance(current, Term):
            prev = weights.get(current.term, 0.0)
            weights[current.term] = max(prev, current.weight)
        else:
            for child in current.children:
                walk(child)

    walk(node)
    return weights


# --- evaluation ---------------------------------------------------------


def _check_operands(
    doc_weights: Sequence[float], query_weights: Sequence[float], p: float
) -> None:
    if len(doc_weights) != len(query_weights):
        raise ValueError("doc_weights and query_weights must have equal length")
    if not doc_weights:
        raise ValueError("operand lists must be non-empty")
    if p < 1.0:
        raise ValueError("p must be >= 1")
    for d in doc_weights:
        if not 0.0 <= d <= 1.0:
            raise ValueError("document weights must lie in [0, 1]")
    for w in query_weights:
        if not 0.0 < w <= 1.0:
            raise ValueError("query weights must lie in (0, 1]")


def eval_and(
    doc_weights: Sequence[float], query_weights: Sequence[float], p: float
) -> float:
    """Soft conjunction; 1 only when every component is fully present."""
    _check_operands(doc_weights, query_weights, p)
    # Scale query weights by their maximum: the ratio is invariant and the
    # normalized denominator stays >= 1 even for large p.
    w_max = max(query_weights)
    num = 0.0
    denom = 0.0
    for d, w in zip(doc_weights, query_weights):
        wp = (w / w_max) ** p
        num += ((1.0 - d) ** p) * wp
        denom += wp
    return 1.0 - (num / denom) ** (1.0 / p)


def eval_or(
    doc_weights: Sequence[float], query_weights: Sequence[float], p: float
) -> float:
    """Soft disjunction; 0 only when no component is present."""
    _check_operands(doc_weights, query_weights, p)
    w_max = max(query_weights)
    num = 0.0
    denom = 0.0
    for d, w in zip(doc_weights, query_weights):
        wp = (w / w_max) ** p
        num += (d ** p) * wp
        denom += wp
    return (num / denom) ** (1.0 / p)


def score_pnorm(index: InvertedIndex, node: QueryNode, doc_id: str) -> float:
    """Recursively evaluate a query tree against one document."""
    if doc_id not in index.doc_max_tfidf:
        raise KeyError(f"unknown document: {doc_id!r}")
    return _score_node(index, node, doc_id)


def _score_node(index: InvertedIndex, node: QueryNode, doc_id: str) -> float:
    if isinstance(node, Term):
        return doc_term_weight(index, doc_id, node.term)
    child_scores = [_score_node(index, child, doc_id) for child in node.children]
    child_weights = [
        child.weight if isinstance(child, Term) else 1.0
        for child in node.children
    ]
    if isinstance(node, And):
        return eval_and(child_scores, child_weights, node.p)
    return eval_or(child_scores, child_weights, node.p)


def rank_pnorm(index: InvertedIndex, node: QueryNode, k: int) -> RankedList:
    """Top-k documents by p-norm score; zero-scoring documents are omitted."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scores = (
        (doc_id, score_pnorm(index, node, doc_id))
        for doc_id in index.doc_max_tfidf
    )
    return top_k(scores, k)
