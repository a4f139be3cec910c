"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable files,
snapshot mismatches, malformed queries, and similar).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .corpus import DEFAULT_STOPWORDS, TokenizerConfig, ingest_corpus
from .index import IndexSnapshotError, build_index, format_float, load_index, save_index


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise _UsageError(message)


class DataError(Exception):
    pass


def _tokenizer_config(args: argparse.Namespace) -> TokenizerConfig:
    stopwords = DEFAULT_STOPWORDS
    if args.stopwords:
        try:
            lines = Path(args.stopwords).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise DataError(f"cannot read stopword file: {exc}") from exc
        stopwords = frozenset(w.strip() for w in lines if w.strip())
    return TokenizerConfig(stopwords=stopwords, stem=not args.no_stem)


def _load_index(path: str):
    try:
        return load_index(path)
    except (OSError, IndexSnapshotError) as exc:
        raise DataError(str(exc)) from exc


def _load_json(path: str, what: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read {what} file {path}: {exc}") from exc


def _cmd_index(args: argparse.Namespace) -> int:
    try:
        corpus = ingest_corpus(args.corpus, _tokenizer_config(args))
    except (OSError, NotADirectoryError) as exc:
        raise DataError(str(exc)) from exc
    for problem in corpus.errors:
        print(f"warning: {problem}", file=sys.stderr)
    index = build_index(corpus)
    try:
        save_index(index, args.out)
    except OSError as exc:
        raise DataError(f"cannot write snapshot: {exc}") from exc
    print(
        f"indexed {index.n_docs} documents, {len(index.postings)} terms -> {args.out}"
    )
    return 0


def _print_ranked(ranked) -> None:
    for doc_id, score in ranked:
        print(f"{doc_id}\t{format_float(score)}")


def _cmd_search(args: argparse.Namespace) -> int:
    from .bim import RelevanceJudgments, rank_bim
    from .inference_net import attach_query_network, build_document_network, rank_inference
    from .pnorm import QueryError, parse_query, rank_pnorm

    index = _load_index(args.index)
    try:
        if args.model == "pnorm":
            ranked = rank_pnorm(index, parse_query(args.query, args.p), args.k)
        elif args.model == "bim":
            terms = _term_list(args.query)
            relevant: frozenset[str] = frozenset()
            smoothing = "half"
            if args.judgments:
                raw = _load_json(args.judgments, "judgments")
                relevant = frozenset(raw.get("relevant", []))
                smoothing = raw.get("smoothing", "half")
            judgments = RelevanceJudgments(relevant, index.n_docs)
            ranked = rank_bim(index, terms, judgments, smoothing, args.k)
        else:  # inet
            if not args.corpus:
                raise DataError("--corpus is required for the inference model")
            corpus = ingest_corpus(args.corpus, _tokenizer_config(args))
            graph = build_document_network(corpus, index)
            graph = attach_query_network(
                graph, [(t, 1.0) for t in _term_list(args.query)]
            )
            ranked = rank_inference(graph, args.k)
    except QueryError as exc:
        raise DataError(f"query error: {exc}") from exc
    except (ValueError, KeyError) as exc:
        raise DataError(str(exc)) from exc
    _print_ranked(ranked)
    return 0


def _term_list(query: str) -> list[str]:
    from .corpus import tokenize

    terms = tokenize(query, TokenizerConfig())
    if not terms:
        raise DataError("query has no terms")
    return terms


def _cmd_expand(args: argparse.Namespace) -> int:
    from .expansion import WeightedQuery, expand_lca
    from .pnorm import QueryError, parse_query, query_term_weights

    index = _load_index(args.index)
    try:
        tree = parse_query(args.query)
        result = expand_lca(
            index, WeightedQuery(query_term_weights(tree)), args.m, args.k
        )
    except QueryError as exc:
        raise DataError(f"query error: {exc}") from exc
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    if not result.expanded:
        print("no expansion")
        return 0
    for cand in result.added:
        weight = result.query.terms[cand.concept]
        print(
            f"{cand.concept}\t{format_float(cand.belief)}\t{format_float(weight)}"
        )
    return 0


def _cmd_export_owl(args: argparse.Namespace) -> int:
    from .inference_net import build_document_network
    from .ontology import concept_graph_from_inference, export_owl

    index = _load_index(args.index)
    try:
        corpus = ingest_corpus(args.corpus, _tokenizer_config(args))
        graph = build_document_network(corpus, index)
        owl = export_owl(concept_graph_from_inference(graph))
        Path(args.out).write_text(owl.text, encoding="utf-8")
    except (OSError, NotADirectoryError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    print(f"wrote {owl.class_count} classes -> {args.out}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    from .service import evaluate

    index = _load_index(args.index)
    queries = _load_json(args.queries, "queries")
    qrels = _load_json(args.qrels, "qrels")
    if not isinstance(queries, list):
        raise DataError("queries file must hold a JSON array of query strings")
    if not isinstance(qrels, dict):
        raise DataError("qrels file must map query strings to doc id arrays")
    try:
        report = evaluate(index, queries, qrels, args.k)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    for query in queries:
        metrics = report.per_query[query]
        print(
            f"{query}\tP@{args.k}={format_float(metrics.precision)}"
            f"\tR@{args.k}={format_float(metrics.recall)}"
        )
    print(
        f"macro\tP@{args.k}={format_float(report.macro_precision)}"
        f"\tR@{args.k}={format_float(report.macro_recall)}"
    )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .query_store import QueryStore
    from .service import DEFAULT_PORT, PORT_ENV_VAR, ServiceState, create_app

    index = _load_index(args.index)
    corpus = None
    if args.corpus:
        try:
            corpus = ingest_corpus(args.corpus, _tokenizer_config(args))
        except (OSError, NotADirectoryError) as exc:
            raise DataError(str(exc)) from exc
    port = args.port
    if port is None:
        port = int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT))
    state = ServiceState(
        store=QueryStore(args.store),
        index=index,
        corpus=corpus,
        static_dir=Path(args.static) if args.static else None,
    )
    uvicorn.run(create_app(state), host=args.host, port=port)
    return 0


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="mirstat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_tokenizer_flags(p) -> None:
        p.add_argument("--stopwords", help="stopword file, one word per line")
        p.add_argument(
            "--no-stem", action="store_true", help="disable suffix stripping"
        )

    p_index = sub.add_parser("index", help="build an index snapshot from a corpus")
    p_index.add_argument("--corpus", required=True, help="corpus directory")
    p_index.add_argument("--out", required=True, help="snapshot output path")
    add_tokenizer_flags(p_index)
    p_index.set_defaults(func=_cmd_index)

    p_search = sub.add_parser("search", help="rank documents for a query")
    p_search.add_argument("--index", required=True)
    p_search.add_argument("--model", choices=["pnorm", "bim", "inet"], default="pnorm")
    p_search.add_argument("--query", required=True)
    p_search.add_argument("--p", type=float, default=2.0)
    p_search.add_argument("--k", type=int, default=10)
    p_search.add_argument("--judgments", help="relevance judgments JSON (bim)")
    p_search.add_argument("--corpus", help="corpus directory (required for inet)")
    add_tokenizer_flags(p_search)
    p_search.set_defaults(func=_cmd_search)

    p_expand = sub.add_parser("expand", help="expand a query with co-occurring concepts")
    p_expand.add_argument("--index", required=True)
    p_expand.add_argument("--query", required=True)
    p_expand.add_argument("--m", type=int, default=5, help="top documents to analyze")
    p_expand.add_argument("--k", type=int, default=10, help="concepts to add")
    p_expand.set_defaults(func=_cmd_expand)

    p_owl = sub.add_parser("export-owl", help="export the concept graph as OWL")
    p_owl.add_argument("--index", required=True)
    p_owl.add_argument("--corpus", required=True, help="corpus directory")
    p_owl.add_argument("--out", required=True)
    add_tokenizer_flags(p_owl)
    p_owl.set_defaults(func=_cmd_export_owl)

    p_eval = sub.add_parser("eval", help="precision/recall against qrels")
    p_eval.add_argument("--index", required=True)
    p_eval.add_argument("--queries", required=True)
    p_eval.add_argument("--qrels", required=True)
    p_eval.add_argument("--k", type=int, default=10)
    p_eval.set_defaults(func=_cmd_eval)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--index", required=True)
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--corpus", help="corpus directory for snippets and inet")
    p_serve.add_argument("--store", default="queries.ndjson")
    p_serve.add_argument("--static", help="static frontend directory")
    add_tokenizer_flags(p_serve)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help exits with 0 inside argparse
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
