import json
import xml.etree.ElementTree as ET

from mirstat.cli import main
from mirstat.index import format_float, load_index
from mirstat.pnorm import parse_query, rank_pnorm


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestUsageErrors:
    def test_search_without_index_flag(self, capsys):
        code, _, err = run(capsys, "search", "--query", "cat")
        assert code == 1
        assert "usage" in err.lower()

    def test_unknown_flag(self, capsys):
        code, _, err = run(capsys, "index", "--corpus", "x", "--out", "y", "--frob")
        assert code == 1

    def test_unknown_subcommand(self, capsys):
        code, _, _ = run(capsys, "frobnicate")
        assert code == 1

    def test_help_exits_zero(self, capsys):
        code, out, _ = run(capsys, "--help")
        assert code == 0


class TestIndexCommand:
    def test_build_and_reload(self, capsys, fixture_corpus_dir, tmp_path):
        out = tmp_path / "idx.json"
        code, stdout, _ = run(
            capsys, "index", "--corpus", str(fixture_corpus_dir), "--out", str(out)
        )
        assert code == 0
        assert "indexed 5 documents" in stdout
        index = load_index(out)
        assert index.n_docs == 5

    def test_missing_corpus_directory(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            "index",
            "--corpus",
            str(tmp_path / "nope"),
            "--out",
            str(tmp_path / "idx.json"),
        )
        assert code == 2
        assert "error" in err

    def test_sidecar_problems_reported_as_warnings(self, capsys, tmp_path):
        corpus_dir = tmp_path / "corpus"
        corpus_dir.mkdir()
        (corpus_dir / "d1.txt").write_text("cat", encoding="utf-8")
        (corpus_dir / "d1.meta.json").write_text("{oops", encoding="utf-8")
        code, _, err = run(
            capsys,
            "index",
            "--corpus",
            str(corpus_dir),
            "--out",
            str(tmp_path / "idx.json"),
        )
        assert code == 0
        assert "warning" in err


class TestSearchCommand:
    def test_pnorm_output_matches_library_bytes(
        self, capsys, fixture_corpus_dir, tmp_path
    ):
        out = tmp_path / "idx.json"
        run(capsys, "index", "--corpus", str(fixture_corpus_dir), "--out", str(out))
        code, stdout, _ = run(
            capsys,
            "search",
            "--index",
            str(out),
            "--model",
            "pnorm",
            "--query",
            "cat OR dog",
            "--k",
            "3",
        )
        assert code == 0
        index = load_index(out)
        ranked = rank_pnorm(index, parse_query("cat OR dog"), 3)
        expected = "".join(
            f"{doc_id}\t{format_float(score)}\n" for doc_id, score in ranked
        )
        assert stdout == expected

    def test_bim_with_judgments_file(self, capsys, fixture_corpus_dir, tmp_path):
        out = tmp_path / "idx.json"
        run(capsys, "index", "--corpus", str(fixture_corpus_dir), "--out", str(out))
        judgments = tmp_path / "judgments.json"
        judgments.write_text(json.dumps({"relevant": ["d1"]}), encoding="utf-8")
        code, stdout, _ = run(
            capsys,
            "search",
            "--index",
            str(out),
            "--model",
            "bim",
            "--query",
            "cat",
            "--judgments",
            str(judgments),
        )
        assert code == 0
        assert stdout.splitlines()[0].startswith("d1\t")

    def test_inet_requires_corpus(self, capsys, fixture_corpus_dir, tmp_path):
        out = tmp_path / "idx.json"
        run(capsys, "index", "--corpus", str(fixture_corpus_dir), "--out", str(out))
        code, _, err = run(
            capsys, "search", "--index", str(out), "--model", "inet",
            "--query", "cat",
        )
        assert code == 2
        assert "--corpus" in err

    def test_inet_with_corpus(self, capsys, fixture_corpus_dir, tmp_path):
        out = tmp_path / "idx.json"
        run(capsys, "index", "--corpus", str(fixture_corpus_dir), "--out", str(out))
        code, stdout, _ = run(
            capsys,
            "search",
            "--index",
            str(out),
            "--model",
            "inet",
            "--query",
            "wolf",
            "--corpus",
            str(fixture_corpus_dir),
        )
        assert code == 0
        assert stdout.splitlines()[0].startswith("d3\t")

    def test_malformed_query_is_data_error(
        self, capsys, fixture_corpus_dir, tmp_path
    ):
        out = tmp_path / "idx.json"
        run(capsys, "index", "--corpus", str(fixture_corpus_dir), "--out", str(out))
        code, _, err = run(
            capsys, "search", "--index", str(out), "--query", "cat AND"
        )
        assert code == 2
        assert "column 8" in err

    def test_version_mismatch_is_data_error(self, capsys, tmp_path):
        snapshot = tmp_path / "idx.json"
        snapshot.write_text(
            '{"version":"mirstat-index/0","N":0,"docs":[],"terms":{}}',
            encoding="utf-8",
        )
        code, _, err = run(
            capsys, "search", "--index", str(snapshot), "--query", "cat"
        )
        assert code == 2
        assert "version" in err


class TestExpandCommand:
    def test_prints_concepts(self, capsys, fixture_corpus_dir, tmp_path):
        out = tmp_path / "idx.json"
        run(capsys, "index", "--corpus", str(fixture_corpus_dir), "--out", str(out))
        code, stdout, _ = run(
            capsys,
            "expand",
            "--index",
            str(out),
            "--query",
            "cat",
            "--m",
            "2",
            "--k",
            "2",
        )
        assert code == 0
        lines = stdout.splitlines()
        assert len(lines) == 2
        for line in lines:
            concept, belief, weight = line.split("\t")
            assert float(belief) > 0
            assert 0 < float(weight) <= 1


class TestExportOwlCommand:
    def test_writes_parseable_owl(self, capsys, fixture_corpus_dir, tmp_path):
        idx = tmp_path / "idx.json"
        owl_path = tmp_path / "ontology.owl"
        run(capsys, "index", "--corpus", str(fixture_corpus_dir), "--out", str(idx))
        code, stdout, _ = run(
            capsys,
            "export-owl",
            "--index",
            str(idx),
            "--corpus",
            str(fixture_corpus_dir),
            "--out",
            str(owl_path),
        )
        assert code == 0
        ET.fromstring(owl_path.read_text(encoding="utf-8"))
        assert "classes" in stdout


class TestEvalCommand:
    def test_matches_hand_computed_metrics(
        self, capsys, fixture_corpus_dir, tmp_path
    ):
        idx = tmp_path / "idx.json"
        run(capsys, "index", "--corpus", str(fixture_corpus_dir), "--out", str(idx))
        fixtures = fixture_corpus_dir.parent
        code, stdout, _ = run(
            capsys,
            "eval",
            "--index",
            str(idx),
            "--queries",
            str(fixtures / "queries.json"),
            "--qrels",
            str(fixtures / "qrels.json"),
            "--k",
            "2",
        )
        assert code == 0
        lines = stdout.splitlines()
        # "cat" retrieves d1 and d2, both relevant.
        assert lines[0] == "cat\tP@2=1\tR@2=1"
        assert lines[-1].startswith("macro\t")

    def test_missing_qrels_entry_is_data_error(
        self, capsys, fixture_corpus_dir, tmp_path
    ):
        idx = tmp_path / "idx.json"
        run(capsys, "index", "--corpus", str(fixture_corpus_dir), "--out", str(idx))
        queries = tmp_path / "queries.json"
        queries.write_text('["cat"]', encoding="utf-8")
        qrels = tmp_path / "qrels.json"
        qrels.write_text("{}", encoding="utf-8")
        code, _, err = run(
            capsys,
            "eval",
            "--index",
            str(idx),
            "--queries",
            str(queries),
            "--qrels",
            str(qrels),
        )
        assert code == 2
        assert "cat" in err
