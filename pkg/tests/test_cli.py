"""End-to-end checks for the command line front end."""
import os
import subprocess

import pytest

from conftest import build_wordnet_dir
from qexpand import cli

DATA = os.path.join(os.path.dirname(__file__), "data")
DUMP = os.path.join(DATA, "mini_dump.xml")

CORPUS = (
    "<DOC>\n<DOCNO>CDOC1</DOCNO>\n<TEXT>The swine flu vaccine rollout.</TEXT>\n</DOC>\n"
    "<DOC>\n<DOCNO>CDOC2</DOCNO>\n<TEXT>Influenza immunization for pigs.</TEXT>\n</DOC>\n"
    "<DOC>\n<DOCNO>CDOC3</DOCNO>\n<TEXT>Gardening advice for spring weather.</TEXT>\n</DOC>\n"
)

TOPICS = (
    "<top>\n<num> Number: 126\n<title> Swine flu vaccine\n</top>\n"
    "<top>\n<num> Number: 127\n<title> Bird egg\n</top>\n"
)

QRELS = (
    "126 0 CDOC1 1\n126 0 CDOC2 1\n126 0 CDOC3 0\n"
    "127 0 CDOC1 0\n127 0 CDOC2 0\n127 0 CDOC3 0\n"
)


@pytest.fixture(scope="module")
def world(tmp_path_factory):
    """Store, index, and topic files shared by the read-only tests."""
    root = tmp_path_factory.mktemp("cli_world")
    wn_src = root / "wn_src"
    wn_src.mkdir()
    build_wordnet_dir(wn_src)
    (root / "corpus.sgml").write_text(CORPUS)
    (root / "topics.txt").write_text(TOPICS)
    (root / "judge.qrels").write_text(QRELS)
    store = root / "store"
    assert cli.main(["ingest-wiki", "--dump", DUMP, "--store", str(store)]) == 0
    assert (
        cli.main(["ingest-wordnet", "--wordnet", str(wn_src), "--store", str(store)])
        == 0
    )
    idx = root / "idx"
    assert (
        cli.main(
            ["index", "--corpus", str(root / "corpus.sgml"), "--index", str(idx)]
        )
        == 0
    )
    return root


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


# ----------------------------------------------------------------------
# store building

def test_ingest_writes_both_stores(world, capsys):
    capsys.readouterr()
    assert os.path.exists(world / "store" / "wiki" / "manifest.json")
    assert os.path.exists(world / "store" / "wordnet" / "manifest.json")
    assert os.path.exists(world / "idx" / "manifest.json")
    # the lock is released once ingest finishes
    assert not os.path.exists(world / "store" / cli.LOCK_NAME)


def test_ingest_refuses_existing_store(world, capsys):
    rc = cli.main(["ingest-wiki", "--dump", DUMP, "--store", str(world / "store")])
    err = capsys.readouterr().err
    assert rc == 1
    assert "already exists" in err


def test_lock_file_blocks_second_writer(tmp_path, capsys):
    store = tmp_path / "store"
    store.mkdir()
    (store / cli.LOCK_NAME).write_text("12345\n")
    rc = cli.main(["ingest-wiki", "--dump", DUMP, "--store", str(store)])
    err = capsys.readouterr().err
    assert rc == 1
    assert cli.LOCK_NAME in err
    assert not (store / "wiki").exists()


def test_failed_ingest_removes_partial_output(tmp_path, capsys):
    bad = tmp_path / "bad.xml"
    bad.write_text("this is not an export file")
    store = tmp_path / "store"
    rc = cli.main(["ingest-wiki", "--dump", str(bad), "--store", str(store)])
    err = capsys.readouterr().err
    assert rc == 1
    assert "malformed" in err
    assert not (store / "wiki").exists()
    assert not (store / cli.LOCK_NAME).exists()


def test_index_refuses_existing_directory(world, tmp_path, capsys):
    target = tmp_path / "idx"
    target.mkdir()
    rc = cli.main(
        ["index", "--corpus", str(world / "corpus.sgml"), "--index", str(target)]
    )
    assert rc == 1
    assert "already exists" in capsys.readouterr().err


# ----------------------------------------------------------------------
# expand

def test_expand_stdout_matches_out_file(world, tmp_path, capsys):
    argv = ["expand", "Swine flu vaccine", "--store", str(world / "store")]
    assert cli.main(argv) == 0
    printed = capsys.readouterr().out
    out = tmp_path / "report.txt"
    assert cli.main(argv + ["--out", str(out)]) == 0
    assert _read(out) == printed
    assert "term\tsource\tstage1\tcorrelation\tweight" in printed
    assert "influenza\twiki" in printed
    # per-source listings and the final weighted query ride along
    assert "# wordnet terms:" in printed
    assert "# wiki terms:" in printed
    assert "# weighted query: Swine:1.000000" in printed
    assert "influenza:0.500000" in printed


def test_expand_without_input_fails(world, capsys):
    rc = cli.main(["expand", "--store", str(world / "store")])
    assert rc == 1
    assert "no input" in capsys.readouterr().err


# ----------------------------------------------------------------------
# search

def test_search_run_file_layout(world, tmp_path):
    out = tmp_path / "run.txt"
    rc = cli.main(
        [
            "search",
            "--topics", str(world / "topics.txt"),
            "--index", str(world / "idx"),
            "--store", str(world / "store"),
            "--out", str(out),
        ]
    )
    assert rc == 0
    lines = _read(out).splitlines()
    assert lines
    for rank, line in enumerate(lines, start=1):
        fields = line.split()
        assert len(fields) == 6
        assert fields[1] == "Q0"
        assert fields[3] == str(rank)
        assert "." in fields[4] and len(fields[4].split(".")[1]) == 6
        assert fields[5] == "qexpand-bm25"


def test_expansion_recovers_synonym_only_document(world, tmp_path):
    # CDOC2 shares no surface term with the query; only the expanded
    # form reaches it
    base = tmp_path / "base.txt"
    wide = tmp_path / "wide.txt"
    common = [
        "search", "--topics", str(world / "topics.txt"),
        "--index", str(world / "idx"),
    ]
    assert cli.main(common + ["--out", str(base)]) == 0
    assert cli.main(common + ["--store", str(world / "store"), "--out", str(wide)]) == 0
    assert "CDOC2" not in _read(base)
    assert "CDOC2" in _read(wide)


# ----------------------------------------------------------------------
# eval

def test_eval_prints_and_writes_reports(world, tmp_path, capsys):
    run = tmp_path / "run.txt"
    assert (
        cli.main(
            [
                "search",
                "--topics", str(world / "topics.txt"),
                "--index", str(world / "idx"),
                "--store", str(world / "store"),
                "--out", str(run),
            ]
        )
        == 0
    )
    capsys.readouterr()
    out_dir = tmp_path / "scores"
    rc = cli.main(
        [
            "eval", str(run),
            "--qrels", str(world / "judge.qrels"),
            "--out", str(out_dir),
        ]
    )
    printed = capsys.readouterr().out
    assert rc == 0
    assert "map\t1.0000" in printed
    assert _read(out_dir / "report.tsv") == printed
    curve = _read(out_dir / "curve.tsv").splitlines()
    assert curve[0] == "recall_level\tprecision"
    assert len(curve) == 12


def test_eval_two_topic_summary(tmp_path, capsys):
    # topic 1: its only relevant doc sits at rank 10, so AP is 0.1;
    # topic 2: two of five relevant lead the ranking, so AP is 0.4;
    # together they average to 0.25 and multiply to 0.2 squared
    run_lines = []
    for rank in range(1, 11):
        run_lines.append(f"1 Q0 D{rank} {rank} {1.0 / rank:.6f} t")
    for rank in range(1, 3):
        run_lines.append(f"2 Q0 E{rank} {rank} {1.0 / rank:.6f} t")
    run = tmp_path / "run.txt"
    run.write_text("\n".join(run_lines) + "\n")
    qrels = tmp_path / "j.qrels"
    qrels.write_text(
        "1 0 D10 1\n"
        "2 0 E1 1\n2 0 E2 1\n2 0 E7 1\n2 0 E8 1\n2 0 E9 1\n"
    )
    rc = cli.main(["eval", str(run), "--qrels", str(qrels)])
    printed = capsys.readouterr().out
    assert rc == 0
    assert "map\t0.2500" in printed
    assert "gm_map\t0.2000" in printed


# ----------------------------------------------------------------------
# sweep

def test_sweep_emits_six_rows_by_default(world, capsys):
    rc = cli.main(
        [
            "sweep",
            "--topics", str(world / "topics.txt"),
            "--index", str(world / "idx"),
            "--store", str(world / "store"),
            "--qrels", str(world / "judge.qrels"),
        ]
    )
    printed = capsys.readouterr().out
    assert rc == 0
    lines = printed.strip().splitlines()
    assert lines[0] == "m\tmap_bm25\tmap_tfidf"
    assert len(lines) == 7
    assert [ln.split("\t")[0] for ln in lines[1:]] == ["10", "20", "30", "40", "50", "60"]
    for line in lines[1:]:
        assert len(line.split("\t")) == 3


def test_sweep_single_model_column(world, capsys):
    rc = cli.main(
        [
            "sweep",
            "--topics", str(world / "topics.txt"),
            "--index", str(world / "idx"),
            "--store", str(world / "store"),
            "--qrels", str(world / "judge.qrels"),
            "--model", "tfidf",
        ]
    )
    printed = capsys.readouterr().out
    assert rc == 0
    assert printed.splitlines()[0] == "m\tmap_tfidf"


def test_sweep_custom_sizes_and_determinism(world, tmp_path, capsys):
    argv = [
        "sweep",
        "--topics", str(world / "topics.txt"),
        "--index", str(world / "idx"),
        "--store", str(world / "store"),
        "--qrels", str(world / "judge.qrels"),
        "--m", "5,10",
    ]
    first = tmp_path / "a.tsv"
    second = tmp_path / "b.tsv"
    assert cli.main(argv + ["--out", str(first)]) == 0
    assert cli.main(argv + ["--out", str(second)]) == 0
    capsys.readouterr()
    a = _read(first)
    assert a == _read(second)
    assert len(a.strip().splitlines()) == 3


# ----------------------------------------------------------------------
# configuration

def test_config_section_sets_model(world, tmp_path, capsys):
    cfg = tmp_path / "qx.cfg"
    cfg.write_text(
        "# comment line\n"
        f"[global]\nstore = {world / 'store'}\n"
        "[search]\nmodel = tfidf\n"
    )
    rc = cli.main(
        [
            "search",
            "--topics", str(world / "topics.txt"),
            "--index", str(world / "idx"),
            "--config", str(cfg),
        ]
    )
    printed = capsys.readouterr().out
    assert rc == 0
    assert "qexpand-tfidf" in printed


def test_flag_overrides_config(world, tmp_path, capsys):
    cfg = tmp_path / "qx.cfg"
    cfg.write_text("[search]\nmodel = tfidf\n")
    rc = cli.main(
        [
            "search",
            "--topics", str(world / "topics.txt"),
            "--index", str(world / "idx"),
            "--store", str(world / "store"),
            "--config", str(cfg),
            "--model", "bm25",
        ]
    )
    printed = capsys.readouterr().out
    assert rc == 0
    assert "qexpand-bm25" in printed
    assert "tfidf" not in printed


def test_env_var_supplies_store_root(world, capsys, monkeypatch):
    monkeypatch.setenv(cli.STORE_ENV, str(world / "store"))
    rc = cli.main(["expand", "Swine flu vaccine"])
    printed = capsys.readouterr().out
    assert rc == 0
    assert "influenza\twiki" in printed


def test_config_rejects_malformed_line(world, tmp_path, capsys):
    cfg = tmp_path / "qx.cfg"
    cfg.write_text("[global]\nstore\n")
    rc = cli.main(["expand", "pig", "--config", str(cfg)])
    err = capsys.readouterr().err
    assert rc == 1
    assert "config line 2" in err


# ----------------------------------------------------------------------
# argument validation

def test_missing_required_inputs(world, capsys, monkeypatch):
    monkeypatch.delenv(cli.STORE_ENV, raising=False)
    cases = [
        (["ingest-wiki", "--store", "s"], "--dump"),
        (["ingest-wordnet", "--store", "s"], "--wordnet"),
        (["index", "--corpus", "c.sgml"], "--index"),
        (["search", "q"], "--index"),
        (["sweep", "q", "--index", str(world / "idx")], "--qrels"),
        (["expand", "q"], "store"),
    ]
    for argv, needle in cases:
        rc = cli.main(argv)
        err = capsys.readouterr().err
        assert rc == 1, argv
        assert needle in err, argv


def test_unknown_relation_rejected(world, capsys):
    rc = cli.main(
        ["expand", "pig", "--store", str(world / "store"), "--relations", "antonym"]
    )
    assert rc == 1
    assert "antonym" in capsys.readouterr().err


def test_no_subcommand_prints_help(capsys):
    assert cli.main([]) == 2
    assert "usage: qexpand" in capsys.readouterr().out


def test_console_script_is_installed():
    proc = subprocess.run(
        ["qexpand", "--help"], capture_output=True, text=True, timeout=60
    )
    assert proc.returncode == 0
    for name in ("ingest-wiki", "ingest-wordnet", "index", "search", "eval", "sweep"):
        assert name in proc.stdout
