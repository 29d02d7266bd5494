from __future__ import annotations

import pytest
from click.testing import CliRunner

from namegraph.cli import main


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def corpus_files(tmp_path):
    (tmp_path / "entities.tsv").write_text(
        "1\tperson\tRafik al-Hariri\tRafik Hariri\n"
        "2\tperson\tEmile Lahoud\n"
        "3\tperson\tDetlev Mehlis\n"
        "4\torganization\tUnited Nations\tUN\n",
        encoding="utf-8",
    )
    (tmp_path / "clusters.tsv").write_text(
        "c1\ten\t2005-11-12\t3\thttp://news.example/c1\n"
        "c2\ten\t2005-11-12\t2\n"
        "c3\ten\t2005-11-13\t4\n",
        encoding="utf-8",
    )
    (tmp_path / "occ.tsv").write_text(
        "c1\ten\t2005-11-12\tRafik Hariri\n"
        "c1\ten\t2005-11-12\tEmile Lahoud\n"
        "c2\ten\t2005-11-12\tRafik Hariri\n"
        "c2\ten\t2005-11-12\tDetlev Mehlis\n"
        "c3\ten\t2005-11-13\tRafik Hariri\n"
        "c3\ten\t2005-11-13\tEmile Lahoud\n",
        encoding="utf-8",
    )
    (tmp_path / "titles.tsv").write_text(
        "1\ten\tformer lebanese prime minister\t350\n", encoding="utf-8"
    )
    return tmp_path


def ingest(runner, files):
    snap = files / "snap.bin"
    result = runner.invoke(
        main,
        [
            "ingest",
            "--occurrences", str(files / "occ.tsv"),
            "--clusters", str(files / "clusters.tsv"),
            "--entities", str(files / "entities.tsv"),
            "--titles", str(files / "titles.tsv"),
            "--out", str(snap),
        ],
    )
    assert result.exit_code == 0, result.output
    return snap


def test_no_arguments_shows_usage_and_fails(runner):
    result = runner.invoke(main, [])
    assert result.exit_code != 0
    assert "Usage" in result.output


def test_unknown_subcommand_fails(runner):
    result = runner.invoke(main, ["frobnicate"])
    assert result.exit_code != 0


def test_ingest_reports_sizes(runner, corpus_files):
    snap = corpus_files / "snap.bin"
    result = runner.invoke(
        main,
        [
            "ingest",
            "--occurrences", str(corpus_files / "occ.tsv"),
            "--clusters", str(corpus_files / "clusters.tsv"),
            "--entities", str(corpus_files / "entities.tsv"),
            "--out", str(snap),
        ],
    )
    assert result.exit_code == 0
    assert "3 entities" in result.output
    assert snap.exists()


def test_ingest_bad_reference_fails_with_line(runner, corpus_files):
    (corpus_files / "occ.tsv").write_text("c9\ten\t2005-11-12\tNobody Here\n", encoding="utf-8")
    result = runner.invoke(
        main,
        [
            "ingest",
            "--occurrences", str(corpus_files / "occ.tsv"),
            "--clusters", str(corpus_files / "clusters.tsv"),
            "--out", str(corpus_files / "snap.bin"),
        ],
    )
    assert result.exit_code != 0
    assert "occ.tsv:1" in result.output


def test_link_outputs_ranked_table(runner, corpus_files):
    snap = ingest(runner, corpus_files)
    result = runner.invoke(
        main, ["link", "related", "--entity", "1", "--top", "5", "--snapshot", str(snap)]
    )
    assert result.exit_code == 0, result.output
    rows = [line.split("\t") for line in result.output.strip().splitlines()]
    assert rows[0] == ["1", "2", "Emile Lahoud", "2"]
    assert rows[1] == ["2", "3", "Detlev Mehlis", "1"]


def test_link_associated_mode(runner, corpus_files):
    snap = ingest(runner, corpus_files)
    result = runner.invoke(
        main, ["link", "associated", "--entity", "1", "--top", "1", "--snapshot", str(snap)]
    )
    assert result.exit_code == 0
    assert result.output.startswith("1\t2\tEmile Lahoud\t")


def test_link_unknown_entity_fails(runner, corpus_files):
    snap = ingest(runner, corpus_files)
    result = runner.invoke(
        main, ["link", "related", "--entity", "42", "--top", "3", "--snapshot", str(snap)]
    )
    assert result.exit_code != 0
    assert "42" in result.output


def test_link_missing_snapshot_fails(runner, tmp_path):
    result = runner.invoke(
        main,
        ["link", "related", "--entity", "1", "--top", "3", "--snapshot", str(tmp_path / "no.bin")],
    )
    assert result.exit_code != 0
    assert "not found" in result.output


def test_map_dot_output(runner, corpus_files):
    snap = ingest(runner, corpus_files)
    result = runner.invoke(main, ["map", "--entity", "1", "--top", "2", "--snapshot", str(snap)])
    assert result.exit_code == 0
    assert result.output.startswith("graph relations {")
    assert 'label="Emile Lahoud"' in result.output
    assert 'pos="' in result.output


def test_map_coords_output(runner, corpus_files):
    snap = ingest(runner, corpus_files)
    result = runner.invoke(
        main, ["map", "--entity", "1", "--top", "2", "--coords", "--snapshot", str(snap)]
    )
    assert result.exit_code == 0
    rows = result.output.strip().splitlines()
    assert len(rows) == 3
    assert all(len(r.split("\t")) == 3 for r in rows)


def test_recognize_from_file(runner, tmp_path):
    pack = tmp_path / "en.tsv"
    pack.write_text("president\tleft\ttitle\n", encoding="utf-8")
    text = tmp_path / "doc.txt"
    text.write_text("president Omar Karami resigned.", encoding="utf-8")
    result = runner.invoke(
        main, ["recognize", "--lang", "en", "--triggers", str(pack), str(text)]
    )
    assert result.exit_code == 0
    cols = result.output.strip().split("\t")
    assert cols[2] == "trigger"
    assert cols[3] == "Omar Karami"
    assert cols[4] == "president"


def test_recognize_bad_pack_fails(runner, tmp_path):
    pack = tmp_path / "en.tsv"
    pack.write_text("[0-9\tleft\tregex_pattern\n", encoding="utf-8")
    text = tmp_path / "doc.txt"
    text.write_text("anything", encoding="utf-8")
    result = runner.invoke(main, ["recognize", "--triggers", str(pack), str(text)])
    assert result.exit_code != 0


def make_pages(tmp_path):
    pages = tmp_path / "pages"
    for lang in ("en", "fr"):
        (pages / lang).mkdir(parents=True)
    (pages / "en" / "1.html").write_text('<a href="/wiki/Emile_Lahoud">x</a>', encoding="utf-8")
    (pages / "en" / "2.html").write_text('<a href="/wiki/Rafik_Hariri">x</a>', encoding="utf-8")
    (pages / "fr" / "1.html").write_text('<a href="/wiki/Emile_Lahoud">x</a>', encoding="utf-8")
    (pages / "fr" / "2.html").write_text('<a href="/wiki/Rafik_Hariri">x</a>', encoding="utf-8")
    return pages


def test_baseline_and_eval_round_trip(runner, corpus_files):
    snap = ingest(runner, corpus_files)
    pages = make_pages(corpus_files)
    relations = corpus_files / "relations.tsv"
    result = runner.invoke(
        main,
        [
            "baseline",
            "--pages", str(pages),
            "--snapshot", str(snap),
            "--out", str(relations),
            "--min-languages", "2",
        ],
    )
    assert result.exit_code == 0, result.output
    assert "1 relations over 2 persons" in result.output
    assert relations.read_text(encoding="utf-8") == "1\t2\ten,fr\n"

    result = runner.invoke(
        main,
        [
            "eval",
            "--baseline", str(relations),
            "--snapshot", str(snap),
            "--mode", "both",
            "--ranks", "1,2",
        ],
    )
    assert result.exit_code == 0, result.output
    lines = result.output.strip().splitlines()
    assert lines[0].startswith("rank\t")
    assert lines[1].startswith("01\t")
    assert "persons=2" in lines[-1]


def test_eval_single_mode(runner, corpus_files):
    snap = ingest(runner, corpus_files)
    relations = corpus_files / "relations.tsv"
    relations.write_text("1\t2\ten\n", encoding="utf-8")
    result = runner.invoke(
        main,
        ["eval", "--baseline", str(relations), "--snapshot", str(snap),
         "--mode", "related", "--ranks", "1"],
    )
    assert result.exit_code == 0
    assert "averaging=macro" in result.output


def test_eval_missing_baseline_names_path(runner, corpus_files):
    snap = ingest(runner, corpus_files)
    missing = corpus_files / "nope.tsv"
    result = runner.invoke(
        main, ["eval", "--baseline", str(missing), "--snapshot", str(snap)]
    )
    assert result.exit_code != 0
    assert "nope.tsv" in result.output


def test_recognize_selects_pack_by_lang(runner, tmp_path):
    triggers = tmp_path / "triggers"
    first = tmp_path / "first_names"
    triggers.mkdir()
    first.mkdir()
    (triggers / "en.tsv").write_text("president\tleft\ttitle\n", encoding="utf-8")
    (triggers / "fr.tsv").write_text("président\tleft\ttitle\n", encoding="utf-8")
    (first / "fr.txt").write_text("Jacques\n", encoding="utf-8")
    doc = tmp_path / "doc.txt"
    doc.write_text("le président Jacques Chirac a parlé", encoding="utf-8")
    result = runner.invoke(
        main,
        ["recognize", "--lang", "fr", "--triggers", str(triggers),
         "--first-names", str(first), str(doc)],
    )
    assert result.exit_code == 0, result.output
    rows = [line.split("\t") for line in result.output.strip().splitlines()]
    assert rows[0][3] == "Jacques Chirac"
    result = runner.invoke(
        main, ["recognize", "--lang", "de", "--triggers", str(triggers), str(doc)]
    )
    assert result.exit_code != 0
    assert "de" in result.output
