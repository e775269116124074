"""Command-line entry point: exit codes, streams, artifact wiring."""

import json
import shutil

import pytest

from agriqa.cli import main
from agriqa.corpus import read_corpus
from tests.conftest import TOY_CSV, run_cli


def test_unknown_flag_exits_1(capsys):
    assert main(["ingest", "--frobnicate"]) == 1
    captured = capsys.readouterr()
    assert "usage" in captured.err
    assert captured.out == ""


def test_unknown_subcommand_exits_1():
    assert main(["transmogrify"]) == 1


def test_bad_choice_exits_1(tmp_path, capsys):
    rc = main(["eval", "--model", str(tmp_path), "--test", str(tmp_path),
               "--metric", "euclid"])
    assert rc == 1
    assert "invalid choice" in capsys.readouterr().err


def test_missing_input_exits_2(tmp_path, capsys):
    rc = main(["ingest", "--input", str(tmp_path / "nope.csv"),
               "--out", str(tmp_path / "out.jsonl")])
    assert rc == 2
    captured = capsys.readouterr()
    assert captured.err.strip()
    assert captured.out == ""


def test_bad_top_n_value_exits_2(pipeline, capsys):
    rc = run_cli("eval", "--index", pipeline["index"], "--model",
                 pipeline["model"], "--test", pipeline["test"],
                 "--top-n", "one,three")
    assert rc == 2
    assert "--top-n" in capsys.readouterr().err


def test_sweep_requires_train_corpus(pipeline, capsys):
    rc = run_cli("eval", "--model", pipeline["model"], "--test",
                 pipeline["test"], "--sweep-dims", "10")
    assert rc == 2
    assert "--train" in capsys.readouterr().err


def test_ingest_summary_line_and_artifacts(tmp_path, capsys):
    out = tmp_path / "corpus.jsonl"
    rc = run_cli("ingest", "--input", TOY_CSV, "--out", out,
                 "--split-ratio", "0.8", "--seed", "42")
    assert rc == 0
    captured = capsys.readouterr()
    assert captured.out == "entries=287 dropped_non_english=3 weather=12\n"
    assert "split train=229 test=58 seed=42" in captured.err
    assert out.exists()
    assert (tmp_path / "spell.tsv").exists()
    assert len(read_corpus(tmp_path / "corpus.train.jsonl")) == 229
    assert len(read_corpus(tmp_path / "corpus.test.jsonl")) == 58


def test_ingest_accepts_a_directory(tmp_path, capsys):
    data = tmp_path / "data"
    data.mkdir()
    shutil.copy(TOY_CSV, data / "export.csv")
    rc = run_cli("ingest", "--input", data, "--out", tmp_path / "corpus.jsonl")
    assert rc == 0
    assert capsys.readouterr().out.startswith("entries=287")


def test_ask_json_known_question(full_pipeline, capsys):
    rc = run_cli("ask", "market rate of wheat", "--index",
                 full_pipeline["index"], "--model", full_pipeline["model"],
                 "--offline-weather", "--json")
    assert rc == 0
    body = json.loads(capsys.readouterr().out)
    assert body["source"] == "kb"
    assert body["matched_question"] == "wheat market rate"


def test_ask_text_weather(full_pipeline, capsys):
    rc = run_cli("ask", "what is the weather", "--index",
                 full_pipeline["index"], "--model", full_pipeline["model"],
                 "--offline-weather", "--state", "punjab",
                 "--district", "ludhiana")
    assert rc == 0
    assert capsys.readouterr().out.startswith("Forecast for ludhiana, punjab")


def test_ask_text_escalation_message(full_pipeline, capsys):
    rc = run_cli("ask", "qqqqqq zzzzzz", "--index", full_pipeline["index"],
                 "--model", full_pipeline["model"], "--offline-weather")
    assert rc == 0
    captured = capsys.readouterr()
    assert captured.out == "This question has been forwarded to a human expert.\n"
    assert "escalated: unembeddable" in captured.err


def test_eval_writes_report_to_out(pipeline, tmp_path):
    report = tmp_path / "report.txt"
    rc = run_cli("eval", "--index", pipeline["index"], "--model",
                 pipeline["model"], "--test", pipeline["test"],
                 "--metric", "both", "--out", report)
    assert rc == 0
    text = report.read_text(encoding="utf-8")
    assert "metric=jaccard" in text and "metric=lesk" in text


def test_eval_with_labeled_pairs_calibration(pipeline, tmp_path, capsys):
    pairs = tmp_path / "pairs.csv"
    pairs.write_text(
        "test_question,predicted_question,is_correct\n"
        "market rate of wheat,wheat market rate,1\n"
        "market rate of wheat,paddy seed dose,0\n", encoding="utf-8")
    rc = run_cli("eval", "--index", pipeline["index"], "--model",
                 pipeline["model"], "--test", pipeline["test"],
                 "--labeled-pairs", pairs, "--out", tmp_path / "r.txt")
    assert rc == 0
    assert "calibrated threshold=" in capsys.readouterr().err


def test_stats_reports_fractions(tmp_path, capsys):
    rc = run_cli("stats", "--input", TOY_CSV, "--out", tmp_path / "stats.txt")
    assert rc == 0
    text = (tmp_path / "stats.txt").read_text(encoding="utf-8")
    assert text.startswith("total_records=")
    assert "season\t" in text and "query_type\t" in text


def test_rebuild_reads_config_from_environment(service_env, monkeypatch, capsys):
    monkeypatch.setenv("AGRIQA_CONFIG", str(service_env["config"]))
    assert main(["rebuild"]) == 0
    assert "applied=0" in capsys.readouterr().out


def test_rebuild_without_config_exits_2(monkeypatch, capsys):
    monkeypatch.delenv("AGRIQA_CONFIG", raising=False)
    assert main(["rebuild"]) == 2
    assert "AGRIQA_CONFIG" in capsys.readouterr().err
