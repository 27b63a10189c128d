"""
Integration tests for the dep-tools command line
================================================

Exit codes are checked through ``run``; stdout content and stdin input go
through click's CliRunner.
"""

import json

import pandas as pd
import pytest
from click.testing import CliRunner

from dep_tools import cli as cli_module
from dep_tools.cli import EXIT_DATA, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, cli, run
from dep_tools.corpus.conll import parse_conll, write_conll
from dep_tools.exceptions import TrainingError
from tests.conftest import conll_text

pytestmark = pytest.mark.integration


def _conll_lines(output):
    """Token lines of CLI output, ignoring anything that is not CoNLL"""
    return [line for line in output.splitlines() if line.count("\t") == 9]


@pytest.fixture
def gold_file(tmp_path, toy_conll):
    path = tmp_path / "gold.conll"
    path.write_text(toy_conll, encoding="utf-8")
    return path


@pytest.fixture
def separable_file(tmp_path, separable_corpus):
    path = tmp_path / "separable.conll"
    path.write_text(write_conll(separable_corpus), encoding="utf-8")
    return path


@pytest.fixture
def trained_model(tmp_path, separable_file):
    model = tmp_path / "model.bin"
    code = run([
        "train", str(separable_file), "--model", str(model), "--epochs", "200",
        "--until-converged", "--hash-bits", "16", "--seed", "1",
    ])
    assert code == EXIT_OK
    return model


class TestExitCodes:
    """Failures map to 1, 2 and 3"""

    def test_eval_gold_against_itself(self, gold_file):
        assert run(["eval", str(gold_file), str(gold_file)]) == EXIT_OK

    def test_unknown_flag(self, gold_file):
        assert run(["eval", "--no-such-flag", str(gold_file)]) == EXIT_USAGE

    def test_sequential_with_many_threads(self, gold_file, tmp_path):
        code = run([
            "train", str(gold_file), "--model", str(tmp_path / "m.bin"),
            "--mode", "sequential", "--threads", "3",
        ])
        assert code == EXIT_USAGE

    def test_hash_bits_out_of_range(self, gold_file, tmp_path):
        code = run([
            "train", str(gold_file), "--model", str(tmp_path / "m.bin"), "--hash-bits", "2",
        ])
        assert code == EXIT_USAGE

    def test_malformed_conll(self, tmp_path):
        bad = tmp_path / "bad.conll"
        bad.write_text("1\tword\t_\n", encoding="utf-8")
        assert run(["train", str(bad), "--model", str(tmp_path / "m.bin")]) == EXIT_DATA

    def test_head_out_of_range(self, tmp_path):
        bad = tmp_path / "bad.conll"
        bad.write_text(conll_text([[("a", "X", 7)]]), encoding="utf-8")
        assert run(["eval", str(bad), str(bad)]) == EXIT_DATA

    def test_bad_model_file(self, gold_file, tmp_path):
        model = tmp_path / "garbage.bin"
        model.write_bytes(b"not a model at all")
        code = run(["parse", str(gold_file), "--model", str(model), "--out", str(tmp_path / "o")])
        assert code == EXIT_DATA

    def test_eval_sentence_count_mismatch(self, gold_file, tmp_path):
        short = tmp_path / "short.conll"
        short.write_text(conll_text([[("Mary", "NNP", 2), ("slept", "VBD", 0)]]))
        assert run(["eval", str(gold_file), str(short)]) == EXIT_DATA

    def test_training_failure(self, gold_file, tmp_path, mocker):
        mocker.patch("dep_tools.cli.train_model", side_effect=TrainingError("workers died"))
        assert run(["train", str(gold_file), "--model", str(tmp_path / "m.bin")]) == EXIT_INTERNAL


class TestTrainParseEval:
    """Full pipeline through files"""

    def test_pipeline(self, tmp_path, separable_file, trained_model):
        predicted = tmp_path / "pred.conll"
        assert trained_model.exists()
        assert (tmp_path / "model.bin.trace.jsonl").exists()
        assert run([
            "parse", str(separable_file), "--model", str(trained_model), "--out", str(predicted),
        ]) == EXIT_OK

        gold = parse_conll(separable_file.read_text(encoding="utf-8"))
        pred = parse_conll(predicted.read_text(encoding="utf-8"))
        assert [s.tokens for s, _ in pred] == [s.tokens for s, _ in gold]

        result = CliRunner().invoke(cli, ["eval", str(separable_file), str(predicted)])
        assert result.exit_code == 0
        uas_line = next(line for line in result.output.splitlines() if line.startswith("UAS "))
        assert 0.0 <= float(uas_line.split()[1]) <= 100.0

    def test_trace_records(self, tmp_path, trained_model):
        lines = (tmp_path / "model.bin.trace.jsonl").read_text().splitlines()
        records = [json.loads(line) for line in lines]
        assert records[-1]["event"] == "summary"
        assert records[-1]["converged"] is True

    def test_same_seed_gives_identical_model(self, tmp_path, gold_file):
        paths = [tmp_path / "a.bin", tmp_path / "b.bin"]
        for path in paths:
            assert run([
                "train", str(gold_file), "--model", str(path), "--epochs", "3",
                "--hash-bits", "16", "--seed", "9",
            ]) == EXIT_OK
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_full_delay_mode(self, tmp_path, separable_file):
        model = tmp_path / "delay.bin"
        trace = tmp_path / "delay.jsonl"
        assert run([
            "train", str(separable_file), "--model", str(model), "--mode", "full-delay",
            "--threads", "2", "--hash-bits", "16", "--trace", str(trace),
        ]) == EXIT_OK
        records = [json.loads(line) for line in trace.read_text().splitlines()]
        assert {"step", "summary"} <= {r["event"] for r in records}

    def test_threaded_lockfree(self, tmp_path, separable_file):
        model = tmp_path / "free.bin"
        assert run([
            "train", str(separable_file), "--model", str(model), "--mode", "lockfree",
            "--threads", "2", "--backend", "thread", "--epochs", "3", "--hash-bits", "16",
        ]) == EXIT_OK
        assert model.stat().st_size > 0


class TestStdio:
    """stdin input and stdout output"""

    def test_parse_from_stdin(self, trained_model, separable_corpus):
        text = write_conll(separable_corpus[:3])
        result = CliRunner().invoke(cli, ["parse", "--model", str(trained_model)], input=text)
        assert result.exit_code == 0
        assert len(_conll_lines(result.output)) == sum(len(s) for s, _ in separable_corpus[:3])

    def test_eval_from_stdin(self, gold_file, toy_conll):
        result = CliRunner().invoke(cli, ["eval", str(gold_file)], input=toy_conll)
        assert result.exit_code == 0
        assert "UAS 100.00" in result.output


class TestConvlabCommand:
    """Bound checks from the command line"""

    def test_json_record(self, tmp_path):
        result = CliRunner().invoke(cli, [
            "convlab", "--k", "2", "--sentences", "10", "--max-length", "4",
            "--backend", "thread", "--seed", "2", "--json", "--output", str(tmp_path / "reports"),
        ])
        assert result.exit_code == 0
        line = next(line for line in result.output.splitlines() if line.startswith("{"))
        record = json.loads(line)
        assert record["bounds_hold"] is True
        assert [r["mode"] for r in record["reports"]][:2] == ["sequential", "full_delay"]
        assert (tmp_path / "reports" / "latest" / "report.json").exists()

    def test_invalid_k(self):
        assert run(["convlab", "--k", "0"]) == EXIT_USAGE


class TestCurveCommand:
    """Held-out learning curve"""

    def test_csv_export(self, tmp_path, separable_file, mocker):
        to_csv = mocker.spy(cli_module.pd.DataFrame, "to_csv")
        csv_path = tmp_path / "curve.csv"
        assert run([
            "curve", str(separable_file), str(separable_file), "--epochs", "3",
            "--hash-bits", "16", "--csv", str(csv_path),
        ]) == EXIT_OK
        assert to_csv.call_count == 1
        frame = pd.read_csv(csv_path)
        assert list(frame["epoch"]) == [1, 2, 3]
        assert frame["uas"].between(0.0, 1.0).all()
