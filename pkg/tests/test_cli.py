import json

import pytest

import cli


@pytest.fixture
def log_args(tmp_path):
    return ["--logs-path", str(tmp_path / "log.txt"), "--minimize-stdout-logs"]


def test_dims_json(capsys, log_args):
    code = cli.main(["dims", "--n", "2", "--r", "2", "--format", "json", *log_args])
    assert code == 0
    document = json.loads(capsys.readouterr().out)
    assert document["result"]["expected_rank"] == 19
    assert document["config"]["subcommand"] == "dims"


def test_output_is_reproducible(capsys, log_args):
    argv = ["rank", "--n", "2", "--r", "3", "--trials", "2", "--seed", "7", "--format", "json"]
    assert cli.main([*argv, *log_args]) == 0
    first = capsys.readouterr().out
    assert cli.main([*argv, *log_args]) == 0
    assert capsys.readouterr().out == first


def test_out_file(tmp_path, capsys, log_args):
    target = tmp_path / "count.csv"
    code = cli.main(["count", "--n", "3", "--r", "3", "--format", "csv", "--out", str(target), *log_args])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert target.read_text() == "n,r,i_closed\n3,3,18\n"


def test_signature_flag(capsys, log_args):
    code = cli.main(
        ["kernel", "--n", "3", "--r", "1", "--flat", "--signature", "2,1", "--format", "json", *log_args]
    )
    assert code == 0
    document = json.loads(capsys.readouterr().out)
    assert document["result"]["signature"] == [2, 1]
    assert document["result"]["kernel_dim"] == 3


def test_usage_errors(capsys, log_args):
    assert cli.main(["dims", "--n", "0", "--r", "1", *log_args]) == 2
    assert cli.main(["rank", "--n", "3", "--r", "2", "--signature", "1,1", *log_args]) == 2
    assert cli.main(["dims", "--n", "2", *log_args]) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_errors():
    assert cli.main(["nosuch"]) == 2
    assert cli.main(["dims", "--signature", "x"]) == 2


def test_missing_point_file(tmp_path, log_args):
    assert cli.main(["rank", "--point", str(tmp_path / "absent.json"), *log_args]) == 2


def test_logs_written(tmp_path):
    logs = tmp_path / "run.log"
    assert cli.main(["count", "--n", "2", "--r", "2", "--logs-path", str(logs), "--minimize-stdout-logs"]) == 0
    assert "count n=2 r=2: 1" in logs.read_text()


def test_workers_from_environment(monkeypatch, capsys, log_args):
    monkeypatch.setenv("METRIC_INVARIANTS_WORKERS", "2")
    assert cli.main(["dims", "--n", "1", "--r", "0", "--format", "json", *log_args]) == 0
    assert json.loads(capsys.readouterr().out)["config"]["workers"] == 2
