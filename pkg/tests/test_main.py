"""End-to-end CLI runs through main.main."""

import json

import pytest

from main import EXIT_INPUT, get_args, main

pytestmark = pytest.mark.integration

WORKED_INPUT = '{"c": [0, 0], "d": [0.5, 0.25]}'
ALPHA_INPUT = '{"alpha": [[0.5, 0], [0.3333333333333333, 0]]}'


def _report(capsys):
    return json.loads(capsys.readouterr().out)


def _last_stderr_line(err: str) -> str:
    return [line for line in err.splitlines() if line.strip()][-1]


def test_get_args_requires_command():
    with pytest.raises(SystemExit):
        get_args([])


def test_get_args_subcommand_flags():
    args = get_args(["demo", "--c", "2", "--b1", "0.1", "--n", "4"])
    assert args.command == "demo"
    assert (args.c, args.b1, args.b2) == (2.0, 0.1, 0.5)
    assert args.n == 4


def test_alpha2pair(capsys):
    assert main(["alpha2pair", "--input", ALPHA_INPUT]) == 0
    report = _report(capsys)
    assert report["metadata"]["command"] == "alpha2pair"
    assert report["result"]["c"] == pytest.approx([0.0, 0.0], abs=1e-15)
    assert report["result"]["m"] == pytest.approx([0.0, 0.25, 1.0 / 3.0], abs=1e-15)


def test_pair2alpha_complex_as_pairs(capsys):
    assert main(["pair2alpha", "--input", WORKED_INPUT]) == 0
    alpha = _report(capsys)["result"]["alpha"]
    assert len(alpha) == 2
    for entry in alpha:
        assert entry == pytest.approx([0.0, 0.0], abs=1e-15)


def test_zeros_worked_pair(capsys):
    assert main(["zeros", "--n", "2", "--input", WORKED_INPUT]) == 0
    result = _report(capsys)["result"]
    assert result["x"] == pytest.approx([0.5, -0.5], abs=1e-12)
    assert result["arc_hull"]["heuristic"] is True


def test_demo_masses(capsys):
    assert main(["demo", "--profile", "fast"]) == 0
    result = _report(capsys)["result"]
    masses = [pp["mass"] for pp in result["pure_points"]]
    assert masses == pytest.approx([8.0 / 15.0, 2.0 / 15.0], abs=1e-14)
    assert result["bands_within_support"] is True


def test_invalid_input_exit_code(capsys):
    assert main(["pair2alpha", "--input", '{"c": [0], "m": [1.5]}']) == EXIT_INPUT
    captured = capsys.readouterr()
    assert captured.out == ""
    error = json.loads(_last_stderr_line(captured.err))
    assert error["error"] == "InvalidParametersError"
    assert set(error) == {"error", "message", "details"}


def test_configuration_error(capsys):
    assert main(["zeros", "--workers", "64", "--input", WORKED_INPUT]) == EXIT_INPUT
    captured = capsys.readouterr()
    assert captured.out == ""
    error = json.loads(_last_stderr_line(captured.err))
    assert error["error"] == "InputValidationError"
    assert error["message"].startswith("Configuration error: ")
    assert set(error) == {"error", "message", "details"}


def test_csv_format(capsys):
    assert main(["alpha2pair", "--format", "csv", "--input", ALPHA_INPUT]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,c,m,d"
    assert len(lines) == 3


def test_both_format_writes_files(capsys, tmp_path):
    out_dir = tmp_path / "out"
    assert main(["alpha2pair", "--format", "both", "--output-dir", str(out_dir), "--input", ALPHA_INPUT]) == 0
    assert (out_dir / "pair.csv").read_text().startswith("n,c,m,d\n")
    written = json.loads((out_dir / "alpha2pair.json").read_text())
    assert written == _report(capsys)


def test_input_from_file(capsys, tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(WORKED_INPUT)
    assert main(["quadrature", "--n", "2", "--input", str(path)]) == 0
    weights = _report(capsys)["result"]["weights"]
    assert weights == pytest.approx([1.0 / 3.0] * 3, abs=1e-12)


def test_show_config(capsys):
    assert main(["check", "--show-config", "--workers", "3"]) == 0
    out = capsys.readouterr().out
    assert "RESOLVED CONFIGURATION" in out
    assert "max_workers: 3" in out
