from __future__ import annotations

import runpy
import sys
from pathlib import Path

import pytest

from onepw import main


def run(monkeypatch: pytest.MonkeyPatch, *argv: str, status: int) -> None:
    with monkeypatch.context() as mp:
        mp.setattr(sys, "argv", ["onepw", *argv])
        with pytest.raises(SystemExit, match=f"^{status}$"):
            main.main()


def test_no_command(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    run(monkeypatch, status=2)
    assert capsys.readouterr().err.startswith("usage: ")
    run(monkeypatch, "search", status=2)


def test_validate(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    run(monkeypatch, "validate", "corpus/k33.drawing", status=0)
    assert capsys.readouterr().out == "VALID vertices=6 edges=9 crossings=1\n"


def test_validate_invalid(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    run(monkeypatch, "validate", "corpus/degree3.drawing", status=1)
    out = capsys.readouterr().out
    assert out.startswith("INVALID\n")
    assert "degree-4 violation" in out


def test_validate_parse_error(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    run(monkeypatch, "validate", "corpus/truncated.drawing", status=2)
    err = capsys.readouterr().err
    assert err == "corpus/truncated.drawing: line 7: record 'e' expects 2 fields\n"


def test_validate_missing(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    run(monkeypatch, "validate", "corpus/none.drawing", status=2)
    assert capsys.readouterr().err == "error: No such drawing file 'corpus/none.drawing'\n"


def test_certify(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    run(monkeypatch, "certify", "corpus/k36.drawing", status=0)
    out = capsys.readouterr().out
    assert out.startswith("V=9\nE=18\n")
    assert out.endswith("E<=2V+4x-12-t0/2: 18<=18 PASS\n")


@pytest.mark.parametrize(
    ("command", "name", "status"),
    [
        ("certify", "separating.drawing", 3),
        ("certify", "degree3.drawing", 1),
        ("certify", "c4.drawing", 0),
        ("check", "separating.drawing", 3),
        ("check", "redundant.drawing", 1),
        ("check", "degree3.drawing", 1),
        ("check", "c4.drawing", 0),
    ],
)
def test_exit_status(monkeypatch: pytest.MonkeyPatch, command: str, name: str, status: int) -> None:
    run(monkeypatch, command, f"corpus/{name}", status=status)


def test_check_output(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    run(monkeypatch, "check", "corpus/redundant.drawing", status=1)
    out = capsys.readouterr().out
    assert out.startswith("PASS proposition-1\n")
    assert "FAIL proposition-3 w=8,9,10 multiplicity=3\n" in out


@pytest.mark.parametrize(
    ("argv", "output", "status"),
    [
        (["1planar", "K3,3"], "YES crossings=1\n", 0),
        (["1planar", "K3,7"], "NO\n", 1),
        (["mincross", "K2,3"], "crossings=0\n", 0),
        (["mincross", "K3,7"], "NOT-1-PLANAR\n", 1),
        (
            ["1planar", "K3,6", "--max-crossings", "1"],
            "UNKNOWN nodes=0\nbudget exhausted above 1 crossings\n",
            4,
        ),
        (["extremal", "2", "3"], "max_edges=6 exhausted=true\n", 0),
    ],
)
def test_search(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
    argv: list[str],
    output: str,
    status: int,
) -> None:
    run(monkeypatch, "search", *argv, status=status)
    assert capsys.readouterr().out == output


def test_search_invalid(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    run(monkeypatch, "search", "1planar", "K3,3", "--jobs", "0", status=2)
    assert capsys.readouterr().err == "error: jobs must be positive\n"
    run(monkeypatch, "search", "disc", "K0,2", status=2)
    assert capsys.readouterr().err == "error: Invalid complete bipartite graph 'K0,2'\n"


def test_search_probe5(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    run(monkeypatch, "search", "probe5", "2", "2", "--samples", "3", "--seed", "4", status=0)
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4
    assert lines[-1].startswith("samples=3 feasible=")


def test_bounds(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    run(monkeypatch, "bounds", "--parts", "3", "7", status=0)
    assert capsys.readouterr().out == "karpov=22\nczap=22\nmain=20\nremoval=1\n"
    run(monkeypatch, "bounds", "--n", "8", status=0)
    assert capsys.readouterr().out == "karpov=16\n"
    run(monkeypatch, "bounds", "--n", "3", status=2)
    run(monkeypatch, "bounds", status=2)


def test_export(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
    tmp_path: Path,
) -> None:
    run(monkeypatch, "export", "corpus/c4.drawing", status=0)
    assert capsys.readouterr().out.startswith('graph "planarization" {\n')
    svg = tmp_path / "k36.svg"
    argv = ["export", "corpus/k36.drawing", "--bundle", "--format", "svg", "-o", str(svg)]
    run(monkeypatch, *argv, status=0)
    assert svg.read_text().startswith("<svg ")


def test_cache(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
    tmp_path: Path,
) -> None:
    file = tmp_path / "results.jsonl"
    run(monkeypatch, "cache", status=2)
    assert capsys.readouterr().err == "error: No cache file configured\n"
    run(monkeypatch, "--cache", str(file), "search", "mincross", "K3,3", status=0)
    assert capsys.readouterr().out == "crossings=1\n"
    run(monkeypatch, "--cache", str(file), "-q", "search", "mincross", "K3,3", status=0)
    assert capsys.readouterr().out == "crossings=1\n"
    run(monkeypatch, "--cache", str(file), "cache", status=0)
    out = capsys.readouterr().out
    assert out == "mincross bip:3:3:7.7.7 crossings=1 witness=mincross-0.drawing\n"


def test_run_as_module(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    monkeypatch.setattr(sys, "argv", ["onepw", "bounds", "--n", "6"])
    with pytest.raises(SystemExit, match="^0$"):
        runpy.run_module("onepw", run_name="__main__")
    assert capsys.readouterr().out == "karpov=9\n"


def test_search_witness(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
    tmp_path: Path,
) -> None:
    witness = tmp_path / "k33.drawing"
    run(monkeypatch, "search", "mincross", "K3,3", status=0)
    assert capsys.readouterr().out == "crossings=1\n"
    assert not witness.exists()
    run(monkeypatch, "search", "mincross", "K3,3", "-o", str(witness), status=0)
    assert capsys.readouterr().out == f"crossings=1\nwitness={witness}\n"
    run(monkeypatch, "validate", str(witness), status=0)
    assert capsys.readouterr().out == "VALID vertices=6 edges=9 crossings=1\n"
