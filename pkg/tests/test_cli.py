"""goldvortex CLI tests."""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from goldvortex._cli import main
from goldvortex._version import __version__

from .helpers import REPO_ROOT


def test_version(capsys: pytest.CaptureFixture) -> None:
    assert main(["version"]) == 0
    out = capsys.readouterr().out
    assert __version__ in out
    assert "numpy" in out


def test_cross_ratio(capsys: pytest.CaptureFixture) -> None:
    assert main(["cross-ratio", "2", "0", "1", "-1"]) == 0
    assert "CR = -0.75" in capsys.readouterr().out
    assert main(["cross-ratio", "1", "1", "2", "3"]) == 1
    assert "undefined" in capsys.readouterr().err


def test_bifurcate_algebraic(capsys: pytest.CaptureFixture) -> None:
    assert main(["bifurcate", "--lambda", "-1", "--lambda", "1"]) == 0
    out = capsys.readouterr().out
    assert "W* = 1.61803398874989" in out
    assert "W* = 0.61803398874989" in out
    assert out.count("cross-ratio at stop = 1.61803398874") == 2


def test_bifurcate_errors(capsys: pytest.CaptureFixture) -> None:
    assert main(["bifurcate", "--lambda", "0"]) == 1
    assert "nonzero" in capsys.readouterr().err
    assert main(["bifurcate", "--lambda", "0.5", "--method", "simulation"]) == 1
    assert "No default bracket" in capsys.readouterr().err
    args = ["bifurcate", "--lambda", "-1", "--method", "simulate", "--bracket", "0.3,0.5"]
    assert main(args) == 1
    assert "does not change sign" in capsys.readouterr().err
    assert main([*args[:-1], "0.3"]) == 1
    assert "two numbers" in capsys.readouterr().err


def test_bad_arguments(capsys: pytest.CaptureFixture) -> None:
    assert main(["simulate", "--method", "Euler"]) == 1
    assert "invalid choice" in capsys.readouterr().err
    assert main(["verify", "--suite", "everything"]) == 1
    assert main(["bifurcate"]) == 1


def test_simulate_and_replay(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    csv = tmp_path / "traj.csv"
    manifest = tmp_path / "run.json"
    svg = tmp_path / "traj.svg"
    args = [
        "simulate",
        "--domain",
        "half-plane",
        "--gamma=1,-1",
        "--pos=-2:0.140575959298,2:1.140575959298",
        "--t-end",
        "30",
        "--out",
        str(csv),
        "--manifest",
        str(manifest),
        "--plot",
        str(svg),
    ]
    assert main(args) == 0
    out = capsys.readouterr().out
    assert "✅ Completed" in out
    assert "max |ΔW|" in out
    assert csv.read_text().startswith("t,x1,y1,x2,y2,H,P,W\n")
    assert 'id="vortex-1"' in svg.read_text()
    data = json.loads(manifest.read_text())
    assert data["command"].startswith("goldvortex simulate --domain half-plane")
    assert data["system"] == {"strengths": [1.0, -1.0], "domain": "half-plane"}
    assert data["config"]["t_end"] == 30.0
    assert any(e["kind"] == "vertical-alignment" for e in data["events"])

    replay_csv = tmp_path / "replay.csv"
    assert main(["simulate", "--config", str(manifest), "--out", str(replay_csv)]) == 0
    assert replay_csv.read_text() == csv.read_text()

    redraw = tmp_path / "redraw.svg"
    assert main(["plot", str(csv), "--manifest", str(manifest), "--out", str(redraw)]) == 0
    assert 'id="events-vertical-alignment"' in redraw.read_text()


def test_simulate_config_overrides(tmp_path: Path) -> None:
    csv = tmp_path / "grobli.csv"
    config = REPO_ROOT / "example" / "grobli.json"
    args = ["simulate", "--config", str(config), "--t-end", "0.1", "--out", str(csv)]
    assert main(args) == 0
    last = csv.read_text().splitlines()[-1]
    assert float(last.split(",")[0]) == 0.1


def test_simulate_requires_completion(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    args = [
        "simulate",
        "--domain",
        "half-plane",
        "--gamma=-1,1",
        "--pos=-0.5:1,0.5:1",
        "--t-end",
        "50",
        "--collision-guard",
        "0.5",
        "--out",
        str(tmp_path / "wall.csv"),
    ]
    with pytest.warns(UserWarning, match="Run stopped"):
        assert main(args) == 0
    assert "near-collision" in capsys.readouterr().out
    with pytest.warns(UserWarning, match="Run stopped"):
        assert main([*args, "--require-completion"]) == 2


def test_simulate_usage_errors(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    out = str(tmp_path / "x.csv")
    assert main(["simulate", "--gamma", "1", "--out", out]) == 1
    assert "--config" in capsys.readouterr().err
    assert main(["simulate", "--gamma", "1,1", "--pos", "0:1", "--out", out]) == 1
    assert "2 strengths but 1 positions" in capsys.readouterr().err
    assert main(["simulate", "--gamma", "1,0", "--pos", "0:1,1:1", "--out", out]) == 1
    assert "nonzero" in capsys.readouterr().err
    args = ["simulate", "--domain", "half-plane", "--gamma", "1", "--pos", "0:-1"]
    assert main([*args, "--out", out]) == 1
    assert "upper half-plane" in capsys.readouterr().err
    assert main(["simulate", "--gamma", "1", "--pos", "0:1", "--rel-tol", "0", "--out", out]) == 1
    assert "rel_tol" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"system": {"strengths": [1], "colour": "red"}}))
    assert main(["simulate", "--config", str(bad), "--out", out]) == 1
    assert "system.colour" in capsys.readouterr().err


def test_sweep(capsys: pytest.CaptureFixture) -> None:
    assert main(["sweep", "--lambda", "-1", "--w-grid", "1.3,2.5"]) == 0
    out = capsys.readouterr().out
    assert "kink-or-leapfrog" in out
    assert "smooth-pass" in out
    assert main(["sweep", "--lambda", "0.5", "--w-grid", "1,2"]) == 1


def test_verify_oracle(capsys: pytest.CaptureFixture) -> None:
    assert main(["verify", "--suite", "oracle"]) == 0
    out = capsys.readouterr().out
    assert "✅ velocity-oracle[1000 states]" in out
    assert "1/1 checks passed" in out


def test_module_entry_point() -> None:
    result = subprocess.run(
        [sys.executable, "-m", "goldvortex._cli", "cross-ratio", "0.236", "1", "-1", "-0.236"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert result.stdout.startswith("CR = 1.61")
