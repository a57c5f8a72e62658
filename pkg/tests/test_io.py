"""Tests for configuration files, trajectory CSVs and run manifests."""

from __future__ import annotations

import json
import math
import textwrap
from pathlib import Path

import numpy as np
import pytest

from goldvortex._integrate import IntegratorConfig, integrate
from goldvortex._io import (
    HAS_TOML,
    ConfigSchemaError,
    RunInputs,
    RunManifest,
    csv_header,
    read_config,
    read_trajectory_csv,
    write_manifest_json,
    write_trajectory_csv,
)
from goldvortex._version import __version__
from goldvortex.definitions import VortexState, VortexSystem
from goldvortex.utils import UsageError

from .helpers import REPO_ROOT, make


@pytest.fixture
def rotating_pair() -> RunInputs:
    system, state = make([1, 1], [(-0.5, 0), (0.5, 0)])
    return RunInputs(system, state, IntegratorConfig(t_end=6.0, output_interval=0.1))


def _run(inputs: RunInputs):  # noqa: ANN202
    return integrate(inputs.system, inputs.initial, inputs.config)


def test_csv_header() -> None:
    system = VortexSystem.create([1, -1], "half-plane")
    assert csv_header(system, ["H", "P", "W"]) == ["t", "x1", "y1", "x2", "y2", "H", "P", "W"]


def test_trajectory_csv(tmp_path: Path, rotating_pair: RunInputs) -> None:
    traj = _run(rotating_pair)
    path = tmp_path / "traj.csv"
    write_trajectory_csv(traj, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,x1,y1,x2,y2,H,P,Q,I"
    event_lines = [line for line in lines if line.startswith("# event,")]
    assert len(event_lines) == len(traj.events) == 1
    assert event_lines[0].startswith("# event,vertical-alignment,")
    assert event_lines[0].endswith(",1,2")

    again = read_trajectory_csv(path, rotating_pair.system, rotating_pair.config)
    assert np.array_equal(again.times, traj.times)
    assert np.array_equal(again.positions, traj.positions)
    assert again.invariant_drift == traj.invariant_drift
    assert [e.kind for e in again.events] == [e.kind for e in traj.events]
    assert again.events[0].time == traj.events[0].time
    assert again.events[0].vortex_indices == (0, 1)


def test_read_trajectory_csv_rejects_other_systems(
    tmp_path: Path,
    rotating_pair: RunInputs,
) -> None:
    path = tmp_path / "traj.csv"
    write_trajectory_csv(_run(rotating_pair), path)
    three = VortexSystem.create([1, 1, 1])
    with pytest.raises(UsageError, match="do not fit 3 vortices"):
        read_trajectory_csv(path, three)
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(UsageError, match="empty"):
        read_trajectory_csv(empty, rotating_pair.system)
    with pytest.raises(OSError, match="Cannot read"):
        read_trajectory_csv(tmp_path / "missing.csv", rotating_pair.system)


def test_manifest_replays(tmp_path: Path, rotating_pair: RunInputs) -> None:
    traj = _run(rotating_pair)
    manifest = RunManifest.from_trajectory(traj, rotating_pair, "goldvortex simulate", 0.5)
    path = tmp_path / "run.json"
    write_manifest_json(manifest, path)
    data = json.loads(path.read_text())
    assert data["tool_version"] == __version__
    assert data["system"] == {"strengths": [1.0, 1.0], "domain": "plane"}
    assert data["config"]["max_step"] is None
    assert data["terminated_by"] == "time-end"
    assert data["events"][0]["vortices"] == [1, 2]
    assert "watch_pairs" not in data

    inputs = read_config(path)
    assert inputs.system == rotating_pair.system
    assert np.array_equal(inputs.initial.positions, rotating_pair.initial.positions)
    assert inputs.config == rotating_pair.config
    assert math.isinf(inputs.config.max_step)
    assert inputs.watch_pairs is None
    replay = _run(inputs)
    assert np.array_equal(replay.positions, traj.positions)


def test_manifest_watch_pairs_are_one_based(tmp_path: Path) -> None:
    system, state = make([1, 1, 1], [(0, 0), (1, 0), (0, 1)])
    inputs = RunInputs(system, state, IntegratorConfig(t_end=1), [(0, 2)])
    traj = integrate(system, state, inputs.config, watch_pairs=inputs.watch_pairs)
    data = RunManifest.from_trajectory(traj, inputs, "test", 0.0).to_dict()
    assert data["watch_pairs"] == [[1, 3]]
    path = tmp_path / "run.json"
    path.write_text(json.dumps(data))
    assert read_config(path).watch_pairs == [(0, 2)]


def test_old_manifest_warns(tmp_path: Path) -> None:
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps(
            {
                "tool_version": "0.0.1",
                "system": {"strengths": [1]},
                "initial": {"positions": [[0, 1]]},
            },
        ),
    )
    with pytest.warns(UserWarning, match="written by goldvortex 0.0.1"):
        inputs = read_config(path)
    assert inputs.system.domain == "plane"
    assert inputs.config == IntegratorConfig()


def test_read_yaml_config(tmp_path: Path) -> None:
    path = tmp_path / "dipole.yaml"
    path.write_text(
        textwrap.dedent(
            """\
            system:
              strengths: [1, -1]
              domain: half-plane
            initial:
              positions:
                - [0, 0.236]
                - [0, 1]
            config:
              t_end: 20
              rel_tol: 1.0e-11
              method: RK45
            """,
        ),
    )
    inputs = read_config(path)
    assert inputs.system == VortexSystem((1.0, -1.0), "half-plane")
    assert inputs.initial.as_pairs() == [[0.0, 0.236], [0.0, 1.0]]
    assert inputs.config.t_end == 20.0
    assert inputs.config.rel_tol == 1e-11
    assert inputs.config.method == "RK45"


@pytest.mark.skipif(not HAS_TOML, reason="needs tomllib or tomli")
def test_read_toml_config(tmp_path: Path) -> None:
    path = tmp_path / "run.toml"
    path.write_text(
        textwrap.dedent(
            """\
            [system]
            strengths = [3, -2, 6]

            [initial]
            positions = [[0, 0], [1, 0], [-3.5, 2.1]]

            [config]
            t_end = 2.5
            """,
        ),
    )
    inputs = read_config(path)
    assert inputs.system.strengths == (3.0, -2.0, 6.0)
    assert inputs.initial.n == 3
    assert inputs.config.t_end == 2.5


@pytest.mark.parametrize(
    ("data", "field"),
    [
        ({"colour": 1}, "colour"),
        ({"system": [1, -1]}, "system"),
        ({"system": {}}, "system.strengths"),
        ({"system": {"strengths": []}}, "system.strengths"),
        ({"system": {"strengths": [1, True]}}, "system.strengths[1]"),
        ({"system": {"strengths": [1], "domain": "sphere"}}, "system.domain"),
        ({"system": {"strengths": [1], "shape": 1}}, "system.shape"),
        ({"system": {"strengths": [1]}}, "initial"),
        ({"system": {"strengths": [1]}, "initial": {}}, "initial.positions"),
        ({"system": {"strengths": [1, 1]}, "initial": {"positions": [[0, 0]]}}, "initial.positions"),
        ({"system": {"strengths": [1]}, "initial": {"positions": [[0, "a"]]}}, "initial.positions[0]"),
        ({"system": {"strengths": [1]}, "initial": {"positions": [[0, 0, 0]]}}, "initial.positions[0]"),
    ],
)
def test_schema_errors(tmp_path: Path, data: dict, field: str) -> None:
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ConfigSchemaError) as excinfo:
        read_config(path)
    assert excinfo.value.field == field


@pytest.mark.parametrize(
    ("extra", "field"),
    [
        ({"config": {"tolerance": 1e-3}}, "config.tolerance"),
        ({"config": {"t_end": "long"}}, "config.t_end"),
        ({"watch_pairs": [[1, 1]]}, "watch_pairs[0]"),
        ({"watch_pairs": [[1, 3]]}, "watch_pairs[0]"),
        ({"watch_pairs": {"a": 1}}, "watch_pairs"),
        ({"tool_version": "not a version"}, "tool_version"),
    ],
)
def test_schema_errors_outside_the_system(tmp_path: Path, extra: dict, field: str) -> None:
    data = {
        "system": {"strengths": [1, -1], "domain": "half-plane"},
        "initial": {"positions": [[0, 0.5], [0, 1]]},
        **extra,
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ConfigSchemaError, match=field.replace("[", r"\[")):
        read_config(path)


def test_missing_config() -> None:
    with pytest.raises(UsageError, match="not found"):
        read_config("does-not-exist.json")


@pytest.mark.parametrize("name", ["dipole_cusp.yaml", "grobli.json", "pair_leapfrog.toml"])
def test_example_configs(name: str) -> None:
    path = REPO_ROOT / "example" / name
    if path.suffix == ".toml" and not HAS_TOML:
        pytest.skip("needs tomllib or tomli")
    inputs = read_config(path)
    inputs.config.validate()
    assert isinstance(inputs.initial, VortexState)
    assert inputs.initial.n == inputs.system.n


def test_read_trajectory_csv_checks_rows(tmp_path: Path, rotating_pair: RunInputs) -> None:
    header = "t,x1,y1,x2,y2,H,P,Q,I\n"
    path = tmp_path / "short.csv"
    path.write_text(header + "0,1,2\n")
    with pytest.raises(UsageError, match="rows of 3 values for 9 columns"):
        read_trajectory_csv(path, rotating_pair.system)
    path.write_text(header)
    traj = read_trajectory_csv(path, rotating_pair.system)
    assert traj.n_samples == 0
    assert traj.events == ()
