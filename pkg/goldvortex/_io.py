"""goldvortex - Golden-ratio bifurcations of point vortices.

Reading run configurations and writing trajectories and run manifests.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path
from typing import Any, NamedTuple

import numpy as np
from packaging import version
from ruamel.yaml import YAML

from goldvortex._integrate import (
    Event,
    IntegratorConfig,
    Trajectory,
    trajectory_from_samples,
)
from goldvortex._version import __version__
from goldvortex.definitions import (
    VALID_DOMAINS,
    EventKind,
    Termination,
    VortexState,
    VortexSystem,
)
from goldvortex.utils import UsageError, warn

try:  # pragma: no cover
    if sys.version_info >= (3, 11):
        import tomllib
    else:
        import tomli as tomllib
    HAS_TOML = True
except ImportError:  # pragma: no cover
    HAS_TOML = False

_INPUT_KEYS = ("system", "initial", "config", "watch_pairs")
_MANIFEST_KEYS = (
    "tool_version",
    "command",
    "invariant_drift",
    "events",
    "terminated_by",
    "wall_time",
)


class ConfigSchemaError(ValueError):
    """Raised when a configuration file does not follow the schema."""

    def __init__(self, field: str, problem: str) -> None:
        super().__init__(f"`{field}`: {problem}")
        self.field = field


class RunInputs(NamedTuple):
    """Everything needed to start a simulation."""

    system: VortexSystem
    initial: VortexState
    config: IntegratorConfig
    # 0-based vortex index pairs, `None` for the default
    watch_pairs: list[tuple[int, int]] | None = None


class RunManifest(NamedTuple):
    """Inputs and summary of a finished simulation."""

    tool_version: str
    command: str
    inputs: RunInputs
    invariant_drift: dict[str, float]
    events: tuple[Event, ...]
    terminated_by: Termination
    wall_time: float

    @classmethod
    def from_trajectory(
        cls,
        traj: Trajectory,
        inputs: RunInputs,
        command: str,
        wall_time: float,
    ) -> RunManifest:
        """Summarize a finished run."""
        return cls(
            __version__,
            command,
            inputs,
            traj.invariant_drift,
            traj.events,
            traj.terminated_by,
            wall_time,
        )

    def to_dict(self) -> dict[str, Any]:
        """Plain data, with 1-based vortex numbers and ``null`` for infinity."""
        inputs = self.inputs
        config = {
            name: (None if isinstance(v, float) and math.isinf(v) else v)
            for name, v in inputs.config._asdict().items()
        }
        data: dict[str, Any] = {
            "tool_version": self.tool_version,
            "command": self.command,
            "system": {
                "strengths": list(inputs.system.strengths),
                "domain": inputs.system.domain,
            },
            "initial": {"positions": inputs.initial.as_pairs()},
            "config": config,
        }
        if inputs.watch_pairs is not None:
            data["watch_pairs"] = [[i + 1, j + 1] for i, j in inputs.watch_pairs]
        data["invariant_drift"] = dict(self.invariant_drift)
        data["events"] = [
            {
                "kind": e.kind,
                "time": e.time,
                "vortices": [e.vortex_indices[0] + 1, e.vortex_indices[1] + 1],
                "positions": e.state.as_pairs(),
                "diagnostics": dict(e.diagnostics),
            }
            for e in self.events
        ]
        data["terminated_by"] = self.terminated_by
        data["wall_time"] = self.wall_time
        return data


def csv_header(system: VortexSystem, invariant_keys: list[str]) -> list[str]:
    """Column names ``t, x1, y1, ..., xN, yN`` followed by the invariants."""
    coordinates = [f"{c}{j + 1}" for j in range(system.n) for c in "xy"]
    return ["t", *coordinates, *invariant_keys]


def write_trajectory_csv(traj: Trajectory, path: str | Path) -> None:
    """Write samples with 17 significant digits and events as trailing comments."""
    path = Path(path)
    series = traj.invariant_series()
    header = csv_header(traj.system, list(series))
    data = np.column_stack(
        [
            traj.times,
            traj.positions.reshape(traj.n_samples, -1),
            *series.values(),
        ],
    )
    try:
        with path.open("w", newline="\n") as f:
            np.savetxt(
                f,
                data,
                fmt="%.17g",
                delimiter=",",
                header=",".join(header),
                comments="",
            )
            for e in traj.events:
                i, j = e.vortex_indices
                f.write(f"# event,{e.kind},{e.time:.17g},{i + 1},{j + 1}\n")
    except OSError as e:
        msg = f"Cannot write trajectory to `{path}`: {e}"
        raise OSError(msg) from e


def read_trajectory_csv(
    path: str | Path,
    system: VortexSystem,
    config: IntegratorConfig | None = None,
    terminated_by: Termination = "time-end",
) -> Trajectory:
    """Read a CSV written by `write_trajectory_csv` back into a `Trajectory`.

    Event states are taken from the nearest sample and carry no diagnostics.
    """
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as e:
        msg = f"Cannot read trajectory from `{path}`: {e}"
        raise OSError(msg) from e
    if not lines:
        msg = f"`{path}` is empty"
        raise UsageError(msg)
    header = lines[0].split(",")
    columns = 1 + 2 * system.n
    if header[:columns] != csv_header(system, [])[:columns]:
        msg = f"`{path}` has columns {header}, which do not fit {system.n} vortices"
        raise UsageError(msg)
    if any(line and not line.startswith("#") for line in lines[1:]):
        data = np.loadtxt(path, delimiter=",", skiprows=1, comments="#", ndmin=2)
    else:
        data = np.empty((0, len(header)))
    if data.shape[1] != len(header):
        msg = f"`{path}` has rows of {data.shape[1]} values for {len(header)} columns"
        raise UsageError(msg)
    times = data[:, 0]
    positions = data[:, 1:columns].reshape(len(times), system.n, 2)
    events = []
    for line in lines[1:]:
        if not line.startswith("# event,"):
            continue
        _, kind, t, i, j = line.split(",")
        k = int(np.argmin(np.abs(times - float(t))))
        kind_: EventKind = kind  # type: ignore[assignment]
        events.append(
            Event(
                kind_,
                float(t),
                VortexState.from_positions(positions[k]),
                (int(i) - 1, int(j) - 1),
                {},
            ),
        )
    return trajectory_from_samples(
        system,
        config or IntegratorConfig(),
        times.tolist(),
        list(positions),
        events,
        terminated_by,
    )


def write_manifest_json(manifest: RunManifest, path: str | Path) -> None:
    """Write the manifest as one JSON document."""
    path = Path(path)
    try:
        with path.open("w") as f:
            json.dump(manifest.to_dict(), f, indent=2)
            f.write("\n")
    except OSError as e:
        msg = f"Cannot write manifest to `{path}`: {e}"
        raise OSError(msg) from e


def _load(path: Path) -> Any:
    suffix = path.suffix.lower()
    if suffix == ".toml":
        if not HAS_TOML:  # pragma: no cover
            msg = "toml is required to read `.toml` run configurations."
            raise ImportError(msg)
        with path.open("rb") as f:
            return tomllib.load(f)
    if suffix == ".json":
        with path.open() as f:
            return json.load(f)
    with path.open() as f:
        return YAML(typ="safe").load(f)


def _require_mapping(value: Any, field: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigSchemaError(field, f"expected a mapping, got {value!r}")
    return value


def _reject_unknown(
    data: dict[str, Any],
    allowed: tuple[str, ...],
    prefix: str,
) -> None:
    for key in data:
        if key not in allowed:
            field = f"{prefix}.{key}" if prefix else key
            msg = f"unknown field, allowed are {list(allowed)}"
            raise ConfigSchemaError(field, msg)


def _number(value: Any, field: str) -> float:
    if isinstance(value, bool):
        raise ConfigSchemaError(field, f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            pass
    raise ConfigSchemaError(field, f"expected a number, got {value!r}")


def _parse_system(data: dict[str, Any]) -> VortexSystem:
    system = _require_mapping(data.get("system"), "system")
    _reject_unknown(system, ("strengths", "domain"), "system")
    if "strengths" not in system:
        raise ConfigSchemaError("system.strengths", "missing required field")
    strengths = system["strengths"]
    if not isinstance(strengths, list) or not strengths:
        msg = f"expected a non-empty list, got {strengths!r}"
        raise ConfigSchemaError("system.strengths", msg)
    domain = system.get("domain", "plane")
    if domain not in VALID_DOMAINS:
        msg = f"expected one of {list(VALID_DOMAINS)}, got {domain!r}"
        raise ConfigSchemaError("system.domain", msg)
    return VortexSystem.create(
        [_number(g, f"system.strengths[{k}]") for k, g in enumerate(strengths)],
        domain,
    )


def _parse_initial(data: dict[str, Any], system: VortexSystem) -> VortexState:
    initial = _require_mapping(data.get("initial"), "initial")
    _reject_unknown(initial, ("positions",), "initial")
    if "positions" not in initial:
        raise ConfigSchemaError("initial.positions", "missing required field")
    positions = initial["positions"]
    if not isinstance(positions, list) or len(positions) != system.n:
        raise ConfigSchemaError(
            "initial.positions",
            f"expected a list of {system.n} [x, y] pairs, got {positions!r}",
        )
    pairs = []
    for k, pair in enumerate(positions):
        field = f"initial.positions[{k}]"
        if not isinstance(pair, list) or len(pair) != 2:  # noqa: PLR2004
            raise ConfigSchemaError(field, f"expected an [x, y] pair, got {pair!r}")
        pairs.append((_number(pair[0], field), _number(pair[1], field)))
    return VortexState.from_positions(pairs)


def _parse_config(data: dict[str, Any]) -> IntegratorConfig:
    config = _require_mapping(data.get("config", {}), "config")
    _reject_unknown(config, IntegratorConfig._fields, "config")
    values: dict[str, Any] = {}
    for key, value in config.items():
        field = f"config.{key}"
        if key == "method":
            values[key] = value
        elif key == "max_step" and value is None:
            values[key] = math.inf
        else:
            values[key] = _number(value, field)
    return IntegratorConfig(**values)


def _parse_watch_pairs(
    data: dict[str, Any],
    system: VortexSystem,
) -> list[tuple[int, int]] | None:
    if "watch_pairs" not in data:
        return None
    pairs = data["watch_pairs"]
    if not isinstance(pairs, list):
        msg = f"expected a list of pairs, got {pairs!r}"
        raise ConfigSchemaError("watch_pairs", msg)
    result = []
    for k, pair in enumerate(pairs):
        field = f"watch_pairs[{k}]"
        if (
            not isinstance(pair, list)
            or len(pair) != 2  # noqa: PLR2004
            or not all(isinstance(v, int) and 1 <= v <= system.n for v in pair)
            or pair[0] == pair[1]
        ):
            msg = f"expected two distinct vortex numbers, got {pair!r}"
            raise ConfigSchemaError(field, msg)
        result.append((pair[0] - 1, pair[1] - 1))
    return result


def _check_tool_version(data: dict[str, Any]) -> None:
    if "tool_version" not in data:
        return
    try:
        written = version.parse(str(data["tool_version"]))
    except version.InvalidVersion:
        msg = f"invalid version {data['tool_version']!r}"
        raise ConfigSchemaError("tool_version", msg) from None
    if written != version.parse(__version__):
        warn(
            f"The manifest was written by goldvortex {written}, this is {__version__};"
            " the replayed trajectory may differ.",
            stacklevel=3,
        )


def read_config(path: str | Path) -> RunInputs:
    """Read run inputs from a JSON, YAML or TOML file (or a run manifest).

    Unknown fields are rejected with a `ConfigSchemaError` naming their path.
    """
    path = Path(path)
    if not path.exists():
        msg = f"Configuration file `{path}` not found"
        raise UsageError(msg)
    data = _require_mapping(_load(path), "<root>")
    _reject_unknown(data, _INPUT_KEYS + _MANIFEST_KEYS, "")
    _check_tool_version(data)
    system = _parse_system(data)
    initial = _parse_initial(data, system)
    return RunInputs(
        system,
        initial,
        _parse_config(data),
        _parse_watch_pairs(data, system),
    )
