"""goldvortex - Golden-ratio bifurcations of point vortices.

Time integration of the vortex equations with error control, invariant-drift
monitoring and event detection.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Iterable, Literal, NamedTuple, get_args

import numpy as np
from scipy.integrate import DOP853, RK45, solve_ivp
from scipy.optimize import bisect

from goldvortex._core import invariant_arrays, validate_state, velocity_kernel
from goldvortex.definitions import (
    EventKind,
    Termination,
    VortexState,
    VortexSystem,
)
from goldvortex.utils import UsageError, warn

LOGGER = logging.getLogger(__name__)

StepperMethod = Literal["DOP853", "RK45"]
_STEPPERS = {"DOP853": DOP853, "RK45": RK45}


class InvalidConfigError(ValueError):
    """Raised when an `IntegratorConfig` field is out of range."""


class SimulationError(RuntimeError):
    """Raised when a simulation cannot deliver what the caller needs."""

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class IntegratorConfig(NamedTuple):
    """Tolerances, run length and guards of a simulation."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    t_end: float = 100.0
    output_interval: float = 0.01
    # Minimum pairwise distance and, in the half-plane, distance to the wall
    collision_guard: float = 1e-6
    event_refine_tol: float = 1e-10
    # |ẋ| below which an alignment is also reported as an instantaneous stop
    stop_threshold: float = 1e-6
    method: StepperMethod = "DOP853"

    def validate(self) -> None:
        """Raise `InvalidConfigError` if a field is out of range."""
        for name in (
            "rel_tol",
            "abs_tol",
            "max_step",
            "t_end",
            "output_interval",
            "collision_guard",
            "event_refine_tol",
            "stop_threshold",
        ):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0):
                msg = f"`{name}` must be a positive number, got {value!r}"
                raise InvalidConfigError(msg)
            if name != "max_step" and not math.isfinite(value):
                msg = f"`{name}` must be finite, got {value!r}"
                raise InvalidConfigError(msg)
        if self.method not in get_args(StepperMethod):
            methods = get_args(StepperMethod)
            msg = f"Invalid method `{self.method}`, use one of {methods}"
            raise InvalidConfigError(msg)


class Event(NamedTuple):
    """Something that happened during a run, at a refined time."""

    kind: EventKind
    time: float
    state: VortexState
    vortex_indices: tuple[int, int]
    diagnostics: dict[str, float]


class Trajectory(NamedTuple):
    """Time-ordered samples of a run, its events and its invariant drift."""

    system: VortexSystem
    config: IntegratorConfig
    times: np.ndarray
    positions: np.ndarray
    events: tuple[Event, ...]
    invariant_drift: dict[str, float]
    terminated_by: Termination

    @property
    def n_samples(self) -> int:
        """Number of samples."""
        return self.times.shape[0]

    @property
    def states(self) -> list[VortexState]:
        """All samples as `VortexState`s."""
        return [VortexState.from_positions(p) for p in self.positions]

    def state(self, i: int) -> VortexState:
        """The ``i``-th sample."""
        return VortexState.from_positions(self.positions[i])

    @property
    def final_state(self) -> VortexState:
        """The last sample."""
        return self.state(-1)

    def invariant_series(self) -> dict[str, np.ndarray]:
        """Invariant values at every sample."""
        return invariant_arrays(self.system, self.positions)

    def velocity_series(self) -> np.ndarray:
        """Velocities at every sample, shape ``(M, N, 2)``."""
        return velocity_kernel(
            self.system.gammas,
            self.positions,
            half_plane=self.system.half_plane,
        )

    def events_of(self, kind: EventKind) -> list[Event]:
        """Events of a single kind, in time order."""
        return [e for e in self.events if e.kind == kind]


def _rhs(system: VortexSystem):  # noqa: ANN202
    gammas = system.gammas
    half_plane = system.half_plane
    n = system.n

    def fun(_t: float, y: np.ndarray) -> np.ndarray:
        return velocity_kernel(gammas, y.reshape(n, 2), half_plane=half_plane).ravel()

    return fun


def _clearance(
    system: VortexSystem,
    positions: np.ndarray,
) -> tuple[float, tuple[int, int]]:
    """Smallest pairwise or wall distance of ``positions`` and who is involved."""
    best, pair = math.inf, (0, 0)
    n = system.n
    if n > 1:
        diff = positions[:, None, :] - positions[None, :, :]
        dist = np.sqrt(np.sum(diff**2, axis=-1))
        ju, ku = np.triu_indices(n, 1)
        k = int(np.argmin(dist[ju, ku]))
        best, pair = float(dist[ju[k], ku[k]]), (int(ju[k]), int(ku[k]))
    if system.half_plane:
        j = int(np.argmin(positions[:, 1]))
        if positions[j, 1] < best:
            best, pair = float(positions[j, 1]), (j, j)
    return best, pair


def _sample_times(t_end: float, dt: float) -> np.ndarray:
    count = int(math.floor(t_end / dt + 1e-9))
    times = np.arange(count + 1) * dt
    times = times[times < t_end * (1 - 1e-12)]
    return np.append(times, t_end)


def _default_watch_pairs(system: VortexSystem) -> list[tuple[int, int]]:
    return [(0, 1)] if system.n == 2 else []  # noqa: PLR2004


def _alignment_diagnostics(
    system: VortexSystem,
    positions: np.ndarray,
    i: int,
    j: int,
) -> dict[str, float]:
    vel = velocity_kernel(system.gammas, positions, half_plane=system.half_plane)
    return {
        "xdot_i": float(vel[i, 0]),
        "xdot_j": float(vel[j, 0]),
        "ydot_i": float(vel[i, 1]),
        "ydot_j": float(vel[j, 1]),
        "y_i": float(positions[i, 1]),
        "y_j": float(positions[j, 1]),
    }


class _Refiner:
    """Locates a root of ``x_i - x_j`` inside one accepted step."""

    def __init__(
        self,
        system: VortexSystem,
        cfg: IntegratorConfig,
        t_old: float,
        y_old: np.ndarray,
    ) -> None:
        self.fun = _rhs(system)
        self.cfg = cfg
        self.t_old = t_old
        self.y_old = y_old
        self.n = system.n

    def state_at(self, t: float) -> np.ndarray:
        if t == self.t_old:
            return self.y_old.copy()
        sol = solve_ivp(
            self.fun,
            (self.t_old, t),
            self.y_old,
            method=self.cfg.method,
            rtol=self.cfg.rel_tol,
            atol=self.cfg.abs_tol,
        )
        return sol.y[:, -1]

    def locate(
        self,
        i: int,
        j: int,
        t_a: float,
        t_b: float,
        dense: Any,
        rel_speed: float,
    ) -> tuple[float, np.ndarray] | None:
        def gap(t: float) -> float:
            y = self.state_at(t)
            return float(y[2 * i] - y[2 * j])

        xtol = self.cfg.event_refine_tol / max(1.0, abs(rel_speed))
        try:
            t_event = bisect(gap, t_a, t_b, xtol=xtol)
        except ValueError:
            # the sub-integrated endpoints disagree with the dense output in sign
            def dense_gap(t: float) -> float:
                y = dense(t)
                return float(y[2 * i] - y[2 * j])

            try:
                t_event = bisect(dense_gap, t_a, t_b, xtol=xtol)
            except ValueError:
                LOGGER.debug(
                    "Dropped alignment of %d and %d in [%.12g, %.12g]: no sign change",
                    i,
                    j,
                    t_a,
                    t_b,
                )
                return None
        return float(t_event), self.state_at(t_event).reshape(self.n, 2)


def _alignment_events(
    system: VortexSystem,
    cfg: IntegratorConfig,
    watch_pairs: list[tuple[int, int]],
    t_old: float,
    y_old: np.ndarray,
    times: np.ndarray,
    values: np.ndarray,
    dense: Any,
) -> list[Event]:
    """Events from sign changes of ``x_i - x_j`` across ``times`` (within a step)."""
    events: list[Event] = []
    refiner: _Refiner | None = None
    for i, j in watch_pairs:
        gaps = values[:, 2 * i] - values[:, 2 * j]
        for k in range(len(gaps) - 1):
            v0, v1 = gaps[k], gaps[k + 1]
            if not (v0 * v1 < 0 or (v1 == 0 and v0 != 0)):
                continue
            if refiner is None:
                refiner = _Refiner(system, cfg, t_old, y_old)
            rel_speed = (v1 - v0) / max(times[k + 1] - times[k], 1e-300)
            located = refiner.locate(
                i,
                j,
                float(times[k]),
                float(times[k + 1]),
                dense,
                rel_speed,
            )
            if located is None:
                continue
            t_event, positions = located
            state = VortexState.from_positions(positions)
            diagnostics = _alignment_diagnostics(system, positions, i, j)
            events.append(
                Event("vertical-alignment", t_event, state, (i, j), diagnostics),
            )
            LOGGER.debug("Alignment of %d and %d at t=%.12g", i, j, t_event)
            xdot_i, xdot_j = abs(diagnostics["xdot_i"]), abs(diagnostics["xdot_j"])
            if min(xdot_i, xdot_j) < cfg.stop_threshold:
                stopper, other = (i, j) if xdot_i <= xdot_j else (j, i)
                events.append(
                    Event(
                        "instantaneous-stop",
                        t_event,
                        state,
                        (stopper, other),
                        diagnostics,
                    ),
                )
                LOGGER.debug("Instantaneous stop of %d at t=%.12g", stopper, t_event)
    events.sort(key=lambda e: e.time)
    return events


def trajectory_from_samples(
    system: VortexSystem,
    cfg: IntegratorConfig,
    times: list[float],
    samples: list[np.ndarray],
    events: list[Event],
    terminated_by: Termination,
) -> Trajectory:
    """Freeze samples into a `Trajectory` and record the invariant drift."""
    t = np.asarray(times, dtype=np.float64)
    positions = np.asarray(samples, dtype=np.float64).reshape(len(times), system.n, 2)
    series = invariant_arrays(system, positions)
    drift = {
        name: float(np.max(np.abs(values - values[0])))
        for name, values in series.items()
        if values.size
    }
    t.setflags(write=False)
    positions.setflags(write=False)
    return Trajectory(system, cfg, t, positions, tuple(events), drift, terminated_by)


def _near_collision_event(
    system: VortexSystem,
    t: float,
    positions: np.ndarray,
    pair: tuple[int, int],
    distance: float,
) -> Event:
    warn(
        f"Run stopped at t={t:.6g}: vortices {pair[0] + 1} and {pair[1] + 1} came"
        f" within {distance:.3g} of each other (or of the wall when they are equal)."
        " Lower `collision_guard` to continue closer.",
        stacklevel=4,
    )
    return Event(
        "near-collision",
        t,
        VortexState.from_positions(positions),
        pair,
        {"distance": distance},
    )


def _first_collision(
    system: VortexSystem,
    cfg: IntegratorConfig,
    times: np.ndarray,
    flat_states: np.ndarray,
) -> tuple[float, np.ndarray, Event] | None:
    """The first sample closer than the collision guard, with its event."""
    for t, y in zip(times, flat_states):
        distance, who = _clearance(system, y.reshape(system.n, 2))
        if distance < cfg.collision_guard:
            LOGGER.debug("Near collision at t=%.12g", t)
            positions = y.reshape(-1, 2)
            event = _near_collision_event(system, float(t), positions, who, distance)
            return float(t), y, event
    return None


def _check_inputs(
    system: VortexSystem,
    initial: VortexState,
    cfg: IntegratorConfig,
    watch_pairs: Iterable[tuple[int, int]] | None,
) -> list[tuple[int, int]]:
    system.validate()
    validate_state(system, initial)
    cfg.validate()
    pairs = _default_watch_pairs(system) if watch_pairs is None else list(watch_pairs)
    for i, j in pairs:
        if not (0 <= i < system.n and 0 <= j < system.n and i != j):
            msg = f"Invalid watch pair ({i}, {j}) for {system.n} vortices"
            raise UsageError(msg)
    return pairs


def integrate(
    system: VortexSystem,
    initial: VortexState,
    cfg: IntegratorConfig | None = None,
    *,
    watch_pairs: Iterable[tuple[int, int]] | None = None,
) -> Trajectory:
    """Integrate the vortex equations with an adaptive embedded Runge-Kutta pair.

    Parameters
    ----------
    system
        Strengths and domain.
    initial
        State at ``t = 0``.
    cfg
        Integrator settings, by default `IntegratorConfig()`.
    watch_pairs
        Vortex index pairs ``(i, j)`` whose vertical alignments ``x_i = x_j`` are
        recorded as events. By default the single pair of a two-vortex system and
        nothing otherwise.

    Returns
    -------
    A `Trajectory` sampled every ``cfg.output_interval`` (and at ``cfg.t_end``).
    A near-collision or a step-size underflow ends the run early, which is
    reported in ``terminated_by`` rather than raised.

    """
    cfg = cfg or IntegratorConfig()
    pairs = _check_inputs(system, initial, cfg, watch_pairs)
    grid = _sample_times(cfg.t_end, cfg.output_interval)
    y0 = np.array(initial.positions, dtype=np.float64).ravel()
    stepper = _STEPPERS[cfg.method](
        _rhs(system),
        0.0,
        y0,
        cfg.t_end,
        max_step=cfg.max_step,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
    )
    times: list[float] = [0.0]
    samples: list[np.ndarray] = [y0.copy()]
    events: list[Event] = []
    terminated_by: Termination = "time-end"
    next_sample = 1
    while stepper.status == "running":
        t_old, y_old = stepper.t, stepper.y.copy()
        message = stepper.step()
        if stepper.status == "failed":
            warn(f"Run stopped at t={t_old:.6g}: {message}", stacklevel=2)
            LOGGER.debug("Step failure at t=%.12g: %s", t_old, message)
            terminated_by = "step-failure"
            break
        t_new, y_new = stepper.t, stepper.y.copy()
        dense = stepper.dense_output()
        stop = next_sample
        while stop < len(grid) and grid[stop] < t_new:
            stop += 1
        inner_t = grid[next_sample:stop]
        inner_y = [dense(t) for t in inner_t]
        step_t = np.concatenate([[t_old], inner_t, [t_new]])
        step_y = np.array([y_old, *inner_y, y_new])
        if pairs:
            events.extend(
                _alignment_events(
                    system,
                    cfg,
                    pairs,
                    t_old,
                    y_old,
                    step_t,
                    step_y,
                    dense,
                ),
            )
        collision = _first_collision(system, cfg, step_t[1:], step_y[1:])
        if collision is not None:
            t_hit, y_hit, event = collision
            events = [e for e in events if e.time <= t_hit]
            keep = inner_t < t_hit
            times.extend(float(s) for s in inner_t[keep])
            samples.extend(y for y, k in zip(inner_y, keep) if k)
            times.append(t_hit)
            samples.append(y_hit)
            events.append(event)
            terminated_by = "near-collision"
            break
        times.extend(float(t) for t in inner_t)
        samples.extend(inner_y)
        next_sample = stop
    else:
        # the last grid point is t_end itself
        times.append(float(grid[-1]))
        samples.append(stepper.y.copy())
    return trajectory_from_samples(system, cfg, times, samples, events, terminated_by)


def integrate_fixed_step(
    system: VortexSystem,
    initial: VortexState,
    cfg: IntegratorConfig | None = None,
    step: float | None = None,
) -> Trajectory:
    """Classical fourth-order Runge-Kutta at a fixed step, for cross-checks.

    Sampling, collision guard and drift bookkeeping match `integrate`; alignments
    are not recorded.
    """
    cfg = cfg or IntegratorConfig()
    _check_inputs(system, initial, cfg, [])
    h = cfg.output_interval if step is None else step
    if not h > 0:
        msg = f"Step must be positive, got {h}"
        raise UsageError(msg)
    fun = _rhs(system)
    grid = _sample_times(cfg.t_end, cfg.output_interval)
    y = np.array(initial.positions, dtype=np.float64).ravel()
    t = 0.0
    times, samples = [0.0], [y.copy()]
    for target in grid[1:]:
        while t < target - 1e-12 * max(1.0, target):
            dt = min(h, target - t)
            k1 = fun(t, y)
            k2 = fun(t + dt / 2, y + dt / 2 * k1)
            k3 = fun(t + dt / 2, y + dt / 2 * k2)
            k4 = fun(t + dt, y + dt * k3)
            y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += dt
        t = float(target)
        times.append(t)
        samples.append(y.copy())
        collision = _first_collision(system, cfg, np.array([t]), y[None, :])
        if collision is not None:
            events = [collision[2]]
            return trajectory_from_samples(
                system, cfg, times, samples, events, "near-collision"
            )
    return trajectory_from_samples(system, cfg, times, samples, [], "time-end")


def conservation_report(traj: Trajectory) -> dict[str, float]:
    """Maximum relative drift ``|v - v0| / max(1, |v0|)`` of every invariant."""
    if traj.n_samples == 0:
        msg = "Cannot report conservation of an empty trajectory."
        raise UsageError(msg)
    series = traj.invariant_series()
    return {
        name: float(np.max(np.abs(values - values[0])) / max(1.0, abs(values[0])))
        for name, values in series.items()
    }
