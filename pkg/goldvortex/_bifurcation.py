"""goldvortex - Golden-ratio bifurcations of point vortices.

The interaction parameter W of two vortices in the half-plane, their
instantaneous-stop configurations, the critical values of W (in closed form and
by simulation), cross-ratio identities and regime classification.

Strengths are normalized to ``Γ1 = 1`` and ``Γ2 = λ``. A dipole is ``λ = -1``
and a pair of equal vortices is ``λ = 1``.
"""

from __future__ import annotations

import logging
import math
from typing import Iterable, NamedTuple

import numpy as np

from goldvortex._core import hamiltonian, interaction_w_kernel, validate_state
from goldvortex._integrate import (
    Event,
    IntegratorConfig,
    SimulationError,
    Trajectory,
    integrate,
)
from goldvortex.definitions import Method, RegimeTag, VortexState, VortexSystem
from goldvortex.utils import UsageError

LOGGER = logging.getLogger(__name__)

PHI = (1 + math.sqrt(5)) / 2

# Length of one backward integration chunk when searching for a start state
_BACKWARD_CHUNK = 5.0
# Encounter runs never exceed this duration
MAX_ENCOUNTER_TIME = 200.0


class UnresolvedRegimeError(SimulationError):
    """Raised when a trajectory does not show any of the known regimes."""


class CuspDiagnosticError(ValueError):
    """Raised when a cusp cannot be measured on a trajectory."""


class BifurcationResult(NamedTuple):
    """Critical interaction parameter and the stop configuration that produces it."""

    lam: float
    critical_W: float  # noqa: N815
    stop_ratio: float
    cross_ratio_at_stop: float
    method: Method
    # |ẋ1| at the located alignment for simulation results, 0 otherwise
    residual: float = 0.0
    event: Event | None = None


class Regime(NamedTuple):
    """A regime label and the numbers that led to it."""

    tag: RegimeTag
    evidence: dict[str, float]


def _check_lambda(lam: float) -> None:
    if lam == 0 or not math.isfinite(lam):
        msg = f"The strength ratio λ must be finite and nonzero, got {lam}"
        raise UsageError(msg)


def _check_unit_lambda(lam: float) -> None:
    if lam not in (-1, 1):
        msg = (
            "Only a dipole (λ = -1) or a pair (λ = 1) is supported here,"
            f" got λ = {lam}"
        )
        raise UsageError(msg)


def _check_two_vortex_half_plane(system: VortexSystem) -> None:
    if not system.half_plane or system.n != 2:  # noqa: PLR2004
        msg = (
            "Need two vortices in the half-plane, got"
            f" {system.n} in the {system.domain}."
        )
        raise UsageError(msg)


def interaction_W_general(  # noqa: N802
    lam: float,
    state: VortexState,
    *,
    gamma: float = 1.0,
) -> float:
    """``W(λ) = |P/Γ|^(1+λ²) exp(-4πH/Γ²)`` for strengths ``(Γ, λΓ)``."""
    _check_lambda(lam)
    system = VortexSystem.create((gamma, lam * gamma), "half-plane")
    validate_state(system, state)
    energy = hamiltonian(system, state)
    impulse = float(state.positions[:, 1] @ system.gammas)
    gamma1, gamma2 = system.strengths
    return float(interaction_w_kernel(gamma1, gamma2, energy, impulse))


def interaction_W(system: VortexSystem, state: VortexState) -> float:  # noqa: N802
    """``W = (P/Γ)² exp(-4πH/Γ²)`` for two vortices with ``Γ1 = ±Γ2``."""
    _check_two_vortex_half_plane(system)
    gamma1, gamma2 = system.strengths
    if abs(gamma1) != abs(gamma2):
        msg = (
            f"Strengths {system.strengths} are not of equal magnitude,"
            " use `interaction_W_general`."
        )
        raise UsageError(msg)
    return interaction_W_general(gamma2 / gamma1, state, gamma=gamma1)


def stop_height_ratio(lam: float) -> float:
    """Height ratio ``y1/y2`` at which vortex 1 stops: ``2λ + √(4λ² + 1)``."""
    _check_lambda(lam)
    return 2 * lam + math.sqrt(4 * lam**2 + 1)


def aligned_state(
    lam: float,
    ratio: float,
    y2: float = 1.0,
    x: float = 0.0,
) -> tuple[VortexSystem, VortexState]:
    """Two vortices on one vertical, at heights ``ratio * y2`` and ``y2``."""
    _check_lambda(lam)
    if not ratio > 0 or ratio == 1:
        msg = f"The height ratio must be positive and different from 1, got {ratio}"
        raise UsageError(msg)
    if not y2 > 0:
        msg = f"The lower reference height must be positive, got {y2}"
        raise UsageError(msg)
    system = VortexSystem.create((1.0, lam), "half-plane")
    return system, VortexState.from_positions([(x, ratio * y2), (x, y2)])


def alignment_speed(lam: float, ratio: float) -> float:
    """ẋ of vortex 1 when it is aligned with vortex 2 at heights ``(ratio, 1)``."""
    _check_lambda(lam)
    if not ratio > 0 or ratio == 1:
        msg = f"The height ratio must be positive and different from 1, got {ratio}"
        raise UsageError(msg)
    r = ratio
    return (r**2 - 1 - 4 * lam * r) / (r * (r**2 - 1)) / (4 * math.pi)


def cross_ratio(a: float, b: float, c: float, d: float) -> float:
    """``(a - d)(b - c) / ((a - b)(c - d))``."""
    if a == b or c == d:
        msg = f"Cross-ratio of ({a}, {b}, {c}, {d}) is undefined: need a != b, c != d"
        raise UsageError(msg)
    return (a - d) * (b - c) / ((a - b) * (c - d))


def stop_cross_ratio(lam: float) -> float:
    """Cross-ratio of the stop configuration and its mirror image, ``CR(r, 1, -1, -r)``.

    Equals φ for a dipole and for a pair. For other λ it equals
    ``(r + 1) / (λ (r - 1))``.
    """
    r = stop_height_ratio(lam)
    return cross_ratio(r, 1.0, -1.0, -r)


def balance_point() -> float:
    """The positive root of ``1/(A - 1) + 1/(A + 1) = 1/2``.

    Equivalently ``A² - 4A - 1 = 0``.
    """
    return 2 + math.sqrt(5)


def critical_W(lam: float) -> BifurcationResult:  # noqa: N802
    """The critical W of the stop configuration, in closed form."""
    ratio = stop_height_ratio(lam)
    _, state = aligned_state(lam, ratio)
    return BifurcationResult(
        lam=lam,
        critical_W=interaction_W_general(lam, state),
        stop_ratio=ratio,
        cross_ratio_at_stop=cross_ratio(ratio, 1.0, -1.0, -ratio),
        method="algebraic",
    )


def critical_curve(lambdas: Iterable[float]) -> list[BifurcationResult]:
    """``critical_W`` over a range of strength ratios."""
    return [critical_W(lam) for lam in lambdas]


def aligned_ratio_for_W(lam: float, W: float) -> float:  # noqa: N802, N803
    """Height ratio of the aligned configuration with interaction parameter ``W``.

    For a dipole ``W = (r + 1)² / 4r`` with ``r < 1``, which needs ``W > 1``; for a
    pair ``W = (r - 1)² / 4r`` with ``r > 1``.
    """
    _check_unit_lambda(lam)
    if lam < 0:
        if not W > 1:
            msg = f"A dipole has no vertically aligned state with W = {W} <= 1"
            raise UsageError(msg)
        b = 2 * W - 1
        return b - math.sqrt(b**2 - 1)
    if not W > 0:
        msg = f"W must be positive, got {W}"
        raise UsageError(msg)
    b = 2 * W + 1
    return b + math.sqrt(b**2 - 1)


def approach_state(
    lam: float,
    W: float,  # noqa: N803
    separation: float,
) -> tuple[VortexSystem, VortexState]:
    """A dipole with ``|P| = 1`` and interaction ``W``, ``separation`` apart in x.

    Vortex 1 is the lower one and starts on the left, so the two approach each
    other.
    """
    if lam != -1:
        msg = f"Approach states are only defined for a dipole, got λ = {lam}"
        raise UsageError(msg)
    xi2 = separation**2
    if not W > 0 or W * (xi2 + 1) <= 1:
        msg = (
            f"No dipole state with W = {W} at separation {separation}:"
            " need W(ξ² + 1) > 1"
        )
        raise UsageError(msg)
    height_sum = math.sqrt((xi2 + W * (xi2 + 1)) / (W * (xi2 + 1) - 1))
    system = VortexSystem.create((1.0, -1.0), "half-plane")
    state = VortexState.from_positions(
        [
            (-separation / 2, (height_sum - 1) / 2),
            (separation / 2, (height_sum + 1) / 2),
        ],
    )
    return system, state


def _backward_start(
    system: VortexSystem,
    state: VortexState,
    cfg: IntegratorConfig,
    offset: float,
    max_time: float,
) -> tuple[VortexState, float]:
    """Walk back in time from ``state`` until the horizontal gap reaches ``offset``.

    Stops earlier at the first maximum of the gap, which bounded (leapfrogging)
    motion reaches before any large offset.
    """
    backward = system.negated()
    chunk = cfg._replace(t_end=_BACKWARD_CHUNK)
    elapsed, current = 0.0, state
    while elapsed < max_time / 2:
        traj = integrate(backward, current, chunk, watch_pairs=[])
        gaps = np.abs(traj.positions[:, 0, 0] - traj.positions[:, 1, 0])
        for k in range(1, traj.n_samples):
            if gaps[k] >= offset:
                return traj.state(k), elapsed + float(traj.times[k])
            if gaps[k] < gaps[k - 1] and gaps[k - 1] > 0:
                return traj.state(k - 1), elapsed + float(traj.times[k - 1])
        if traj.terminated_by != "time-end":
            msg = f"Backward run from the aligned state ended by {traj.terminated_by}"
            raise SimulationError(msg, {"elapsed": elapsed, "gap": float(gaps[-1])})
        elapsed += float(traj.times[-1])
        current = traj.final_state
    return current, elapsed


def _encounter_from(
    system: VortexSystem,
    state: VortexState,
    cfg: IntegratorConfig,
    offset: float,
    max_time: float,
) -> tuple[Trajectory, float]:
    """Run through an aligned ``state``; returns the run and when it aligns."""
    start, t_back = _backward_start(system, state, cfg, offset, max_time)
    t_end = min(2 * t_back, max_time)
    LOGGER.debug("Encounter run: %.6g back, %.6g forward", t_back, t_end)
    return integrate(system, start, cfg._replace(t_end=t_end)), t_back


def encounter_start(
    lam: float,
    W: float,  # noqa: N803
    cfg: IntegratorConfig | None = None,
    offset: float = 4.0,
    max_time: float = MAX_ENCOUNTER_TIME,
) -> tuple[VortexSystem, VortexState, float]:
    """A state ahead of the encounter at level ``W`` and the time until it aligns."""
    cfg = cfg or IntegratorConfig()
    system, state = aligned_state(lam, aligned_ratio_for_W(lam, W))
    start, t_back = _backward_start(system, state, cfg, offset, max_time)
    return system, start, t_back


def encounter_trajectory(
    lam: float,
    W: float,  # noqa: N803
    cfg: IntegratorConfig | None = None,
    offset: float = 4.0,
    max_time: float = MAX_ENCOUNTER_TIME,
) -> Trajectory:
    """A run of a dipole or pair at interaction ``W`` through its encounter.

    Starts from the aligned state of level ``W``, walks back until the vortices
    are ``offset`` apart horizontally and runs forward for twice that time. A
    dipole with ``W <= 1`` has no aligned state; it starts from an approach state
    and runs for ``max_time``.
    """
    cfg = cfg or IntegratorConfig()
    _check_unit_lambda(lam)
    if lam < 0 and W <= 1:
        separation = max(offset, math.sqrt(4 / W))
        system, state = approach_state(lam, W, separation)
        return integrate(system, state, cfg._replace(t_end=max_time))
    system, start, t_back = encounter_start(lam, W, cfg, offset, max_time)
    t_end = min(2 * t_back, max_time)
    return integrate(system, start, cfg._replace(t_end=t_end))


def _alignment_near(traj: Trajectory, t: float) -> Event:
    alignments = traj.events_of("vertical-alignment")
    if not alignments:
        msg = f"No vertical alignment on the run (terminated by {traj.terminated_by})"
        raise SimulationError(
            msg,
            {"t_end": float(traj.times[-1]), "terminated_by": traj.terminated_by},
        )
    return min(alignments, key=lambda e: abs(e.time - t))


def find_cusp_by_simulation(
    lam: float,
    ratio_bracket: tuple[float, float],
    cfg: IntegratorConfig | None = None,
    *,
    offset: float = 1.0,
    residual_tol: float = 1e-9,
    max_iter: int = 60,
) -> BifurcationResult:
    """Locate the instantaneous stop by bisection over simulated encounters.

    Every candidate height ratio is turned into a full run through its aligned
    state; the signed ẋ1 at the detected alignment is the bisection objective.
    """
    _check_unit_lambda(lam)
    cfg = cfg or IntegratorConfig()
    lo, hi = sorted(float(r) for r in ratio_bracket)
    sign_lo = math.copysign(1, alignment_speed(lam, lo))
    sign_hi = math.copysign(1, alignment_speed(lam, hi))
    if sign_lo == sign_hi:
        msg = (
            f"The alignment speed does not change sign on [{lo}, {hi}];"
            f" the stop ratio for λ = {lam} is {stop_height_ratio(lam)}"
        )
        raise UsageError(msg)

    event: Event | None = None
    for iteration in range(max_iter):
        mid = (lo + hi) / 2
        system, state = aligned_state(lam, mid)
        traj, t_align = _encounter_from(system, state, cfg, offset, MAX_ENCOUNTER_TIME)
        if traj.terminated_by != "time-end":
            msg = f"Run at height ratio {mid} ended by {traj.terminated_by}"
            raise SimulationError(msg, {"ratio": mid, "iteration": iteration})
        event = _alignment_near(traj, t_align)
        xdot = event.diagnostics["xdot_i"]
        LOGGER.debug("Bisection %d: ratio=%.17g, ẋ1=%.3e", iteration, mid, xdot)
        if abs(xdot) < residual_tol:
            break
        if math.copysign(1, xdot) == sign_lo:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4 * np.finfo(float).eps * hi:
            break

    assert event is not None
    y1, y2 = event.state.positions[:, 1]
    ratio = float(y1 / y2)
    return BifurcationResult(
        lam=lam,
        critical_W=interaction_W(system, event.state),
        stop_ratio=ratio,
        cross_ratio_at_stop=cross_ratio(ratio, 1.0, -1.0, -ratio),
        method="simulation",
        residual=abs(event.diagnostics["xdot_i"]),
        event=event,
    )


def _count_reversals(traj: Trajectory, threshold: float) -> int:
    """Sign reversals of ẋ_j over samples and alignment diagnostics, all vortices."""
    xdot = traj.velocity_series()[:, :, 0]
    total = 0
    for j in range(traj.system.n):
        points = list(zip(traj.times.tolist(), xdot[:, j].tolist()))
        for e in traj.events_of("vertical-alignment"):
            i, k = e.vortex_indices
            if j == i:
                points.append((e.time, e.diagnostics["xdot_i"]))
            elif j == k:
                points.append((e.time, e.diagnostics["xdot_j"]))
        points.sort()
        signs = [math.copysign(1, v) for _, v in points if abs(v) >= threshold]
        total += sum(a != b for a, b in zip(signs, signs[1:]))
    return total


def _escape_evidence(traj: Trajectory) -> tuple[float, float]:
    """Growth of the mean height and heading spread (degrees) over the last quarter."""
    heights = traj.positions[:, :, 1].mean(axis=1)
    growth = float(heights[-1] / heights[0])
    midpoints = traj.positions.mean(axis=1)
    tail = midpoints[-max(3, traj.n_samples // 4) :]
    steps = np.diff(tail, axis=0)
    if len(steps) == 0:
        return growth, math.inf
    headings = np.unwrap(np.arctan2(steps[:, 1], steps[:, 0]))
    return growth, float(np.degrees(np.ptp(headings)))


def classify_regime(traj: Trajectory, lam: float) -> Regime:
    """Label the encounter on a two-vortex half-plane run.

    In order of precedence: ``cusp`` when an instantaneous stop was recorded,
    ``escape`` (dipole only) when the pair climbs away from the wall along a
    straight line, ``kink-or-leapfrog`` when some ẋ changes sign, and
    ``smooth-pass`` when the vortices pass each other or separate.
    """
    _check_two_vortex_half_plane(traj.system)
    _check_unit_lambda(lam)
    if traj.terminated_by != "time-end":
        msg = f"Cannot classify a run that ended by {traj.terminated_by}"
        raise UnresolvedRegimeError(msg, {"t_end": float(traj.times[-1])})
    threshold = traj.config.stop_threshold
    alignments = traj.events_of("vertical-alignment")
    separation = np.linalg.norm(traj.positions[:, 0] - traj.positions[:, 1], axis=-1)
    closest = int(np.argmin(separation))
    growth, spread = _escape_evidence(traj)
    evidence = {
        "reversals": float(_count_reversals(traj, threshold)),
        "alignments": float(len(alignments)),
        "separation_ratio": float(separation[closest:].max() / separation[closest]),
        "height_growth": growth,
        "heading_spread_deg": spread,
    }
    if traj.events_of("instantaneous-stop"):
        return Regime("cusp", evidence)
    if lam < 0 and growth > 10 and spread < 5:  # noqa: PLR2004
        return Regime("escape", evidence)
    if evidence["reversals"] > 0:
        return Regime("kink-or-leapfrog", evidence)
    if alignments or evidence["separation_ratio"] > 3:  # noqa: PLR2004
        return Regime("smooth-pass", evidence)
    msg = "The run shows no encounter; run longer or start further apart."
    raise UnresolvedRegimeError(msg, evidence)


def cusp_exponent_check(
    traj: Trajectory,
    event: Event,
    window: float = 0.1,
    min_offset: float | None = None,
) -> float:
    """Log-log slope of ``|x - x_c|`` against ``|y - y_c|`` near a stop, ideally 3/2.

    Uses the samples of the stopping vortex with ``min_offset <= |t - t_c| <= window``;
    ``min_offset`` defaults to a fifth of the window.
    """
    if event.kind != "instantaneous-stop":
        msg = f"Need an instantaneous-stop event, got `{event.kind}`"
        raise UsageError(msg)
    if not traj.times[0] <= event.time <= traj.times[-1]:
        msg = f"Event at t={event.time} is outside the trajectory"
        raise UsageError(msg)
    min_offset = window / 5 if min_offset is None else min_offset
    j = event.vortex_indices[0]
    x_c, y_c = event.state.positions[j]
    distance = np.abs(traj.times - event.time)
    mask = (distance <= window) & (distance >= min_offset)
    dx = np.abs(traj.positions[mask, j, 0] - x_c)
    dy = np.abs(traj.positions[mask, j, 1] - y_c)
    usable = (dx > 0) & (dy > 0)
    if np.count_nonzero(usable) < 8:  # noqa: PLR2004
        msg = (
            f"Only {np.count_nonzero(usable)} samples within {window} of the cusp,"
            " need at least 8; widen the window or lower the output interval."
        )
        raise CuspDiagnosticError(msg)
    slope, _ = np.polyfit(np.log(dy[usable]), np.log(dx[usable]), 1)
    return float(slope)
