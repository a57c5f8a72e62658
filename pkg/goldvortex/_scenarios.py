"""goldvortex - Golden-ratio bifurcations of point vortices.

Analytic scenarios and verification checks: rest, rotation, translation,
boundary drift, self-similar three-vortex motion, and the golden-ratio checks of
the bifurcation module, grouped into suites.

Expected periods and speeds use the ``(1/2π) ln|z|`` Green's function of
`goldvortex._core`; a different prefactor rescales all of them by one common
time factor.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Literal, NamedTuple, Sequence, get_args

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import minimize

from goldvortex._bifurcation import (
    PHI,
    alignment_speed,
    aligned_ratio_for_W,
    balance_point,
    classify_regime,
    critical_W,
    cross_ratio,
    cusp_exponent_check,
    encounter_start,
    encounter_trajectory,
    find_cusp_by_simulation,
    stop_cross_ratio,
    stop_height_ratio,
)
from goldvortex._core import velocity, velocity_fd_oracle, velocity_kernel
from goldvortex._integrate import (
    IntegratorConfig,
    SimulationError,
    Trajectory,
    conservation_report,
    integrate,
)
from goldvortex.definitions import Domain, VortexState, VortexSystem
from goldvortex.utils import UsageError

LOGGER = logging.getLogger(__name__)

Suite = Literal["scenarios", "conservation", "bifurcation", "oracle", "all"]
VALID_SUITES = get_args(Suite)


class SearchFailedError(SimulationError):
    """Raised when no self-similar configuration is found."""


class ScenarioReport(NamedTuple):
    """Measured against expected values of one check."""

    name: str
    passed: bool
    measured: dict[str, float]
    expected: dict[str, float]
    tolerance: float
    # Per-key overrides of `tolerance`
    tolerances: dict[str, float] | None = None

    def failures(self) -> list[str]:
        """Keys whose measured value is out of tolerance."""
        return [
            key
            for key, want in self.expected.items()
            if not _within(self.measured[key], want, self.tolerance_for(key))
        ]

    def tolerance_for(self, key: str) -> float:
        """The tolerance that applies to ``key``."""
        return (self.tolerances or {}).get(key, self.tolerance)


def _within(measured: float, expected: float, tolerance: float) -> bool:
    """Relative comparison, absolute when ``expected`` is zero."""
    if not math.isfinite(measured):
        return False
    scale = abs(expected) if expected != 0 else 1.0
    return abs(measured - expected) <= tolerance * scale


def make_report(
    name: str,
    measured: dict[str, float],
    expected: dict[str, float],
    tolerance: float,
    tolerances: dict[str, float] | None = None,
) -> ScenarioReport:
    """Build a report; ``passed`` is derived from the values."""
    report = ScenarioReport(name, False, measured, expected, tolerance, tolerances)
    return report._replace(passed=not report.failures())


def _run(
    strengths: Sequence[float],
    positions: Sequence[Sequence[float]],
    t_end: float,
    domain: Domain = "plane",
    output_interval: float = 0.01,
) -> tuple[VortexSystem, Trajectory]:
    system = VortexSystem.create(strengths, domain)
    state = VortexState.from_positions(positions)
    cfg = IntegratorConfig(t_end=t_end, output_interval=output_interval)
    return system, integrate(system, state, cfg, watch_pairs=[])


def scenario_single_rest(
    gamma: float = 1.0,
    position: tuple[float, float] = (0.0, 0.0),
    domain: Domain = "plane",
    t_end: float = 10.0,
) -> ScenarioReport:
    """A lone vortex rests in the plane and drifts at ``|Γ|/(4πy)`` above the wall."""
    _, traj = _run([gamma], [position], t_end, domain)
    displacement = float(np.linalg.norm(traj.positions[-1, 0] - traj.positions[0, 0]))
    if domain == "plane":
        expected, tolerance = 0.0, 1e-12
    else:
        expected, tolerance = abs(gamma) * t_end / (4 * math.pi * position[1]), 1e-6
    return make_report(
        f"single-rest[{domain}, Γ={gamma:g}]",
        {"displacement": displacement},
        {"displacement": expected},
        tolerance,
    )


def rotation_period(gamma1: float, gamma2: float, d: float) -> float:
    """Period ``4π²d²/|Γ1 + Γ2|`` of two plane vortices at distance ``d``."""
    total = gamma1 + gamma2
    if total == 0:
        msg = (
            "Opposite strengths translate instead of rotating;"
            " use the dipole scenario."
        )
        raise UsageError(msg)
    return 4 * math.pi**2 * d**2 / abs(total)


def scenario_pair_rotation(
    gamma1: float = 1.0,
    gamma2: float = 1.0,
    d: float = 1.0,
) -> ScenarioReport:
    """Two plane vortices rotate about their stationary vorticity center."""
    period = rotation_period(gamma1, gamma2, d)
    positions = [(d / 2, 0.0), (-d / 2, 0.0)]
    system, traj = _run(
        [gamma1, gamma2],
        positions,
        period,
        output_interval=period / 500,
    )
    centers = traj.positions.transpose(0, 2, 1) @ system.gammas / (gamma1 + gamma2)
    center_drift = float(np.max(np.linalg.norm(centers - centers[0], axis=-1)))
    links = traj.positions[:, 1] - traj.positions[:, 0]
    distances = np.linalg.norm(links, axis=-1)
    angle = np.unwrap(np.arctan2(links[:, 1], links[:, 0]))
    turned = abs(angle[-1] - angle[0])
    measured_period = 2 * math.pi * period / turned if turned > 0 else math.inf
    share = gamma2 / (gamma1 + gamma2)
    return make_report(
        f"pair-rotation[Γ=({gamma1:g}, {gamma2:g}), d={d:g}]",
        {
            "period": measured_period,
            "center_drift": center_drift,
            "distance_drift": float(np.max(np.abs(distances - d))),
            "return_error": float(
                np.max(np.abs(traj.positions[-1] - traj.positions[0])),
            ),
            "center_between": float(0 < share < 1),
        },
        {
            "period": period,
            "center_drift": 0.0,
            "distance_drift": 0.0,
            "return_error": 0.0,
            "center_between": float(gamma1 * gamma2 > 0),
        },
        1e-6,
        {"center_drift": 1e-8, "distance_drift": 1e-8, "center_between": 0.0},
    )


def scenario_dipole_translation(
    gamma: float = 1.0,
    d: float = 1.0,
    t_end: float = 10.0,
) -> ScenarioReport:
    """A plane dipole moves along the bisector of its segment at ``Γ/(2πd)``."""
    if gamma == 0 or not d > 0:
        msg = f"Need Γ != 0 and d > 0, got Γ = {gamma}, d = {d}"
        raise UsageError(msg)
    _, traj = _run([gamma, -gamma], [(0.0, d / 2), (0.0, -d / 2)], t_end)
    mid = traj.positions.mean(axis=1)
    shift = mid[-1] - mid[0]
    link = traj.positions[:, 0] - traj.positions[:, 1]
    separation = np.linalg.norm(link, axis=-1)
    along = abs(float(shift @ link[0])) / (np.linalg.norm(shift) * separation[0])
    return make_report(
        f"dipole-translation[Γ={gamma:g}, d={d:g}]",
        {
            "speed": float(np.linalg.norm(shift) / t_end),
            "vx": float(shift[0] / t_end),
            "along_segment": float(along),
            "separation_drift": float(np.max(np.abs(separation - d))),
        },
        {
            "speed": abs(gamma) / (2 * math.pi * d),
            "vx": gamma / (2 * math.pi * d),
            "along_segment": 0.0,
            "separation_drift": 0.0,
        },
        1e-8,
    )


def scenario_halfplane_drift(
    gamma: float = 1.0,
    y: float = 1.0,
    t_end: float = 10.0,
) -> ScenarioReport:
    """A single vortex above a wall moves parallel to it at ``|Γ|/(4πy)``."""
    if gamma == 0 or not y > 0:
        msg = f"Need Γ != 0 and y > 0, got Γ = {gamma}, y = {y}"
        raise UsageError(msg)
    _, traj = _run([gamma], [(0.0, y)], t_end, "half-plane")
    shift = traj.positions[-1, 0] - traj.positions[0, 0]
    return make_report(
        f"half-plane-drift[Γ={gamma:g}, y={y:g}]",
        {
            "speed": float(abs(shift[0]) / t_end),
            "vy": float(shift[1] / t_end),
            "direction": math.copysign(1, shift[0]),
        },
        {
            "speed": abs(gamma) / (4 * math.pi * y),
            "vy": 0.0,
            "direction": math.copysign(1, gamma),
        },
        1e-8,
    )


def scenario_close_pair_rotation(t_end: float = 5.0) -> ScenarioReport:
    """A close pair inside a three-vortex run keeps rotating and never collides."""
    strengths = [1.0, 1.0, 1.0]
    positions = [(-0.05, 0.0), (0.05, 0.0), (2.0, 0.0)]
    _, traj = _run(strengths, positions, t_end)
    separation = np.linalg.norm(traj.positions[:, 0] - traj.positions[:, 1], axis=-1)
    return make_report(
        "close-pair-rotation",
        {
            "min_separation_ratio": float(separation.min() / separation[0]),
            "max_separation_ratio": float(separation.max() / separation[0]),
            "cut_by_guard": float(traj.terminated_by == "near-collision"),
        },
        {"min_separation_ratio": 1.0, "max_separation_ratio": 1.0, "cut_by_guard": 0.0},
        0.1,
        {"cut_by_guard": 0.0},
    )


def grobli_collapse_condition(strengths: Sequence[float]) -> float:
    """``Σ_{j<k} Γ_j Γ_k``.

    It vanishes for every self-similar three-vortex motion.
    """
    if len(strengths) != 3:  # noqa: PLR2004
        msg = f"Need three strengths, got {len(strengths)}"
        raise UsageError(msg)
    return float(sum(a * b for a, b in itertools.combinations(strengths, 2)))


def _log_rates(gammas: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """``d ln l_jk / dt`` of the three sides."""
    vel = velocity_kernel(gammas, positions, half_plane=False)
    rates = []
    for j, k in ((0, 1), (0, 2), (1, 2)):
        dz = positions[j] - positions[k]
        dv = vel[j] - vel[k]
        rates.append(dz @ dv / (dz @ dz))
    return np.array(rates)


def _triangle(params: np.ndarray) -> np.ndarray:
    a, b = params
    return np.array([[0.0, 0.0], [1.0, 0.0], [a, b]])


def _shape_rate_spread(params: np.ndarray, gammas: np.ndarray) -> float:
    """Spread of the side growth rates relative to their mean.

    Zero when the triangle is self-similar.
    """
    positions = _triangle(params)
    near = np.min(np.linalg.norm(positions[2] - positions[:2], axis=-1))
    if params[1] <= 1e-3 or near < 1e-3:  # noqa: PLR2004
        return 1e3
    rates = _log_rates(gammas, positions)
    return float(np.ptp(rates) / (abs(rates.mean()) + 1e-12))


def _side_ratios(positions: np.ndarray) -> np.ndarray:
    """``l13/l12`` and ``l23/l12`` for positions of shape ``(..., 3, 2)``."""
    l12 = np.linalg.norm(positions[..., 0, :] - positions[..., 1, :], axis=-1)
    l13 = np.linalg.norm(positions[..., 0, :] - positions[..., 2, :], axis=-1)
    l23 = np.linalg.norm(positions[..., 1, :] - positions[..., 2, :], axis=-1)
    return np.stack([l13 / l12, l23 / l12], axis=-1)


def _window_ratio_drift(params: np.ndarray, gammas: np.ndarray, window: float) -> float:
    """Largest relative change of the side ratios over a short run."""
    if params[1] <= 1e-3:  # noqa: PLR2004
        return 1e3
    y0 = _triangle(params).ravel()
    sol = solve_ivp(
        lambda _t, y: velocity_kernel(
            gammas,
            y.reshape(3, 2),
            half_plane=False,
        ).ravel(),
        (0.0, window),
        y0,
        method="DOP853",
        rtol=1e-10,
        atol=1e-12,
        t_eval=np.linspace(0.0, window, 21),
    )
    ratios = _side_ratios(sol.y.T.reshape(-1, 3, 2))
    return float(np.max(np.abs(ratios / ratios[0] - 1)))


def selfsimilar_report(
    strengths: Sequence[float],
    state: VortexState,
    name: str = "self-similar",
) -> ScenarioReport:
    """Run until the triangle doubles (or halves) and measure its change of shape."""
    system = VortexSystem.create(strengths, "plane")
    rate = float(_log_rates(system.gammas, state.positions).mean())
    if abs(rate) < 1e-9:  # noqa: PLR2004
        return make_report(
            name,
            {"ratio_drift": math.inf, "size_factor": 1.0},
            {"ratio_drift": 0.0, "size_factor": 2.0},
            1e-4,
            {"size_factor": 1e-3},
        )
    # the squared size grows linearly: l² = l0² (1 + 2 ρ t)
    if rate > 0:
        t_end, factor = 3 / (2 * rate), 2.0
    else:
        t_end, factor = 3 / (8 * abs(rate)), 0.5
    cfg = IntegratorConfig(t_end=t_end, output_interval=t_end / 400)
    traj = integrate(system, state, cfg, watch_pairs=[])
    ratios = _side_ratios(traj.positions)
    l12 = np.linalg.norm(traj.positions[:, 0] - traj.positions[:, 1], axis=-1)
    return make_report(
        name,
        {
            "ratio_drift": float(np.max(np.abs(ratios / ratios[0] - 1))),
            "size_factor": float(l12[-1] / l12[0]),
        },
        {"ratio_drift": 0.0, "size_factor": factor},
        1e-4,
        {"size_factor": 1e-3},
    )


def grobli_selfsimilar_search(
    strengths: Sequence[float] = (3.0, -2.0, 6.0),
    *,
    grid_a: Sequence[float] = (-4.5, -3.5, -2.5, -1.5, -0.5, 0.5),
    grid_b: Sequence[float] = (0.5, 1.0, 1.5, 2.0, 2.5),
) -> tuple[VortexState, ScenarioReport]:
    """Find an expanding self-similar triangle for three vortices.

    Vortices 1 and 2 are fixed at ``(0, 0)`` and ``(1, 0)``; the third vortex
    ``(a, b)`` is searched with Nelder-Mead from a grid of starts, first on the
    instantaneous growth rates of the sides and then on the drift of the side
    ratios over a short run.
    """
    residual = grobli_collapse_condition(strengths)
    if abs(residual) > 1e-12 * max(1.0, max(abs(g) for g in strengths) ** 2):
        msg = (
            f"Strengths {tuple(strengths)} have Σ Γ_j Γ_k = {residual} != 0"
            " and admit"
            " no self-similar motion"
        )
        raise UsageError(msg)
    gammas = np.asarray(strengths, dtype=np.float64)
    candidates = []
    for start in itertools.product(grid_a, grid_b):
        result = minimize(
            _shape_rate_spread,
            np.array(start),
            args=(gammas,),
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000},
        )
        if result.fun < 1e-6:  # noqa: PLR2004
            rate = float(_log_rates(gammas, _triangle(result.x)).mean())
            candidates.append((abs(rate), tuple(result.x)))
    if not candidates:
        msg = "No self-similar triangle found from any starting shape"
        raise SearchFailedError(msg, {"best_residual": math.inf})
    # the fastest one is furthest from the rigidly rotating shapes
    rate, best = max(candidates)
    LOGGER.debug("Self-similar candidate (a, b) = %s with |rate| %.6g", best, rate)
    polished = minimize(
        _window_ratio_drift,
        np.array(best),
        args=(gammas, 0.25 / rate),
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 400},
    )
    start_drift = _window_ratio_drift(np.array(best), gammas, 0.25 / rate)
    params = polished.x if polished.fun <= start_drift else np.array(best)
    positions = _triangle(params)
    if _log_rates(gammas, positions).mean() < 0:
        # the mirror image runs backward in time, so it expands
        positions[2, 1] = -positions[2, 1]
    state = VortexState.from_positions(positions)
    report = selfsimilar_report(strengths, state, "grobli-expansion")
    if not report.passed:
        msg = (
            f"Best triangle {positions.tolist()} is not self-similar:"
            f" {report.measured}"
        )
        raise SearchFailedError(msg, {"best_residual": report.measured["ratio_drift"]})
    return state, report


def _conservation_run(name: str) -> tuple[VortexSystem, VortexState]:
    if name == "pair-rotation":
        state = VortexState.from_positions([(0.5, 0), (-0.5, 0)])
        return VortexSystem.create([1.0, 1.0]), state
    if name == "dipole-translation":
        state = VortexState.from_positions([(0, 0.5), (0, -0.5)])
        return VortexSystem.create([1.0, -1.0]), state
    w = float(name.rsplit("-", 1)[-1])
    system, start, _ = encounter_start(-1, w)
    return system, start


CONSERVATION_RUNS = (
    "pair-rotation",
    "dipole-translation",
    "half-plane-dipole-1.4",
    "half-plane-dipole-1.9",
)


def check_conservation(name: str, t_end: float = 100.0) -> ScenarioReport:
    """Relative invariant drift of a standard run at default tolerances."""
    system, state = _conservation_run(name)
    traj = integrate(system, state, IntegratorConfig(t_end=t_end))
    drift = conservation_report(traj)
    return make_report(
        f"conservation[{name}]",
        drift,
        {key: 0.0 for key in drift},
        1e-8,
    )


def check_velocity_oracle(count: int = 1000, seed: int = 0) -> ScenarioReport:
    """Analytic velocities against finite differences of the Hamiltonian.

    The states are random, in both domains and with up to three vortices.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    checked = 0
    while checked < count:
        n = int(rng.integers(1, 4))
        domain: Domain = "plane" if rng.integers(2) else "half-plane"
        strengths = rng.uniform(0.5, 2.0, n) * rng.choice([-1.0, 1.0], n)
        positions = np.column_stack([rng.uniform(-2, 2, n), rng.uniform(0.2, 2.2, n)])
        if n > 1:
            diff = positions[:, None] - positions[None, :]
            dist = np.linalg.norm(diff, axis=-1)[np.triu_indices(n, 1)]
            if dist.min() < 0.2:  # noqa: PLR2004
                continue
        system = VortexSystem.create(strengths, domain)
        state = VortexState.from_positions(positions)
        exact = velocity(system, state)
        approx = velocity_fd_oracle(system, state, 1e-6)
        scale = float(np.max(np.abs(exact)))
        error = float(np.max(np.abs(approx - exact)))
        worst = max(worst, error / scale if scale > 0 else error)
        checked += 1
    return make_report(
        f"velocity-oracle[{count} states]",
        {"max_relative_error": worst},
        {"max_relative_error": 0.0},
        1e-6,
    )


def check_golden_values() -> ScenarioReport:
    """Closed-form critical values and cross-ratio identities."""
    a = balance_point()
    return make_report(
        "golden-values",
        {
            "critical_W_dipole": critical_W(-1).critical_W,
            "critical_W_pair": critical_W(1).critical_W,
            "stop_cross_ratio_dipole": stop_cross_ratio(-1),
            "stop_cross_ratio_pair": stop_cross_ratio(1),
            "cross_ratio_of_stop": cross_ratio(a, 1, -1, -a),
            "balance_quadratic": a**2 - 4 * a - 1,
            "balance_equation": 1 / (a - 1) + 1 / (a + 1) - 0.5,
        },
        {
            "critical_W_dipole": PHI,
            "critical_W_pair": 1 / PHI,
            "stop_cross_ratio_dipole": PHI,
            "stop_cross_ratio_pair": PHI,
            "cross_ratio_of_stop": PHI,
            "balance_quadratic": 0.0,
            "balance_equation": 0.0,
        },
        1e-12,
    )


_CUSP_BRACKETS = {-1: (0.1, 0.4), 1: (3.0, 6.0)}


def check_cusp_by_simulation(lam: int) -> ScenarioReport:
    """The simulated stop agrees with the closed form."""
    result = find_cusp_by_simulation(lam, _CUSP_BRACKETS[lam])
    assert result.event is not None
    diag = result.event.diagnostics
    return make_report(
        f"cusp-by-simulation[λ={lam:+d}]",
        {
            "critical_W": result.critical_W,
            "stop_ratio": result.stop_ratio,
            "ydot_1": abs(diag["ydot_i"]),
            "ydot_2": abs(diag["ydot_j"]),
        },
        {
            "critical_W": critical_W(lam).critical_W,
            "stop_ratio": stop_height_ratio(lam),
            "ydot_1": 0.0,
            "ydot_2": 0.0,
        },
        1e-6,
        {"ydot_1": 1e-9, "ydot_2": 1e-9},
    )


def check_regime_flip(lam: int, delta: float = 1e-3) -> ScenarioReport:
    """Kink or leapfrog just below the critical W, smooth pass just above."""
    w_star = critical_W(lam).critical_W
    below = classify_regime(encounter_trajectory(lam, w_star - delta), lam)
    above = classify_regime(encounter_trajectory(lam, w_star + delta), lam)
    speed_below = alignment_speed(lam, aligned_ratio_for_W(lam, w_star - delta))
    return make_report(
        f"regime-flip[λ={lam:+d}]",
        {
            "below_is_kink": float(below.tag == "kink-or-leapfrog"),
            "above_is_smooth": float(above.tag == "smooth-pass"),
            "kink_side_stops_backward": float(speed_below < 0),
        },
        {"below_is_kink": 1.0, "above_is_smooth": 1.0, "kink_side_stops_backward": 1.0},
        0.0,
    )


def check_cusp_exponent(lam: int = -1) -> ScenarioReport:
    """The path of the stopping vortex is a 3/2 cusp at the critical W."""
    traj = encounter_trajectory(lam, critical_W(lam).critical_W)
    stops = traj.events_of("instantaneous-stop")
    slope = cusp_exponent_check(traj, stops[0]) if stops else math.nan
    return make_report(
        f"cusp-exponent[λ={lam:+d}]",
        {"slope": slope},
        {"slope": 1.5},
        0.05 / 1.5,
    )


def check_grobli(strengths: Sequence[float] = (3.0, -2.0, 6.0)) -> list[ScenarioReport]:
    """Self-similar expansion and its time-reversed contraction."""
    state, expansion = grobli_selfsimilar_search(strengths)
    reversed_strengths = [-g for g in strengths]
    contraction = selfsimilar_report(reversed_strengths, state, "grobli-contraction")
    return [expansion, contraction]


def _as_list(
    func: Callable[[], ScenarioReport | list[ScenarioReport]],
) -> list[ScenarioReport]:
    result = func()
    return result if isinstance(result, list) else [result]


def _suite_tasks(
    name: Suite,
) -> list[Callable[[], ScenarioReport | list[ScenarioReport]]]:
    p = functools.partial
    tasks: dict[str, list] = {
        "scenarios": [
            p(scenario_single_rest, 1.0, (0.0, 0.0)),
            p(scenario_single_rest, -3.0, (2.0, 5.0)),
            p(scenario_single_rest, 1.0, (0.0, 1.0), "half-plane"),
            p(scenario_pair_rotation, 1.0, 1.0, 1.0),
            p(scenario_pair_rotation, 1.0, 2.0, 1.0),
            p(scenario_pair_rotation, 1.0, -2.0, 1.0),
            p(scenario_dipole_translation, 1.0, 1.0),
            p(scenario_dipole_translation, 2.0, 1.0),
            p(scenario_dipole_translation, 1.0, 2.0),
            p(scenario_halfplane_drift, 1.0, 1.0),
            p(scenario_halfplane_drift, -1.0, 1.0),
            p(scenario_halfplane_drift, 1.0, 2.0),
            scenario_close_pair_rotation,
            check_grobli,
        ],
        "conservation": [p(check_conservation, run) for run in CONSERVATION_RUNS],
        "bifurcation": [
            check_golden_values,
            p(check_cusp_by_simulation, -1),
            p(check_cusp_by_simulation, 1),
            p(check_regime_flip, -1),
            p(check_regime_flip, 1),
            p(check_cusp_exponent, -1),
        ],
        "oracle": [check_velocity_oracle],
    }
    if name == "all":
        return [task for suite in VALID_SUITES[:-1] for task in tasks[suite]]
    return tasks[name]


def run_suite(name: Suite = "all", jobs: int = 1) -> list[ScenarioReport]:
    """Run a verification suite; reports come back in a fixed order.

    With ``jobs > 1`` the checks run in a process pool.
    """
    if name not in VALID_SUITES:
        msg = f"Unknown suite `{name}`, use one of {VALID_SUITES}"
        raise UsageError(msg)
    tasks = _suite_tasks(name)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(_as_list, tasks))
    else:
        results = [_as_list(task) for task in tasks]
    return [report for group in results for report in group]
