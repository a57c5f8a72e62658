"""Tests for the interaction parameter, stop configurations and regimes."""

from __future__ import annotations

import math

import numpy as np
import pytest

from goldvortex._bifurcation import (
    CuspDiagnosticError,
    UnresolvedRegimeError,
    aligned_ratio_for_W,
    aligned_state,
    alignment_speed,
    approach_state,
    balance_point,
    classify_regime,
    critical_curve,
    critical_W,
    cross_ratio,
    cusp_exponent_check,
    encounter_trajectory,
    find_cusp_by_simulation,
    interaction_W,
    interaction_W_general,
    stop_cross_ratio,
    stop_height_ratio,
)
from goldvortex._core import velocity
from goldvortex._integrate import IntegratorConfig, integrate
from goldvortex._io import read_config
from goldvortex.definitions import VortexState, VortexSystem
from goldvortex.utils import UsageError

from .helpers import PHI, REPO_ROOT, make


def test_golden_critical_values() -> None:
    dipole = critical_W(-1)
    pair = critical_W(1)
    assert dipole.critical_W == pytest.approx(PHI, rel=1e-12)
    assert pair.critical_W == pytest.approx(1 / PHI, rel=1e-12)
    assert dipole.stop_ratio == pytest.approx(math.sqrt(5) - 2, rel=1e-14)
    assert pair.stop_ratio == pytest.approx(math.sqrt(5) + 2, rel=1e-14)
    assert dipole.cross_ratio_at_stop == pytest.approx(PHI, rel=1e-12)
    assert pair.cross_ratio_at_stop == pytest.approx(PHI, rel=1e-12)
    assert dipole.method == "algebraic"
    assert dipole.residual == 0.0


def test_critical_W_for_unequal_strengths() -> None:
    r = 1 + math.sqrt(2)
    assert stop_height_ratio(0.5) == pytest.approx(r, rel=1e-14)
    expected = (r + 0.5) ** 1.25 / (2**1.25 * r**2)
    assert critical_W(0.5).critical_W == pytest.approx(expected, rel=1e-12)
    assert critical_W(0.5).critical_W == pytest.approx(0.2747, abs=1e-4)


@pytest.mark.parametrize("lam", [-3.0, -0.4, 0.25, 2.0])
def test_stop_cross_ratio_general(lam: float) -> None:
    r = stop_height_ratio(lam)
    assert stop_cross_ratio(lam) == pytest.approx((r + 1) / (lam * (r - 1)), rel=1e-12)
    assert stop_cross_ratio(lam) == pytest.approx(4 * r / (r - 1) ** 2, rel=1e-12)


def test_critical_curve() -> None:
    results = critical_curve([-1, 1])
    assert [res.lam for res in results] == [-1, 1]
    assert results[0].critical_W == pytest.approx(PHI)


def test_cross_ratio() -> None:
    assert cross_ratio(2, 0, 1, -1) == pytest.approx((3 * -1) / (2 * 2))
    with pytest.raises(UsageError, match="undefined"):
        cross_ratio(1, 1, 2, 3)
    with pytest.raises(UsageError, match="undefined"):
        cross_ratio(1, 2, 3, 3)


def test_balance_point() -> None:
    a = balance_point()
    assert a == pytest.approx(PHI**3, rel=1e-14)
    assert 1 / (a - 1) + 1 / (a + 1) == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize("lam", [-1.0, 1.0, 0.5, -2.0])
@pytest.mark.parametrize("ratio", [0.2, 0.7, 1.5, 4.0])
def test_alignment_speed_matches_velocity(lam: float, ratio: float) -> None:
    system, state = aligned_state(lam, ratio, y2=1.0, x=3.0)
    assert velocity(system, state)[0, 0] == pytest.approx(
        alignment_speed(lam, ratio),
        rel=1e-12,
        abs=1e-15,
    )


@pytest.mark.parametrize("lam", [-1.0, 1.0, 0.5])
def test_vortex_stops_at_the_stop_ratio(lam: float) -> None:
    ratio = stop_height_ratio(lam)
    system, state = aligned_state(lam, ratio)
    assert velocity(system, state)[0] == pytest.approx([0, 0], abs=1e-13)


@pytest.mark.parametrize(("lam", "below", "above"), [(-1, 0.2, 0.3), (1, 3.5, 5.0)])
def test_alignment_speed_changes_sign(lam: int, below: float, above: float) -> None:
    assert alignment_speed(lam, below) * alignment_speed(lam, above) < 0


def test_interaction_W_of_aligned_states() -> None:
    for r in [0.1, 0.5, 0.9]:
        system, state = aligned_state(-1, r)
        assert interaction_W(system, state) == pytest.approx((r + 1) ** 2 / (4 * r))
    for r in [1.5, 4.0]:
        system, state = aligned_state(1, r)
        assert interaction_W(system, state) == pytest.approx((r - 1) ** 2 / (4 * r))


def test_interaction_W_is_scale_free() -> None:
    system, state = make([1, -1], [(0.3, 0.4), (-0.2, 1.1)], "half-plane")
    w = interaction_W(system, state)
    scaled = VortexState.from_positions(state.positions * 3.0)
    assert interaction_W(system, scaled) == pytest.approx(w, rel=1e-12)
    assert interaction_W(system, state.shifted(dx=5.0)) == pytest.approx(w, rel=1e-12)
    strong = VortexSystem.create([2.5, -2.5], "half-plane")
    assert interaction_W(strong, state) == pytest.approx(w, rel=1e-12)


def test_interaction_W_preconditions() -> None:
    state = VortexState.from_positions([(0, 1), (0, 2)])
    with pytest.raises(UsageError, match="equal magnitude"):
        interaction_W(VortexSystem.create([1, 0.5], "half-plane"), state)
    with pytest.raises(UsageError, match="half-plane"):
        interaction_W(VortexSystem.create([1, -1]), state)
    with pytest.raises(UsageError, match="nonzero"):
        interaction_W_general(0.0, state)
    assert interaction_W_general(0.5, state) > 0


def test_stop_height_ratio_rejects_zero() -> None:
    with pytest.raises(UsageError, match="finite and nonzero"):
        stop_height_ratio(0)


@pytest.mark.parametrize(("lam", "w"), [(-1, 1.3), (-1, PHI), (-1, 3.0), (1, 0.2), (1, 2.0)])
def test_aligned_ratio_for_W(lam: int, w: float) -> None:
    r = aligned_ratio_for_W(lam, w)
    system, state = aligned_state(lam, r)
    assert interaction_W(system, state) == pytest.approx(w, rel=1e-12)
    assert (r < 1) == (lam < 0)


def test_aligned_ratio_for_W_preconditions() -> None:
    with pytest.raises(UsageError, match="no vertically aligned state"):
        aligned_ratio_for_W(-1, 0.9)
    with pytest.raises(UsageError, match="positive"):
        aligned_ratio_for_W(1, 0.0)
    with pytest.raises(UsageError, match="dipole"):
        aligned_ratio_for_W(0.5, 1.0)


@pytest.mark.parametrize(("w", "separation"), [(0.5, 4.0), (1.3, 4.0), (2.0, 10.0)])
def test_approach_state(w: float, separation: float) -> None:
    system, state = approach_state(-1, w, separation)
    assert interaction_W(system, state) == pytest.approx(w, rel=1e-12)
    (x1, y1), (x2, y2) = state.positions
    assert x2 - x1 == pytest.approx(separation)
    assert y2 - y1 == pytest.approx(1.0)
    assert y1 > 0


def test_approach_state_preconditions() -> None:
    with pytest.raises(UsageError, match="only defined for a dipole"):
        approach_state(1, 0.5, 4.0)
    with pytest.raises(UsageError, match="No dipole state"):
        approach_state(-1, 0.05, 2.0)


def test_aligned_state_preconditions() -> None:
    with pytest.raises(UsageError, match="different from 1"):
        aligned_state(-1, 1.0)
    with pytest.raises(UsageError, match="positive"):
        aligned_state(-1, 0.5, y2=-1.0)


def test_encounter_of_a_kinking_dipole() -> None:
    traj = encounter_trajectory(-1, 1.3)
    assert traj.terminated_by == "time-end"
    assert traj.events_of("vertical-alignment")
    regime = classify_regime(traj, -1)
    assert regime.tag == "kink-or-leapfrog"
    assert regime.evidence["reversals"] > 0
    assert traj.invariant_drift["W"] < 1e-6


def test_encounter_of_a_passing_dipole() -> None:
    traj = encounter_trajectory(-1, 2.5)
    regime = classify_regime(traj, -1)
    assert regime.tag == "smooth-pass"
    assert regime.evidence["reversals"] == 0


@pytest.mark.slow
def test_escaping_dipole() -> None:
    traj = encounter_trajectory(-1, 0.5)
    regime = classify_regime(traj, -1)
    assert regime.tag == "escape"
    assert regime.evidence["height_growth"] > 10


def test_cusp_at_the_critical_W() -> None:
    traj = encounter_trajectory(-1, PHI)
    stops = traj.events_of("instantaneous-stop")
    assert len(stops) == 1
    stop = stops[0]
    assert stop.vortex_indices == (0, 1)
    y1, y2 = stop.state.positions[:, 1]
    assert y1 / y2 == pytest.approx(math.sqrt(5) - 2, rel=1e-6)
    assert classify_regime(traj, -1).tag == "cusp"
    slope = cusp_exponent_check(traj, stop)
    assert slope == pytest.approx(1.5, abs=0.05)


def test_cusp_exponent_needs_a_stop() -> None:
    traj = encounter_trajectory(-1, 1.3)
    alignment = traj.events_of("vertical-alignment")[0]
    with pytest.raises(UsageError, match="instantaneous-stop"):
        cusp_exponent_check(traj, alignment)
    stop = alignment._replace(kind="instantaneous-stop")
    with pytest.raises(CuspDiagnosticError, match="at least 8"):
        cusp_exponent_check(traj, stop, window=1e-3)


def test_classify_needs_a_complete_two_vortex_run() -> None:
    system, state = make([-1, 1], [(-0.5, 1), (0.5, 1)], "half-plane")
    with pytest.warns(UserWarning, match="Run stopped"):
        traj = integrate(system, state, IntegratorConfig(t_end=50, collision_guard=0.5))
    with pytest.raises(UnresolvedRegimeError, match="near-collision"):
        classify_regime(traj, -1)
    system, state = make([1, 1, 1], [(0, 1), (1, 1), (2, 1)], "half-plane")
    traj = integrate(system, state, IntegratorConfig(t_end=0.1))
    with pytest.raises(UsageError, match="two vortices"):
        classify_regime(traj, 1)


def test_classify_without_an_encounter() -> None:
    system, state = make([1, -1], [(0, 0.3), (20, 1.0)], "half-plane")
    traj = integrate(system, state, IntegratorConfig(t_end=0.5))
    with pytest.raises(UnresolvedRegimeError, match="no encounter"):
        classify_regime(traj, -1)


@pytest.mark.slow
@pytest.mark.parametrize(("lam", "bracket"), [(-1, (0.1, 0.4)), (1, (3.0, 6.0))])
def test_find_cusp_by_simulation(lam: int, bracket: tuple[float, float]) -> None:
    result = find_cusp_by_simulation(lam, bracket)
    assert result.method == "simulation"
    assert result.critical_W == pytest.approx(critical_W(lam).critical_W, rel=1e-6)
    assert result.stop_ratio == pytest.approx(stop_height_ratio(lam), rel=1e-6)
    assert result.cross_ratio_at_stop == pytest.approx(PHI, rel=1e-6)
    assert result.event is not None
    assert abs(result.event.diagnostics["ydot_i"]) < 1e-9
    assert np.isfinite(result.residual)


def test_find_cusp_rejects_a_bracket_without_sign_change() -> None:
    with pytest.raises(UsageError, match="does not change sign"):
        find_cusp_by_simulation(-1, (0.3, 0.5))
    with pytest.raises(UsageError, match="dipole"):
        find_cusp_by_simulation(0.5, (1.0, 2.0))


def test_example_dipole_stops_when_aligned() -> None:
    inputs = read_config(REPO_ROOT / "example" / "dipole_cusp.yaml")
    assert interaction_W(inputs.system, inputs.initial) == pytest.approx(PHI, rel=1e-10)
    traj = integrate(inputs.system, inputs.initial, inputs.config)
    assert traj.terminated_by == "time-end"
    [alignment] = traj.events_of("vertical-alignment")
    [stop] = traj.events_of("instantaneous-stop")
    assert stop.time == alignment.time
    assert stop.time == pytest.approx(11.15, abs=0.01)
    assert stop.vortex_indices == (0, 1)
    assert abs(stop.diagnostics["xdot_i"]) < 1e-6
    assert abs(stop.diagnostics["xdot_j"]) > 0.1
    y1, y2 = stop.state.positions[:, 1]
    assert y1 / y2 == pytest.approx(stop_height_ratio(-1), rel=1e-6)


@pytest.mark.parametrize(("w", "tag"), [(0.3, "kink-or-leapfrog"), (0.9, "smooth-pass")])
def test_pair_regimes(w: float, tag: str) -> None:
    traj = encounter_trajectory(1, w)
    assert traj.events_of("vertical-alignment")
    regime = classify_regime(traj, 1)
    assert regime.tag == tag
    assert (regime.evidence["reversals"] > 0) == (tag == "kink-or-leapfrog")
