"""goldvortex - Golden-ratio bifurcations of point vortices.

Hamiltonians, closed-form velocity fields and conserved quantities of point
vortices in the plane and in the upper half-plane.

The plane uses the Green's function ``(1/2π) ln|z|``, so that
``H = -(1/2π) Σ_{j<k} Γ_j Γ_k ln|z_j - z_k|``. The half-plane adds a reflected
vortex of opposite strength at ``(x_k, -y_k)`` for every vortex.

All kernels accept positions of shape ``(..., N, 2)`` so that whole trajectories
are evaluated at once.
"""

from __future__ import annotations

import math

import numpy as np

from goldvortex.definitions import Invariants, VortexState, VortexSystem
from goldvortex.utils import DomainViolationError, UsageError

FOUR_PI = 4.0 * math.pi
TWO_PI = 2.0 * math.pi


class OracleInvalidError(ValueError):
    """Raised when the finite-difference step is too large for a state."""


def _differences(positions: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = positions[..., 0]
    y = positions[..., 1]
    dx = x[..., :, None] - x[..., None, :]
    dy = y[..., :, None] - y[..., None, :]
    sy = y[..., :, None] + y[..., None, :]
    return dx, dy, sy


def hamiltonian_kernel(
    gammas: np.ndarray,
    positions: np.ndarray,
    *,
    half_plane: bool,
) -> np.ndarray:
    """Hamiltonian of ``positions`` with shape ``(..., N, 2)``, no validation."""
    n = gammas.shape[0]
    ju, ku = np.triu_indices(n, 1)
    gg = gammas[ju] * gammas[ku]
    dx, dy, sy = _differences(positions)
    r2 = (dx**2 + dy**2)[..., ju, ku]
    if not half_plane:
        return -np.sum(gg * np.log(r2), axis=-1) / FOUR_PI
    rb2 = (dx**2 + sy**2)[..., ju, ku]
    self_term = np.sum(gammas**2 * np.log(2.0 * positions[..., 1]), axis=-1)
    return (self_term - np.sum(gg * np.log(r2 / rb2), axis=-1)) / FOUR_PI


def velocity_kernel(
    gammas: np.ndarray,
    positions: np.ndarray,
    *,
    half_plane: bool,
) -> np.ndarray:
    """Velocities for ``positions`` with shape ``(..., N, 2)``, no validation."""
    n = gammas.shape[0]
    dx, dy, sy = _differences(positions)
    r2 = np.where(np.eye(n, dtype=bool), np.inf, dx**2 + dy**2)
    u = -np.sum(gammas * dy / r2, axis=-1) / TWO_PI
    v = np.sum(gammas * dx / r2, axis=-1) / TWO_PI
    if half_plane:
        # the k == j image term is the self-induced drift Γ_j / (4π y_j)
        rb2 = dx**2 + sy**2
        u = u + np.sum(gammas * sy / rb2, axis=-1) / TWO_PI
        v = v - np.sum(gammas * dx / rb2, axis=-1) / TWO_PI
    return np.stack([u, v], axis=-1)


def interaction_w_kernel(
    gamma1: float,
    gamma2: float,
    hamiltonian: np.ndarray | float,
    impulse: np.ndarray | float,
) -> np.ndarray:
    """``|P/Γ|^(1+λ²) exp(-4πH/Γ²)`` with ``Γ = Γ1`` and ``λ = Γ2/Γ1``."""
    lam = gamma2 / gamma1
    ratio = np.abs(np.asarray(impulse) / gamma1)
    scaled_energy = FOUR_PI * np.asarray(hamiltonian) / gamma1**2
    return ratio ** (1.0 + lam**2) * np.exp(-scaled_energy)


def validate_state(system: VortexSystem, state: VortexState) -> None:
    """Raise `DomainViolationError` unless ``state`` is valid for ``system``."""
    positions = state.positions
    if positions.shape != (system.n, 2):
        msg = (
            f"State has {positions.shape[0]} positions but the system has"
            f" {system.n} vortices."
        )
        raise DomainViolationError(msg)
    if not np.all(np.isfinite(positions)):
        msg = f"State has non-finite coordinates: {positions.tolist()}"
        raise DomainViolationError(msg)
    if system.half_plane and np.any(positions[:, 1] <= 0):
        j = int(np.argmin(positions[:, 1]))
        msg = (
            f"Vortex {j + 1} at y = {positions[j, 1]} is not in the open"
            " upper half-plane."
        )
        raise DomainViolationError(msg)
    if system.n > 1:
        dx, dy, _ = _differences(positions)
        r2 = dx**2 + dy**2
        ju, ku = np.triu_indices(system.n, 1)
        coincident = r2[ju, ku] == 0
        if np.any(coincident):
            k = int(np.argmax(coincident))
            msg = f"Vortices {ju[k] + 1} and {ku[k] + 1} coincide."
            raise DomainViolationError(msg)


def hamiltonian(system: VortexSystem, state: VortexState) -> float:
    """The Hamiltonian of ``state``."""
    validate_state(system, state)
    return float(
        hamiltonian_kernel(
            system.gammas,
            state.positions,
            half_plane=system.half_plane,
        ),
    )


def velocity(system: VortexSystem, state: VortexState) -> np.ndarray:
    """Velocities ``(ẋ_j, ẏ_j)`` as an ``(N, 2)`` array."""
    validate_state(system, state)
    return velocity_kernel(system.gammas, state.positions, half_plane=system.half_plane)


def velocity_fd_oracle(
    system: VortexSystem,
    state: VortexState,
    h: float = 1e-6,
) -> np.ndarray:
    """Velocities from central differences of the Hamiltonian.

    Uses ``Γ_j ẋ_j = ∂H/∂y_j`` and ``Γ_j ẏ_j = -∂H/∂x_j``. Only meant as a
    test oracle for `velocity`.
    """
    validate_state(system, state)
    if not h > 0:
        msg = f"Finite-difference step must be positive, got {h}"
        raise OracleInvalidError(msg)
    positions = state.positions
    clearance = math.inf
    if system.n > 1:
        dx, dy, _ = _differences(positions)
        ju, ku = np.triu_indices(system.n, 1)
        clearance = float(np.sqrt(np.min((dx**2 + dy**2)[ju, ku])))
    if system.half_plane:
        clearance = min(clearance, float(np.min(positions[:, 1])))
    if clearance <= 10 * h:
        msg = (
            f"Finite-difference step {h} is too large: the closest singularity"
            f" is {clearance} away, need more than {10 * h}."
        )
        raise OracleInvalidError(msg)

    # Build all 4N shifted copies and evaluate them in one call
    n = system.n
    shifts = np.zeros((n, 2, 2, n, 2))
    for j in range(n):
        for c in range(2):
            shifts[j, c, 0, j, c] = h
            shifts[j, c, 1, j, c] = -h
    energies = hamiltonian_kernel(
        system.gammas,
        positions + shifts,
        half_plane=system.half_plane,
    )
    grad = (energies[..., 0] - energies[..., 1]) / (2 * h)  # (N, 2): dH/dx, dH/dy
    gammas = system.gammas
    return np.stack([grad[:, 1] / gammas, -grad[:, 0] / gammas], axis=-1)


def vorticity_center(system: VortexSystem, state: VortexState) -> tuple[float, float]:
    """The Γ-weighted centroid ``Σ Γ_j z_j / Σ Γ_j``."""
    validate_state(system, state)
    total = float(np.sum(system.gammas))
    if total == 0:
        msg = "The vorticity center is undefined when the strengths sum to zero."
        raise UsageError(msg)
    center = system.gammas @ state.positions / total
    return float(center[0]), float(center[1])


def invariant_arrays(
    system: VortexSystem,
    positions: np.ndarray,
) -> dict[str, np.ndarray]:
    """Invariants for positions of shape ``(..., N, 2)``, no validation."""
    gammas = system.gammas
    values = {
        "H": hamiltonian_kernel(gammas, positions, half_plane=system.half_plane),
        "P": positions[..., 1] @ gammas,
    }
    if not system.half_plane:
        values["Q"] = positions[..., 0] @ gammas
        values["I"] = np.sum(positions**2, axis=-1) @ gammas
    elif system.n == 2:  # noqa: PLR2004
        values["W"] = interaction_w_kernel(
            gammas[0],
            gammas[1],
            values["H"],
            values["P"],
        )
    return values


def invariants(system: VortexSystem, state: VortexState) -> Invariants:
    """The conserved quantities defined for ``system`` at ``state``."""
    validate_state(system, state)
    values = invariant_arrays(system, state.positions)
    return Invariants(**{k: float(v) for k, v in values.items()})
