"""goldvortex - Golden-ratio bifurcations of point vortices.

Types and definitions for domains, vortex systems, states and invariants.
"""

from __future__ import annotations

import math
from typing import Iterable, Literal, NamedTuple, Sequence, get_args

import numpy as np

from goldvortex.utils import DomainViolationError

Domain = Literal["plane", "half-plane"]
EventKind = Literal["vertical-alignment", "instantaneous-stop", "near-collision"]
Termination = Literal["time-end", "near-collision", "step-failure"]
RegimeTag = Literal["escape", "kink-or-leapfrog", "cusp", "smooth-pass"]
Method = Literal["algebraic", "simulation"]

VALID_DOMAINS = get_args(Domain)

# Order in which invariants appear in reports and CSV columns
INVARIANT_NAMES = ("H", "P", "Q", "I", "W")


def validate_domain(domain: str) -> None:
    """Check if a domain tag is valid."""
    if domain not in VALID_DOMAINS:
        msg = f"Invalid domain: `{domain}`, use one of `{VALID_DOMAINS}`"
        raise DomainViolationError(msg)


class VortexSystem(NamedTuple):
    """Vortex strengths and the domain they live in."""

    strengths: tuple[float, ...]
    domain: Domain = "plane"

    @classmethod
    def create(
        cls,
        strengths: Iterable[float],
        domain: Domain = "plane",
    ) -> VortexSystem:
        """Build and validate a system."""
        system = cls(tuple(float(g) for g in strengths), domain)
        system.validate()
        return system

    @property
    def n(self) -> int:
        """Number of vortices."""
        return len(self.strengths)

    @property
    def half_plane(self) -> bool:
        """Whether the system lives in the upper half-plane."""
        return self.domain == "half-plane"

    @property
    def gammas(self) -> np.ndarray:
        """Strengths as a float array."""
        return np.asarray(self.strengths, dtype=np.float64)

    def validate(self) -> None:
        """Raise `DomainViolationError` unless N >= 1 and every strength is nonzero."""
        validate_domain(self.domain)
        if self.n == 0:
            msg = "A vortex system needs at least one vortex."
            raise DomainViolationError(msg)
        for j, gamma in enumerate(self.strengths):
            if gamma == 0 or not math.isfinite(gamma):
                msg = (
                    f"Strength of vortex {j + 1} must be finite and nonzero,"
                    f" got {gamma}"
                )
                raise DomainViolationError(msg)

    def negated(self) -> VortexSystem:
        """The same system with all strengths negated, i.e. running backward in time."""
        return VortexSystem(tuple(-g for g in self.strengths), self.domain)


class VortexState(NamedTuple):
    """Positions of N vortices at an instant, as a read-only (N, 2) array."""

    positions: np.ndarray

    @classmethod
    def from_positions(
        cls,
        positions: Sequence[Sequence[float]] | np.ndarray,
    ) -> VortexState:
        """Copy positions into a read-only float array of shape (N, 2)."""
        arr = np.array(positions, dtype=np.float64).reshape(-1, 2)
        arr.setflags(write=False)
        return cls(arr)

    @property
    def n(self) -> int:
        """Number of vortices."""
        return self.positions.shape[0]

    @property
    def x(self) -> np.ndarray:
        """Horizontal coordinates."""
        return self.positions[:, 0]

    @property
    def y(self) -> np.ndarray:
        """Vertical coordinates."""
        return self.positions[:, 1]

    def shifted(self, dx: float = 0.0, dy: float = 0.0) -> VortexState:
        """Translate every vortex by (dx, dy)."""
        return VortexState.from_positions(self.positions + np.array([dx, dy]))

    def as_pairs(self) -> list[list[float]]:
        """Positions as nested Python lists, e.g. for JSON."""
        return [[float(x), float(y)] for x, y in self.positions]


class Invariants(NamedTuple):
    """Conserved quantities of a state; absent ones are `None`."""

    H: float
    P: float
    Q: float | None = None
    I: float | None = None  # noqa: E741
    W: float | None = None

    def as_dict(self) -> dict[str, float]:
        """Present invariants in canonical order."""
        return {k: v for k, v in zip(INVARIANT_NAMES, self) if v is not None}


def invariant_names(system: VortexSystem) -> tuple[str, ...]:
    """Names of the invariants defined for a system, in canonical order."""
    if not system.half_plane:
        return ("H", "P", "Q", "I")
    if system.n == 2:  # noqa: PLR2004
        return ("H", "P", "W")
    return ("H", "P")
