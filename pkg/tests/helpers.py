"""goldvortex tests."""

from __future__ import annotations

import math
from pathlib import Path

from goldvortex.definitions import VortexState, VortexSystem

REPO_ROOT = Path(__file__).parent.parent

PHI = (1 + math.sqrt(5)) / 2


def make(
    strengths: list[float],
    positions: list[tuple[float, float]],
    domain: str = "plane",
) -> tuple[VortexSystem, VortexState]:
    """A validated system and its state in one call."""
    system = VortexSystem.create(strengths, domain)  # type: ignore[arg-type]
    return system, VortexState.from_positions(positions)
