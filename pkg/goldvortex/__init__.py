"""goldvortex - Golden-ratio bifurcations of point vortices."""

from goldvortex._bifurcation import (
    PHI,
    BifurcationResult,
    Regime,
    classify_regime,
    critical_W,
    cross_ratio,
    encounter_trajectory,
    find_cusp_by_simulation,
    interaction_W,
    interaction_W_general,
    stop_cross_ratio,
    stop_height_ratio,
)
from goldvortex._core import hamiltonian, invariants, velocity, velocity_fd_oracle
from goldvortex._integrate import (
    IntegratorConfig,
    SimulationError,
    Trajectory,
    conservation_report,
    integrate,
)
from goldvortex._io import read_config, read_trajectory_csv, write_trajectory_csv
from goldvortex._plot import plot_svg
from goldvortex._scenarios import run_suite
from goldvortex._version import __version__
from goldvortex.definitions import VortexState, VortexSystem

__all__ = [
    "PHI",
    "BifurcationResult",
    "IntegratorConfig",
    "Regime",
    "SimulationError",
    "Trajectory",
    "VortexState",
    "VortexSystem",
    "__version__",
    "classify_regime",
    "conservation_report",
    "critical_W",
    "cross_ratio",
    "encounter_trajectory",
    "find_cusp_by_simulation",
    "hamiltonian",
    "integrate",
    "interaction_W",
    "interaction_W_general",
    "invariants",
    "plot_svg",
    "read_config",
    "read_trajectory_csv",
    "run_suite",
    "stop_cross_ratio",
    "stop_height_ratio",
    "velocity",
    "velocity_fd_oracle",
    "write_trajectory_csv",
]
