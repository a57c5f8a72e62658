"""goldvortex - Golden-ratio bifurcations of point vortices.

Static SVG pictures of trajectories.
"""

from __future__ import annotations

import itertools
from pathlib import Path
from typing import NamedTuple

import numpy as np
from matplotlib.figure import Figure

from goldvortex._integrate import Trajectory
from goldvortex.utils import UsageError

# Vortex 1 and 2 get orange and aquamarine, the rest cycle the default colors
DEFAULT_PALETTE = ("orange", "aquamarine")
_MARKERS = {
    "vertical-alignment": "o",
    "instantaneous-stop": "*",
    "near-collision": "x",
}


class PlotOptions(NamedTuple):
    """Appearance of an SVG trajectory plot."""

    palette: tuple[str, ...] = DEFAULT_PALETTE
    line_width: float = 1.5
    margin: float = 0.05
    width_inches: float = 6.0
    height_inches: float = 4.5
    title: str | None = None
    show_events: bool = True


def _colors(palette: tuple[str, ...]) -> itertools.chain[str]:
    return itertools.chain(palette, (f"C{k}" for k in itertools.count(2)))


def plot_svg(
    traj: Trajectory,
    path: str | Path,
    options: PlotOptions | None = None,
) -> Path:
    """Draw one line per vortex, the wall for half-plane runs and event markers.

    SVG groups carry the ids ``vortex-<n>``, ``boundary`` and ``events-<kind>``.
    """
    options = options or PlotOptions()
    if traj.n_samples == 0:
        msg = "Cannot plot an empty trajectory."
        raise UsageError(msg)
    path = Path(path)
    fig = Figure(figsize=(options.width_inches, options.height_inches))
    ax = fig.add_subplot()
    colors = _colors(options.palette)
    for j in range(traj.system.n):
        (line,) = ax.plot(
            traj.positions[:, j, 0],
            traj.positions[:, j, 1],
            color=next(colors),
            linewidth=options.line_width,
            label=f"Γ{j + 1} = {traj.system.strengths[j]:g}",
        )
        line.set_gid(f"vortex-{j + 1}")
    if traj.system.half_plane:
        ax.axhline(0.0, color="black", linewidth=1.0).set_gid("boundary")
    if options.show_events:
        for kind, marker in _MARKERS.items():
            events = traj.events_of(kind)  # type: ignore[arg-type]
            if not events:
                continue
            points = np.array(
                [e.state.positions[i] for e in events for i in set(e.vortex_indices)],
            )
            markers = ax.scatter(
                points[:, 0],
                points[:, 1],
                marker=marker,
                color="black",
                zorder=3,
                label=kind,
            )
            markers.set_gid(f"events-{kind}")
    ax.set_aspect("equal", adjustable="datalim")
    ax.margins(options.margin)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if options.title:
        ax.set_title(options.title)
    ax.legend(loc="best", fontsize="small")
    try:
        fig.savefig(path, format="svg")
    except OSError as e:
        msg = f"Cannot write plot to `{path}`: {e}"
        raise OSError(msg) from e
    return path
