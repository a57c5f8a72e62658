"""goldvortex - Golden-ratio bifurcations of point vortices.

This module provides utility functions and exceptions used throughout the package.
"""

from __future__ import annotations

import importlib.metadata
import re
import warnings
from typing import NamedTuple

import numpy as np


class UsageError(ValueError):
    """Raised when an operation is called outside its preconditions."""


class DomainViolationError(ValueError):
    """Raised when a vortex system or state is invalid for its domain."""


def parse_float_list(text: str, *, name: str = "value") -> list[float]:
    """Parse a comma separated list of reals, e.g. ``'1,-1'``."""
    items = [item.strip() for item in text.split(",")]
    try:
        return [float(item) for item in items]
    except ValueError:
        msg = f"Invalid {name} list: '{text}', expected comma separated numbers"
        raise UsageError(msg) from None


def parse_positions(text: str) -> list[tuple[float, float]]:
    """Parse the ``x:y,x:y,...`` position grammar."""
    number = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
    pair = re.compile(rf"^\s*({number})\s*:\s*({number})\s*$")
    positions = []
    for item in text.split(","):
        match = pair.match(item)
        if match is None:
            msg = f"Invalid position '{item}' in '{text}', expected `x:y` pairs"
            raise UsageError(msg)
        positions.append((float(match.group(1)), float(match.group(2))))
    return positions


class Grid(NamedTuple):
    """A parsed grid of reals."""

    values: list[float]
    # `True` when given as `start:stop:num` rather than an explicit list
    spaced: bool = False


def parse_grid(text: str) -> Grid:
    """Parse either ``a,b,c`` or ``start:stop:num`` into a grid of reals."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:  # noqa: PLR2004
            msg = f"Invalid grid '{text}', expected `start:stop:num`"
            raise UsageError(msg)
        try:
            start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            msg = f"Invalid grid '{text}', expected `start:stop:num`"
            raise UsageError(msg) from None
        if num < 1:
            msg = f"Invalid grid '{text}', needs at least one point"
            raise UsageError(msg)
        return Grid([float(v) for v in np.linspace(start, stop, num)], spaced=True)
    return Grid(parse_float_list(text, name="grid"))


def _simple_warning_format(
    message: Warning | str,
    category: type[Warning],  # noqa: ARG001
    filename: str,
    lineno: int,
    line: str | None = None,  # noqa: ARG001
) -> str:  # pragma: no cover
    """Format warnings without code context."""
    return (
        f"---------------------\n"
        f"⚠️  *** WARNING *** ⚠️\n"
        f"{message}\n"
        f"Location: {filename}:{lineno}\n"
        f"---------------------\n"
    )


def warn(
    message: str | Warning,
    category: type[Warning] = UserWarning,
    stacklevel: int = 1,
) -> None:
    """Emit a warning with a custom format specific to this package."""
    original_format = warnings.formatwarning
    warnings.formatwarning = _simple_warning_format
    try:
        warnings.warn(message, category, stacklevel=stacklevel + 1)
    finally:
        warnings.formatwarning = original_format


def get_package_version(package_name: str) -> str | None:
    """Returns the version of the given package.

    Parameters
    ----------
    package_name
        The name of the package to find the version of.

    Returns
    -------
    The version of the package, or None if the package is not found.

    """
    try:
        return importlib.metadata.version(package_name)
    except importlib.metadata.PackageNotFoundError:
        return None
