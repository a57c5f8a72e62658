"""goldvortex - Golden-ratio bifurcations of point vortices."""

__version__ = "0.1.0"
