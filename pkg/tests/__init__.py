"""goldvortex tests."""
