"""Randomized property suites and instance generators."""
