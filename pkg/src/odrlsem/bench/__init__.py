"""Benchmark fixtures, the built-in suite, reference oracles and the suite runner."""
