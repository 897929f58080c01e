"""Finite sections of equivariant chain complexes, their spectra, and the
symbol-side oracles they converge to."""

from ._core import *  # noqa: F401,F403
from ._core import Error, run_experiment

__all__ = [name for name in dir() if not name.startswith("_")]


def run(name, config_text, threads=1, base_dir="."):
    """Run one experiment and raise if any assertion failed."""
    result = run_experiment(name, config_text, threads, base_dir)
    if not result["passed"]:
        failed = [a["name"] for a in result["assertions"] if not a["passed"]]
        raise AssertionError(f"{name}: failed {', '.join(failed)}")
    return result
