"""Graph-based semi-supervised classification with a robust concave loss."""

from pathlib import Path

from ._core import (
    Error,
    Graph,
    OutOfSampleModel,
    Solution,
    SpectralContext,
    chain_graph,
    condition_bound,
    eigenpairs,
    flip_labels,
    karate_club,
    load_config,
    moons,
    objective,
    predict,
    run_experiment,
    sample_labels,
    sbm,
    solve_belkin,
    solve_pf_robust,
    solve_robust,
    solve_zhou,
)

__all__ = [
    "Error",
    "Graph",
    "OutOfSampleModel",
    "Solution",
    "SpectralContext",
    "chain_graph",
    "condition_bound",
    "eigenpairs",
    "flip_labels",
    "karate_club",
    "load_config",
    "moons",
    "objective",
    "predict",
    "run_config",
    "run_experiment",
    "sample_labels",
    "sbm",
    "solve_belkin",
    "solve_pf_robust",
    "solve_robust",
    "solve_zhou",
]


def run_config(kind, path, threads=1):
    """Run an experiment described by a config file; relative paths resolve against it."""
    path = Path(path)
    return run_experiment(kind, load_config(path), path.parent, threads)
