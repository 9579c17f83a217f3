"""mobokit: multi-objective Bayesian optimization under heteroscedastic noise."""

__version__ = "0.1.0"

from .core import (Archive, DimensionSpec, ObservationRecord, RngStream,
                   SearchSpace, merge_observation, sample_uniform)
from .optimizer import MODES, RunConfig, run, run_macro

__all__ = [
    "Archive",
    "DimensionSpec",
    "ObservationRecord",
    "RngStream",
    "SearchSpace",
    "merge_observation",
    "sample_uniform",
    "MODES",
    "RunConfig",
    "run",
    "run_macro",
    "__version__",
]
