"""Blended atomistic/continuum chain models with goal-oriented error bounds.

The package solves a harmonic NN/NNN chain pinned to substrate wells with
one defect bond, replaces far-field regions by their local continuum
counterpart, and estimates the modeling error committed in the defect
opening.  ``adaptivity.run_adaptive`` grows the exactly-treated region until
the estimated error meets a tolerance.
"""

from .adaptivity import (
    AdaptConfig,
    AdaptTrace,
    FixedKResult,
    fixed_k_run,
    mark_atoms,
    run_adaptive,
)
from .banded import BandedFactor, BandedSpdMatrix, NotPositiveDefiniteError
from .estimators import (
    DualPair,
    EstimatorReport,
    estimate,
    eta1,
    eta2,
    exact_goal_error,
    lemma1_check,
    solve_dual_pair,
)
from .model import (
    ChainParams,
    LinearSystem,
    Partition,
    QuadraticModel,
    assemble,
    energy_direct,
    interpolate,
    interval_partition,
    make_partition,
    misfit_segment_energy,
    reduce_system,
    restrict,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptConfig",
    "AdaptTrace",
    "BandedFactor",
    "BandedSpdMatrix",
    "ChainParams",
    "DualPair",
    "EstimatorReport",
    "FixedKResult",
    "LinearSystem",
    "NotPositiveDefiniteError",
    "Partition",
    "QuadraticModel",
    "assemble",
    "energy_direct",
    "estimate",
    "eta1",
    "eta2",
    "exact_goal_error",
    "fixed_k_run",
    "interpolate",
    "interval_partition",
    "lemma1_check",
    "make_partition",
    "mark_atoms",
    "misfit_segment_energy",
    "reduce_system",
    "restrict",
    "run_adaptive",
    "solve_dual_pair",
    "__version__",
]
