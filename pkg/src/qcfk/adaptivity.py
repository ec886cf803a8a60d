"""Adaptive growth of the atomistic region driven by the local indicators.

The loop keeps a global tolerance ``tau_gl`` and a moving local threshold
``tau_at``.  Each pass solves the blended model on the current partition,
stops if the sharp estimate ``eta1`` is already below ``tau_gl``, and
otherwise divides ``tau_at`` by ``tau_div`` and flags every free atom whose
local indicator (its own residual term plus half of each adjacent bond
term) reaches the threshold.  Flagged atoms switch to atomistic treatment
and never switch back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .banded import Array
from .estimators import EstimatorReport, estimate, exact_goal_error, solve_dual_pair
from .model import ChainParams, interval_partition, make_partition


@dataclass(frozen=True)
class AdaptConfig:
    """Loop controls; ``symmetrize`` widens every mark set to a symmetric
    interval around the defect, ``use_gamma`` picks the balanced bond split
    for the marking indicator."""

    tau_gl: float
    tau_div: float = 10.0
    max_iterations: int = 50
    symmetrize: bool = False
    use_gamma: bool = False

    def __post_init__(self):
        if self.tau_gl <= 0.0:
            raise ValueError(f"tau_gl must be positive, got {self.tau_gl}")
        if self.tau_div <= 1.0:
            raise ValueError(f"tau_div must exceed 1, got {self.tau_div}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class IterationRecord:
    """One solve of the loop: the active threshold, the region it ran on,
    and the global estimate it produced."""

    iteration: int
    k: int | None
    n_atomistic: int
    tau_at: float
    eta1: float
    eta2: float


@dataclass(frozen=True)
class AdaptTrace:
    """Full history of one adaptive run.

    ``status`` is "converged" (eta1 met tau_gl), "stalled" (threshold
    dropped but nothing new was marked), or "max-iterations".
    """

    m: int
    config: AdaptConfig
    records: tuple[IterationRecord, ...]
    status: str
    final_atomistic: Array = field(repr=False)

    @property
    def final_eta1(self) -> float:
        return self.records[-1].eta1

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "status": self.status,
            "iterations": [
                {
                    "iteration": r.iteration,
                    "k": r.k,
                    "tau_at": r.tau_at,
                    "eta1": r.eta1,
                }
                for r in self.records
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


def mark_atoms(report: EstimatorReport, tau_at: float) -> Array:
    """Atom ids whose local indicator reaches the threshold."""
    ids = np.arange(-report.m + 3, report.m - 1)
    return ids[report.eta2_total() >= tau_at]


def _interval_k(atoms: Array, m: int) -> int | None:
    """Half-width K if the set is exactly -K+1 .. K, else None."""
    if atoms.size == 0:
        return 0
    k = int(atoms.max())
    if atoms[0] == -k + 1 and atoms.size == 2 * k:
        return k
    return None


def run_adaptive(params: ChainParams, config: AdaptConfig) -> AdaptTrace:
    """Grow the atomistic region until eta1 drops below tau_gl."""
    atoms = np.empty(0, dtype=int)
    records: list[IterationRecord] = []
    status = "max-iterations"
    for it in range(1, config.max_iterations + 1):
        part = make_partition(params, atomistic=atoms)
        pair = solve_dual_pair(params, part)
        report = estimate(pair, use_gamma=config.use_gamma)
        tau_shown = config.tau_gl / config.tau_div ** (it - 1)
        records.append(
            IterationRecord(
                iteration=it,
                k=_interval_k(atoms, params.m),
                n_atomistic=int(atoms.size),
                tau_at=tau_shown,
                eta1=report.eta1,
                eta2=report.eta2,
            )
        )
        if report.eta1 <= config.tau_gl:
            status = "converged"
            break
        marked = mark_atoms(report, config.tau_gl / config.tau_div**it)
        grown = np.union1d(atoms, marked)
        if config.symmetrize and grown.size:
            k = int(np.max(np.maximum(grown, 1 - grown)))
            grown = np.arange(-k + 1, k + 1)
        if grown.size == atoms.size:
            status = "stalled"
            break
        atoms = grown
    return AdaptTrace(
        m=params.m,
        config=config,
        records=tuple(records),
        status=status,
        final_atomistic=atoms,
    )


@dataclass(frozen=True)
class FixedKResult:
    """Estimates (and optionally the exact error) on the interval region
    -K+1 .. K."""

    m: int
    k: int
    report: EstimatorReport
    q_error: float | None

    @property
    def abs_q_error(self) -> float | None:
        return None if self.q_error is None else abs(self.q_error)

    def efficiency(self, value: float) -> float | None:
        if self.q_error in (None, 0.0):
            return None
        return value / abs(self.q_error)


def fixed_k_run(
    params: ChainParams,
    k: int,
    want_exact: bool = True,
    use_gamma: bool = False,
) -> FixedKResult:
    """One estimate on the fixed interval region of half-width K."""
    part = interval_partition(params, k)
    pair = solve_dual_pair(params, part)
    report = estimate(pair, use_gamma=use_gamma)
    q_error = None
    if want_exact:
        q_error, _ = exact_goal_error(params, part, pair)
    return FixedKResult(m=params.m, k=k, report=report, q_error=q_error)
