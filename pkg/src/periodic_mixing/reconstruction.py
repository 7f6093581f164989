"""Inverting the periodic compressor.

Times ``t`` with the same phase ``t mod p`` all observe the same unknown
vector ``x(t mod p)``, each through the row ``c(t mod m)``.  Reconstruction
therefore splits into ``p`` independent linear systems, one per phase.
"""
import itertools
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import linalg
from .exceptions import BudgetError, InconsistentStream, NotLossless, PreconditionError
from .number_theory import lcm
from .signals import CompressedStream, MixingSignal, PeriodicVectorSignal

DEFAULT_SUBSET_BUDGET = 10**6
FLOAT_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class RichnessReport:
    rich: bool
    witness: Optional[Tuple[int, ...]]
    min_gramian_eigenvalue: Optional[float]
    subsets_checked: int


def check_richness(c: MixingSignal, n: Optional[int] = None, budget: int = DEFAULT_SUBSET_BUDGET) -> RichnessReport:
    """Test whether every ``n`` vectors out of one period of ``c`` span ``R^n``.

    All ``C(m, n)`` index subsets are checked.  In exact mode the verdict is a
    rank computation and ``min_gramian_eigenvalue`` is ``None``; in float mode
    the smallest eigenvalue over all subset Gramians ``C C^T`` is reported.
    The period is taken as ``c(0), ..., c(m-1)``; ``c(m)`` repeats ``c(0)``.
    """
    n = c.n if n is None else n
    if n != c.n:
        raise PreconditionError(f"mixer dimension {c.n} does not match n={n}")
    m = c.m
    if m < n:
        raise PreconditionError(f"richness needs m >= n, got m={m}, n={n}")
    total = math.comb(m, n)
    if total > budget:
        raise BudgetError(f"C({m}, {n}) = {total} subsets exceeds the budget of {budget}")

    min_eig = None if c.exact else math.inf
    checked = 0
    for subset in itertools.combinations(range(m), n):
        block = c.samples[list(subset)]
        checked += 1
        if c.exact:
            if linalg.exact_rank(block) < n:
                return RichnessReport(False, subset, None, checked)
        else:
            gram = block.T @ block
            eig = float(np.linalg.eigvalsh(gram)[0])
            min_eig = min(min_eig, eig)
            if linalg.float_rank(block) < n:
                return RichnessReport(False, subset, min_eig, checked)
    return RichnessReport(True, None, min_eig, checked)


@dataclass(frozen=True)
class PhasePlan:
    phase: int
    times: Tuple[int, ...]
    rows: np.ndarray = field(repr=False)
    rank: int
    condition: Optional[float]


@dataclass(frozen=True)
class ReconstructionPlan:
    n: int
    m: int
    p: int
    horizon: int
    phases: Tuple[PhasePlan, ...]
    uncovered_entries: Tuple[Tuple[int, int], ...]

    @property
    def feasible(self) -> bool:
        return all(ph.rank == self.n for ph in self.phases)

    @property
    def ranks(self):
        return [ph.rank for ph in self.phases]

    def to_dict(self):
        """JSON-ready diagnostics; channels are 1-based, phases 0-based."""
        return {
            "feasible": self.feasible,
            "n": self.n,
            "m": self.m,
            "p": self.p,
            "horizon": self.horizon,
            "per_phase": [
                {"phase": ph.phase, "times": list(ph.times), "rank": ph.rank} for ph in self.phases
            ],
            "uncovered": [[ch, ph] for ch, ph in self.uncovered_entries],
        }


def _condition(rows):
    if rows.size == 0:
        return None
    s = np.linalg.svd(np.asarray(rows, dtype=float), compute_uv=False)
    if s[-1] == 0.0 or len(s) < rows.shape[1]:
        return math.inf
    return float(s[0] / s[-1])


def plan_reconstruction(c: MixingSignal, p: int, horizon: int) -> ReconstructionPlan:
    """Group the times in ``[0, horizon)`` by phase and rank each phase system.

    Rows repeat with period ``lcm(m, p)``, so any horizon at least that long
    gives the final verdict.  Entry ``(i, tau)`` (channel ``i`` 1-based) is
    uncovered when ``e_i`` is outside the row space of phase ``tau``.
    """
    if p < 1:
        raise PreconditionError("p must be >= 1")
    if horizon < 1:
        raise PreconditionError("horizon must be >= 1")
    n, m = c.n, c.m
    phases = []
    uncovered = []
    eye = linalg.as_exact(np.eye(n, dtype=int)) if c.exact else np.eye(n)
    for tau in range(p):
        times = tuple(range(tau, horizon, p))
        rows = c.samples[[t % m for t in times]] if times else c.samples[:0]
        r = linalg.rank(rows) if times else 0
        phases.append(PhasePlan(tau, times, rows, r, _condition(rows)))
        if r < n:
            for i in range(n):
                if not times or not linalg.in_row_space(rows, eye[i]):
                    uncovered.append((i + 1, tau))
    uncovered.sort()
    return ReconstructionPlan(n, m, p, horizon, tuple(phases), tuple(uncovered))


def minimal_horizon(m: int, p: int) -> int:
    return lcm(m, p)


def reconstruct(y: CompressedStream, c: MixingSignal, p: int, plan: Optional[ReconstructionPlan] = None):
    """Recover the ``p``-periodic signal that produced ``y`` under mixer ``c``.

    Exact streams are solved by rational Gaussian elimination and must be
    consistent to the last bit.  Float streams are solved per phase by least
    squares; the worst absolute residual must stay below ``1e-9`` (scaled by
    ``max(1, max|y|)``).

    Use :func:`reconstruct_with_residual` to also receive the residual.
    """
    return reconstruct_with_residual(y, c, p, plan)[0]


def reconstruct_with_residual(y: CompressedStream, c: MixingSignal, p: int, plan=None):
    horizon = len(y)
    if plan is None:
        plan = plan_reconstruction(c, p, horizon)
    if not plan.feasible:
        raise NotLossless(
            f"{len(plan.uncovered_entries)} entries of x are never resolved "
            f"(n={plan.n}, m={plan.m}, p={p}, horizon={horizon})",
            plan.uncovered_entries,
        )
    exact = y.exact and c.exact
    n = c.n
    if exact:
        out = np.empty((p, n), dtype=object)
    else:
        out = np.empty((p, n), dtype=float)
    worst = 0.0
    scale = 1.0 if exact or horizon == 0 else max(1.0, float(np.max(np.abs(np.asarray(y.values, dtype=float)))))
    for ph in plan.phases:
        rhs = y.values[list(ph.times)]
        if exact:
            sol, consistent = linalg.exact_solve(ph.rows, rhs)
            if not consistent:
                raise InconsistentStream(f"phase {ph.phase}: stream is not produced by any x", residual=None)
            out[ph.phase] = sol
        else:
            sol, res = linalg.lstsq_solve(ph.rows, np.asarray(rhs, dtype=float))
            worst = max(worst, res)
            out[ph.phase] = sol
    if not exact and worst > FLOAT_RESIDUAL_TOL * scale:
        raise InconsistentStream(f"least-squares residual {worst:.3e} exceeds tolerance", residual=worst)
    kind = "exact-rational" if exact else "float"
    return PeriodicVectorSignal(out, value_kind=kind), (0.0 if exact else worst)
