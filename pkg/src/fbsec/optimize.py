"""Grid sweeps and constrained maximization over the design variables.

The swept variables are the blocklength N (with R0 = B/N tied), the
coding rate R0 at fixed N, and the on-off threshold mu.  Every grid
point is evaluated with the same seed (common random numbers), so sweep
curves carry no seed-induced jitter and the empirical objective is a
deterministic function of the grid value.

Rate grids and the rate bisection evaluate the metric formulas at
real-valued rates directly; a physical TransmissionPlan keeps B integral.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fading import quantile_gamma_b
from .fbcore import capacity
from .mc import InsufficientConditioningError, McBudget, MetricEstimate
from .metrics import (
    CsiModel,
    SecurityConstraints,
    TransmissionPlan,
    _effective_at,
    _reliable_at,
    _secrecy_throughput_at,
    _sop_at,
)

__all__ = [
    "SweepSpec",
    "SweepRow",
    "SweepTable",
    "ArgmaxResult",
    "InfeasibleVerdict",
    "OBJECTIVES",
    "sweep",
    "argmax_feasible",
    "optimal_rate_bisect",
]

VARIABLES = ("blocklength", "rate", "threshold")
OBJECTIVES = (
    "secrecy-throughput",
    "effective-throughput",
    "reliable-throughput",
    "secrecy-outage",
)


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep: which variable, over which grid, optimizing what."""

    variable: str
    grid: tuple
    objective: str
    constraints: SecurityConstraints
    csi: CsiModel | None = None

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(f"variable must be one of {VARIABLES}")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        grid = tuple(self.grid)
        if not grid:
            raise ValueError("grid must be nonempty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if self.variable == "blocklength":
            if any(not float(v).is_integer() or v < 1 for v in grid):
                raise ValueError("blocklength grid must contain integers >= 1")
        elif any(v < 0 for v in grid):
            raise ValueError(f"{self.variable} grid must be non-negative")
        if self.objective == "reliable-throughput" and self.csi is None:
            raise ValueError("objective 'reliable-throughput' requires a csi model")
        object.__setattr__(self, "grid", grid)


@dataclass(frozen=True)
class SweepRow:
    value: float
    estimate: MetricEstimate
    feasible: bool


@dataclass(frozen=True)
class SweepTable:
    spec: SweepSpec
    rows: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class ArgmaxResult:
    """Best feasible grid point; tied=True when the top estimates overlap
    within one combined standard error (resolved by the tie-break rule)."""

    value: float
    estimate: MetricEstimate
    tied: bool


@dataclass(frozen=True)
class InfeasibleVerdict:
    """Every grid point violated its constraint."""

    message: str = "no feasible grid point"


def _evaluate_point(spec: SweepSpec, scenario, base_plan: TransmissionPlan, value, budget: McBudget):
    """Returns (MetricEstimate, feasible) for one grid point."""
    n, r0, mu = base_plan.n, base_plan.r0, base_plan.mu
    if spec.variable == "blocklength":
        n = int(value)
        r0 = base_plan.b_bits / n
    elif spec.variable == "rate":
        r0 = float(value)
    else:
        mu = float(value)

    c = spec.constraints
    if spec.objective == "secrecy-throughput":
        est = _secrecy_throughput_at(r0, n, scenario, c, budget)
        return est, True
    if spec.objective == "effective-throughput":
        res = _effective_at(r0, n, scenario, c, budget)
        return res.throughput, res.feasible
    if spec.objective == "reliable-throughput":
        res = _reliable_at(n, mu, scenario, c, spec.csi, budget)
        return res.throughput, res.meets_constraint
    est = _sop_at(r0, n, mu, scenario, c, budget)
    return est, bool(est.value < c.zeta)


def sweep(spec: SweepSpec, scenario, base_plan: TransmissionPlan, budget: McBudget) -> SweepTable:
    """Evaluate the objective on every grid point with common random numbers.

    Infeasible points are flagged, never removed.
    """
    if spec.variable == "blocklength":
        # Rates above the capacity of the (1 - 1e-9) SNR quantile are implausible.
        gamma_hi = float(quantile_gamma_b(scenario, 1.0 - 1e-9))
        n_min = base_plan.b_bits / float(capacity(gamma_hi))
        bad = [int(v) for v in spec.grid if v < n_min]
        if bad:
            raise ValueError(
                f"blocklength grid points {bad} are below the plausibility bound "
                f"{n_min:.1f} = b_bits / capacity(high-quantile SNR)"
            )
    rows = []
    for value in spec.grid:
        est, feasible = _evaluate_point(spec, scenario, base_plan, value, budget)
        rows.append(SweepRow(float(value), est, bool(feasible)))
    return SweepTable(spec, tuple(rows))


def argmax_feasible(table: SweepTable) -> ArgmaxResult | InfeasibleVerdict:
    """Feasible grid point maximizing the objective.

    Candidates whose estimates overlap the best one within one combined
    standard error are declared a tie and resolved by preferring the
    smallest blocklength, the smallest threshold, or the largest rate.
    """
    feasible = [r for r in table.rows if r.feasible]
    if not feasible:
        return InfeasibleVerdict()
    best = max(feasible, key=lambda r: r.estimate.value)
    combined = lambda a, b: np.hypot(a.estimate.std_error, b.estimate.std_error)
    candidates = [
        r for r in feasible if best.estimate.value - r.estimate.value <= combined(best, r)
    ]
    prefer_small = table.spec.variable in ("blocklength", "threshold")
    pick = min(candidates, key=lambda r: r.value) if prefer_small else max(
        candidates, key=lambda r: r.value
    )
    return ArgmaxResult(pick.value, pick.estimate, tied=len(candidates) > 1)


def optimal_rate_bisect(
    n: int,
    scenario,
    constraints: SecurityConstraints,
    csi: CsiModel | None,
    budget: McBudget,
    *,
    mu: float = 0.0,
    tol: float = 1e-4,
) -> float:
    """Largest fixed rate whose secrecy outage stays within zeta.

    Bisects r0 against the on-off secrecy outage probability evaluated
    with common random numbers, so the empirical p_so(r0) is a
    deterministic nondecreasing step function and the bisection is exact
    on it.  Rates at which transmission becomes too rare to condition on
    count as infeasible.  Returns 0.0 when even a vanishing rate violates
    the constraint (zero-rate verdict).

    The search concerns the fixed-rate (non-adaptive) scheme; csi is
    accepted for interface compatibility and validated only.
    """
    if csi is not None and not isinstance(csi, CsiModel):
        raise TypeError("csi must be a CsiModel or None")
    if tol <= 0:
        raise ValueError("tol must be positive")

    def feasible(r0: float) -> bool:
        try:
            est = _sop_at(r0, n, mu, scenario, constraints, budget)
        except InsufficientConditioningError:
            return False
        return est.value <= constraints.zeta

    if not feasible(0.0):
        return 0.0
    gamma_hi = float(quantile_gamma_b(scenario, 1.0 - 1e-9))
    hi = float(capacity(gamma_hi)) + 1.0
    if feasible(hi):
        return hi
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo
