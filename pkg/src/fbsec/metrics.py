"""Secrecy performance metrics over fading, at finite blocklength.

Three metric families:

  - ergodic secrecy throughput  T = R0 * (1 - avg decoding error prob)
  - reliability-and-secrecy outage  p_out = Pr{Rs(N, eps, delta) <= R0}
    with the effective throughput  T = R0 * (1 - p_out)  under p_out < zeta
  - on-off secrecy outage  p_so = Pr{R0 > Rs | transmitting} and the
    reliable throughput of adaptive / quantized-CSI / non-adaptive coding

Boundary conventions: the outage event uses the clamped achievable rate
with "<=" while the secrecy-outage event uses strict exceedance of the
unclamped rate, so a slot whose achievable rate clamps to zero counts as
a secrecy outage even at R0 = 0 (both conventions agree a.s. elsewhere
under continuous fading).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fbcore import _secrecy_rate_raw, decoding_error_prob, max_coding_rate
from .fading import cdf_gamma_b, quantile_gamma_b, quantile_gamma_e
from .mc import (
    McBudget,
    MetricEstimate,
    estimate_conditional,
    estimate_mean,
    estimate_probability,
)

__all__ = [
    "TransmissionPlan",
    "SecurityConstraints",
    "CsiModel",
    "EffectiveThroughput",
    "ReliableThroughput",
    "average_error_prob",
    "secrecy_throughput",
    "outage_probability",
    "effective_throughput",
    "secrecy_outage_probability",
    "reliable_throughput",
]


@dataclass(frozen=True)
class TransmissionPlan:
    """Packet configuration: B information bits over N channel uses.

    The coding rate r0 = b_bits / n is always derived, never stored.
    mu is the on-off threshold on gamma_b (0 means always transmit).
    """

    b_bits: int
    n: int
    mu: float = 0.0

    def __post_init__(self):
        if not isinstance(self.b_bits, int) or isinstance(self.b_bits, bool) or self.b_bits < 1:
            raise ValueError("b_bits must be an integer >= 1")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValueError("n must be an integer >= 1")
        if not np.isfinite(self.mu) or self.mu < 0:
            raise ValueError("mu must be finite and non-negative")

    @property
    def r0(self) -> float:
        return self.b_bits / self.n


@dataclass(frozen=True)
class SecurityConstraints:
    """Preset reliability (eps_bar), secrecy (delta_bar), outage budget (zeta)."""

    eps_bar: float
    delta_bar: float
    zeta: float

    def __post_init__(self):
        for name in ("eps_bar", "delta_bar", "zeta"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie strictly inside (0, 1)")


@dataclass(frozen=True)
class CsiModel:
    """Main-channel CSI available to the transmitter.

    kind "perfect" adapts the rate to the exact gamma_b; kind "quantized"
    feeds back one of 2**feedback_bits indices (silence plus 2**b - 1
    equal-probability bins above mu).  feedback_bits = 1 is exactly the
    non-adaptive scheme: a single fixed offline rate.
    """

    kind: str
    feedback_bits: int | None = None

    def __post_init__(self):
        if self.kind not in ("perfect", "quantized"):
            raise ValueError("csi kind must be 'perfect' or 'quantized'")
        if self.kind == "quantized":
            b = self.feedback_bits
            if not isinstance(b, int) or isinstance(b, bool) or b < 1:
                raise ValueError("feedback_bits must be an integer >= 1")
        elif self.feedback_bits is not None:
            raise ValueError("feedback_bits only applies to quantized CSI")

    @classmethod
    def perfect(cls) -> "CsiModel":
        return cls("perfect")

    @classmethod
    def quantized(cls, feedback_bits: int) -> "CsiModel":
        return cls("quantized", feedback_bits)

    @classmethod
    def non_adaptive(cls) -> "CsiModel":
        return cls("quantized", 1)


@dataclass(frozen=True)
class EffectiveThroughput:
    """R0 * (1 - p_out) plus the outage estimate and the zeta flag."""

    throughput: MetricEstimate
    outage: MetricEstimate
    feasible: bool


@dataclass(frozen=True)
class ReliableThroughput:
    """On-off scheme throughput with its achieved secrecy outage."""

    throughput: MetricEstimate
    sop: MetricEstimate | None
    meets_constraint: bool
    note: str | None = None


def _require_no_gate(plan: TransmissionPlan, metric: str):
    if plan.mu != 0.0:
        raise ValueError(f"{metric} is defined without an on-off gate; plan.mu must be 0")


# --- ergodic secrecy throughput -------------------------------------------


def _average_error_prob_at(r0, n, scenario, delta_bar, budget: McBudget) -> MetricEstimate:
    return estimate_mean(
        lambda ch: decoding_error_prob(r0, n, delta_bar, ch),
        scenario,
        budget.n_samples,
        budget.seed,
        budget.workers,
    )


def average_error_prob(plan: TransmissionPlan, scenario, constraints: SecurityConstraints, budget: McBudget) -> MetricEstimate:
    """Average decoding error probability at rate r0 under the secrecy preset."""
    _require_no_gate(plan, "average_error_prob")
    return _average_error_prob_at(plan.r0, plan.n, scenario, constraints.delta_bar, budget)


def _secrecy_throughput_at(r0, n, scenario, constraints, budget: McBudget) -> MetricEstimate:
    e = _average_error_prob_at(r0, n, scenario, constraints.delta_bar, budget)
    return MetricEstimate(r0 * (1.0 - e.value), r0 * e.std_error, e.n_samples, e.seed)


def secrecy_throughput(plan: TransmissionPlan, scenario, constraints: SecurityConstraints, budget: McBudget) -> MetricEstimate:
    """Ergodic secrecy throughput R0 * (1 - average decoding error prob)."""
    _require_no_gate(plan, "secrecy_throughput")
    return _secrecy_throughput_at(plan.r0, plan.n, scenario, constraints, budget)


# --- outage probability and effective throughput --------------------------


def _outage_at(r0, n, scenario, constraints, budget: McBudget) -> MetricEstimate:
    def event(ch):
        rs = np.maximum(
            0.0, _secrecy_rate_raw(ch.gamma_b, ch.gamma_e, n, constraints.eps_bar, constraints.delta_bar)
        )
        return rs <= r0

    return estimate_probability(event, scenario, budget.n_samples, budget.seed, budget.workers)


def outage_probability(plan: TransmissionPlan, scenario, constraints: SecurityConstraints, budget: McBudget) -> MetricEstimate:
    """Probability that the achievable secrecy rate falls at or below R0."""
    _require_no_gate(plan, "outage_probability")
    return _outage_at(plan.r0, plan.n, scenario, constraints, budget)


def _effective_at(r0, n, scenario, constraints, budget: McBudget) -> EffectiveThroughput:
    p = _outage_at(r0, n, scenario, constraints, budget)
    t = MetricEstimate(r0 * (1.0 - p.value), r0 * p.std_error, p.n_samples, p.seed)
    return EffectiveThroughput(t, p, bool(p.value < constraints.zeta))


def effective_throughput(plan: TransmissionPlan, scenario, constraints: SecurityConstraints, budget: McBudget) -> EffectiveThroughput:
    """R0 * (1 - p_out) with the p_out < zeta feasibility flag.

    Infeasible points are reported with feasible=False, never dropped.
    """
    _require_no_gate(plan, "effective_throughput")
    return _effective_at(plan.r0, plan.n, scenario, constraints, budget)


# --- on-off secrecy outage and reliable throughput -------------------------


def _sop_at(r0, n, mu, scenario, constraints, budget: McBudget) -> MetricEstimate:
    if not np.isfinite(r0) or r0 < 0:
        raise ValueError("r0 must be finite and non-negative")

    def condition(ch):
        gate = r0 < max_coding_rate(n, constraints.eps_bar, ch.gamma_b)
        return (np.asarray(ch.gamma_b) > mu) & gate

    def event(ch):
        return r0 > _secrecy_rate_raw(
            ch.gamma_b, ch.gamma_e, n, constraints.eps_bar, constraints.delta_bar
        )

    return estimate_conditional(event, condition, scenario, budget.n_samples, budget.seed, budget.workers)


def secrecy_outage_probability(plan: TransmissionPlan, scenario, constraints: SecurityConstraints, budget: McBudget) -> MetricEstimate:
    """Pr{R0 exceeds the achievable secrecy rate | transmitting}.

    Transmitting slots are those with gamma_b > mu that also meet the
    reliability condition R0 < R*(N, eps_bar, gamma_b).
    """
    return _sop_at(plan.r0, plan.n, plan.mu, scenario, constraints, budget)


def _design_rate_fn(n, mu, scenario, constraints: SecurityConstraints, csi: CsiModel):
    """Per-slot coding rate of the on-off scheme as a function of gamma_b.

    The per-realization rule picks the largest rate whose conditional
    secrecy outage (over the unknown gamma_e) does not exceed zeta, i.e.
    the achievable secrecy rate evaluated at the (1 - zeta) quantile of
    gamma_e.  Quantized CSI applies the rule at each bin's lower edge,
    which keeps the rule valid across the whole bin.  Rates designed this
    way always satisfy the reliability gate r < R*(n, eps_bar, gamma_b).
    """
    ge_design = float(quantile_gamma_e(scenario, 1.0 - constraints.zeta))

    def rule(gamma_b):
        return np.maximum(
            0.0,
            _secrecy_rate_raw(gamma_b, ge_design, n, constraints.eps_bar, constraints.delta_bar),
        )

    if csi.kind == "perfect":
        return lambda gamma_b: np.where(np.asarray(gamma_b) > mu, rule(gamma_b), 0.0)

    n_bins = 2**csi.feedback_bits - 1
    p_mu = float(cdf_gamma_b(scenario, mu))
    if p_mu >= 1.0:
        raise ValueError("threshold mu excludes the entire main-link support")
    levels = p_mu + (1.0 - p_mu) * np.arange(n_bins) / n_bins
    edges = np.atleast_1d(np.asarray(quantile_gamma_b(scenario, levels), dtype=float))
    edges[0] = mu  # ppf(cdf(mu)) may wobble by an ulp
    bin_rates = rule(edges)

    def quantized(gamma_b):
        gamma_b = np.asarray(gamma_b)
        idx = np.clip(np.searchsorted(edges, gamma_b, side="right") - 1, 0, n_bins - 1)
        return np.where(gamma_b > mu, bin_rates[idx], 0.0)

    return quantized


def _reliable_at(n, mu, scenario, constraints, csi, budget: McBudget) -> ReliableThroughput:
    rate_fn = _design_rate_fn(n, mu, scenario, constraints, csi)
    tput = estimate_mean(
        lambda ch: rate_fn(ch.gamma_b), scenario, budget.n_samples, budget.seed, budget.workers
    )
    if tput.value == 0.0:
        return ReliableThroughput(
            tput,
            sop=None,
            meets_constraint=False,
            note="no positive rate satisfies the secrecy-outage rule on any transmitting slot",
        )

    def event(ch):
        return rate_fn(ch.gamma_b) > _secrecy_rate_raw(
            ch.gamma_b, ch.gamma_e, n, constraints.eps_bar, constraints.delta_bar
        )

    def condition(ch):
        return rate_fn(ch.gamma_b) > 0.0

    sop = estimate_conditional(
        event, condition, scenario, budget.n_samples, budget.seed, budget.workers
    )
    return ReliableThroughput(tput, sop, bool(sop.value < constraints.zeta))


def reliable_throughput(plan: TransmissionPlan, scenario, constraints: SecurityConstraints, csi: CsiModel, budget: McBudget) -> ReliableThroughput:
    """Throughput of the on-off scheme with rates designed against zeta.

    Silent slots (gamma_b <= mu, or designed rate zero) contribute zero;
    the average runs over all slots.  The achieved secrecy outage over
    transmitting slots is reported alongside the p_so < zeta flag.
    """
    return _reliable_at(plan.n, plan.mu, scenario, constraints, csi, budget)
