"""Seeded Monte Carlo estimation over fading scenarios.

Every estimator draws channel realizations in fixed-size chunks whose
sub-streams are derived deterministically from (seed, chunk index) via
``numpy.random.SeedSequence.spawn``, evaluates the integrand chunk by
chunk, and reduces over the full index-ordered result array.  Results
are therefore bit-identical for any worker count, and rerunning with
the same (seed, n_samples) reproduces the estimate exactly.

Integrands receive a batched :class:`~fbsec.fbcore.ChannelPoint` whose
fields are arrays of shape (m,) and must return an array of the same
shape (scalars broadcast).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .fbcore import ChannelPoint
from .fading import sample_channels

__all__ = [
    "MetricEstimate",
    "McBudget",
    "NonFiniteSampleError",
    "InsufficientConditioningError",
    "estimate_mean",
    "estimate_probability",
    "estimate_conditional",
]

#: Samples per sub-stream chunk; fixed so chunking never depends on workers.
CHUNK_SIZE = 1 << 16

#: Minimum number of condition-satisfying samples for a conditional estimate.
MIN_CONDITIONED = 100


class NonFiniteSampleError(RuntimeError):
    """The integrand produced a non-finite value at some realization."""

    def __init__(self, value: float, channel: ChannelPoint):
        self.value = value
        self.channel = channel
        super().__init__(
            f"integrand returned {value!r} at gamma_b={channel.gamma_b!r}, "
            f"gamma_e={channel.gamma_e!r}"
        )


class InsufficientConditioningError(RuntimeError):
    """Too few condition-satisfying samples; rerun with a larger budget."""


@dataclass(frozen=True)
class MetricEstimate:
    """A Monte Carlo number with its provenance.

    std_error is the sample standard deviation divided by sqrt(n_samples)
    (binomial form for probability estimates).
    """

    value: float
    std_error: float
    n_samples: int
    seed: int

    def __post_init__(self):
        if self.std_error < 0:
            raise ValueError("std_error must be non-negative")
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")


@dataclass(frozen=True)
class McBudget:
    """Sampling budget shared by all metric evaluations of one study."""

    n_samples: int = 1_000_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 100:
            raise ValueError("n_samples must be >= 100")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


def _spans(n_samples: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + CHUNK_SIZE, n_samples)) for lo in range(0, n_samples, CHUNK_SIZE)]


def _evaluate(fns, scenario, n_samples: int, seed: int, workers: int) -> list[np.ndarray]:
    """Evaluate each fn over n_samples draws; returns index-ordered arrays."""
    if n_samples < 100:
        raise ValueError("n_samples must be >= 100")
    spans = _spans(n_samples)
    children = np.random.SeedSequence(seed).spawn(len(spans))

    def eval_chunk(i: int) -> list[np.ndarray]:
        lo, hi = spans[i]
        rng = np.random.default_rng(children[i])
        ch = sample_channels(scenario, rng, hi - lo)
        outs = []
        for fn in fns:
            vals = np.broadcast_to(np.asarray(fn(ch)), (hi - lo,)).astype(float)
            bad = ~np.isfinite(vals)
            if np.any(bad):
                j = int(np.argmax(bad))
                raise NonFiniteSampleError(
                    float(vals[j]),
                    ChannelPoint(
                        float(np.asarray(ch.gamma_b)[j]), float(np.asarray(ch.gamma_e)[j])
                    ),
                )
            outs.append(vals)
        return outs

    if workers <= 1:
        chunks = [eval_chunk(i) for i in range(len(spans))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(eval_chunk, range(len(spans))))
    return [np.concatenate([c[k] for c in chunks]) for k in range(len(fns))]


def estimate_mean(f, scenario, n_samples: int, seed: int, workers: int = 1) -> MetricEstimate:
    """Unbiased sample mean of f over the fading law, with standard error."""
    (vals,) = _evaluate([f], scenario, n_samples, seed, workers)
    if np.all(vals == vals[0]):
        # Degenerate integrand: return the constant exactly, not a rounded mean.
        return MetricEstimate(float(vals[0]), 0.0, n_samples, seed)
    value = float(np.mean(vals))
    sd = float(np.std(vals, ddof=1))
    return MetricEstimate(value, sd / math.sqrt(n_samples), n_samples, seed)


def estimate_probability(event, scenario, n_samples: int, seed: int, workers: int = 1) -> MetricEstimate:
    """Probability of a predicate of the channel, with Bernoulli stderr."""
    (vals,) = _evaluate([lambda ch: np.asarray(event(ch), dtype=float)], scenario, n_samples, seed, workers)
    if not np.all((vals == 0.0) | (vals == 1.0)):
        raise ValueError("event must return boolean values")
    p = float(np.mean(vals))
    se = math.sqrt(p * (1.0 - p) / n_samples)
    return MetricEstimate(p, se, n_samples, seed)


def estimate_conditional(event, condition, scenario, n_samples: int, seed: int, workers: int = 1) -> MetricEstimate:
    """Conditional probability P(event | condition) by rejection counting.

    The stderr uses the binomial approximation on the conditional
    subsample.  Raises :class:`InsufficientConditioningError` when fewer
    than MIN_CONDITIONED samples satisfy the condition.
    """
    ev, cond = _evaluate(
        [
            lambda ch: np.asarray(event(ch), dtype=float),
            lambda ch: np.asarray(condition(ch), dtype=float),
        ],
        scenario,
        n_samples,
        seed,
        workers,
    )
    for vals in (ev, cond):
        if not np.all((vals == 0.0) | (vals == 1.0)):
            raise ValueError("event and condition must return boolean values")
    n_cond = int(np.sum(cond))
    if n_cond < MIN_CONDITIONED:
        raise InsufficientConditioningError(
            f"only {n_cond} of {n_samples} samples satisfy the condition "
            f"(need >= {MIN_CONDITIONED}); increase n_samples"
        )
    p = float(np.sum(ev * cond) / n_cond)
    se = math.sqrt(p * (1.0 - p) / n_cond)
    return MetricEstimate(p, se, n_samples, seed)
