"""Statistical models of the per-link instantaneous SNRs.

Rayleigh fading with transmit beamforming toward the legitimate receiver
and maximal-ratio combining at the eavesdropper turns both links into
Gamma-distributed post-combining SNRs:

    gamma_b ~ Gamma(shape=k_alice, scale=rho_b)   mean k_alice * rho_b
    gamma_e ~ Gamma(shape=k_eve,   scale=rho_e)   mean k_eve   * rho_e

Single-antenna links (k = 1) reduce to exponential SNRs (Rayleigh power).
The two links are independent.  A point-mass scenario is provided for
degenerate (deterministic) channels, and the two marginals can be mixed
freely via :class:`TwoLinkScenario`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .fbcore import ChannelPoint

__all__ = [
    "GammaSnr",
    "FixedSnr",
    "FadingScenario",
    "PointMassScenario",
    "TwoLinkScenario",
    "sample_channel",
    "sample_channels",
    "cdf_gamma_b",
    "pdf_gamma_b",
    "quantile_gamma_b",
    "cdf_gamma_e",
    "pdf_gamma_e",
    "quantile_gamma_e",
]


@dataclass(frozen=True)
class GammaSnr:
    """Gamma(shape k, scale rho) SNR law; k = 1 is the exponential case."""

    k: int
    rho: float

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
            raise ValueError("antenna count k must be an integer >= 1")
        if not np.isfinite(self.rho) or self.rho <= 0:
            raise ValueError("average SNR rho must be finite and positive")

    @property
    def mean(self) -> float:
        return self.k * self.rho

    def sample(self, rng: np.random.Generator, size=None):
        return rng.gamma(self.k, self.rho, size)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise ValueError("SNR must be non-negative")
        return stats.gamma.cdf(x, a=self.k, scale=self.rho)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise ValueError("SNR must be non-negative")
        return stats.gamma.pdf(x, a=self.k, scale=self.rho)

    def ppf(self, p):
        p = np.asarray(p, dtype=float)
        if np.any((p < 0) | (p >= 1)):
            raise ValueError("quantile level must lie in [0, 1)")
        return stats.gamma.ppf(p, a=self.k, scale=self.rho)


@dataclass(frozen=True)
class FixedSnr:
    """Degenerate (point-mass) SNR law at a fixed value."""

    value: float

    def __post_init__(self):
        if not np.isfinite(self.value) or self.value < 0:
            raise ValueError("SNR value must be finite and non-negative")

    @property
    def mean(self) -> float:
        return self.value

    def sample(self, rng: np.random.Generator, size=None):
        if size is None:
            return float(self.value)
        return np.full(size, float(self.value))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= self.value, 1.0, 0.0)[()]

    def pdf(self, x):
        raise ValueError("a point-mass SNR law has no density")

    def ppf(self, p):
        p = np.asarray(p, dtype=float)
        if np.any((p < 0) | (p >= 1)):
            raise ValueError("quantile level must lie in [0, 1)")
        return np.full_like(p, float(self.value))[()]


@dataclass(frozen=True)
class FadingScenario:
    """Average SNRs and antenna counts of both links (Gamma marginals)."""

    rho_b: float
    rho_e: float
    k_alice: int = 1
    k_eve: int = 1

    def __post_init__(self):
        # Delegate range checks to the law constructors.
        GammaSnr(self.k_alice, self.rho_b)
        GammaSnr(self.k_eve, self.rho_e)

    @property
    def law_b(self) -> GammaSnr:
        return GammaSnr(self.k_alice, self.rho_b)

    @property
    def law_e(self) -> GammaSnr:
        return GammaSnr(self.k_eve, self.rho_e)


@dataclass(frozen=True)
class PointMassScenario:
    """Deterministic channel: both SNRs fixed (degenerate fading)."""

    gamma_b: float
    gamma_e: float

    @property
    def law_b(self) -> FixedSnr:
        return FixedSnr(self.gamma_b)

    @property
    def law_e(self) -> FixedSnr:
        return FixedSnr(self.gamma_e)


@dataclass(frozen=True)
class TwoLinkScenario:
    """Arbitrary independent marginal laws for the two links."""

    law_b: object
    law_e: object


def sample_channel(scenario, rng: np.random.Generator) -> ChannelPoint:
    """Draw one independent (gamma_b, gamma_e) realization."""
    return ChannelPoint(scenario.law_b.sample(rng), scenario.law_e.sample(rng))


def sample_channels(scenario, rng: np.random.Generator, size: int) -> ChannelPoint:
    """Draw a batch of realizations (all gamma_b first, then all gamma_e)."""
    if size < 1:
        raise ValueError("size must be >= 1")
    gamma_b = scenario.law_b.sample(rng, size)
    gamma_e = scenario.law_e.sample(rng, size)
    return ChannelPoint(gamma_b, gamma_e)


def cdf_gamma_b(scenario, x):
    return scenario.law_b.cdf(x)


def pdf_gamma_b(scenario, x):
    return scenario.law_b.pdf(x)


def quantile_gamma_b(scenario, p):
    return scenario.law_b.ppf(p)


def cdf_gamma_e(scenario, x):
    return scenario.law_e.cdf(x)


def pdf_gamma_e(scenario, x):
    return scenario.law_e.pdf(x)


def quantile_gamma_e(scenario, p):
    return scenario.law_e.ppf(p)
