"""Finite-blocklength information-theoretic kernels.

Pure, stateless functions for the Gaussian wiretap channel in the
short-packet regime:

  - Gaussian tail function Q and its inverse
  - capacity C(gamma) = log2(1 + gamma) and channel dispersion
    V(gamma) = (log2 e)^2 * (1 - (1 + gamma)^-2)  [bits^2 / channel use]
  - maximal coding rate  R*(N, eps) = C - sqrt(V/N) * Qinv(eps)
  - achievable / converse secrecy-rate bounds
        lower: Cs - sqrt(V1/N) Qinv(eps) - sqrt(V2/N) Qinv(delta)
        upper: Cs - sqrt(V3/N) Qinv(eps + delta)
    with V1 = V(gamma_b), V2 = V(gamma_e), V3 = V(gamma_b)
  - the inversion giving the decoding error probability at a fixed rate

All rates are in bits per channel use (logs base 2).  Every function
accepts scalars or numpy arrays in its SNR arguments and broadcasts;
scalar inputs return numpy scalars.  Negative secrecy rates are clamped
to zero at the outermost level only, so the algebra stays exact for the
rate-to-error inversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "ChannelPoint",
    "RatePoint",
    "LOG2_E",
    "MAX_DISPERSION",
    "db_to_linear",
    "q_func",
    "q_inv",
    "capacity",
    "dispersion",
    "max_coding_rate",
    "secrecy_capacity",
    "achievable_secrecy_rate",
    "converse_secrecy_rate",
    "decoding_error_prob",
]

LOG2_E = math.log2(math.e)
#: Supremum of the dispersion, reached as gamma -> infinity.
MAX_DISPERSION = LOG2_E**2

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


def db_to_linear(value_db):
    """Convert an SNR from dB to linear scale: 10**(dB/10)."""
    value_db = np.asarray(value_db, dtype=float)
    if not np.all(np.isfinite(value_db)):
        raise ValueError("dB value must be finite")
    return 10.0 ** (value_db / 10.0)


def _as_finite(name, x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} must be finite")
    return x


def _as_snr(name, gamma):
    gamma = _as_finite(name, gamma)
    if np.any(gamma < 0):
        raise ValueError(f"{name} must be non-negative (linear SNR)")
    return gamma


def _as_probability(name, p):
    p = np.asarray(p, dtype=float)
    if not np.all((p > 0.0) & (p < 1.0)):
        raise ValueError(f"{name} must lie strictly inside (0, 1)")
    return p


def _as_blocklength(n):
    if not np.isscalar(n) or not math.isfinite(float(n)) or float(n) != int(n) or int(n) < 1:
        raise ValueError("blocklength n must be an integer >= 1")
    return float(n)


@dataclass(frozen=True)
class ChannelPoint:
    """One realization of the legitimate and wiretap instantaneous SNRs.

    Both fields are linear (dimensionless) SNRs; either scalars or numpy
    arrays of equal shape (a batch of realizations).
    """

    gamma_b: float | np.ndarray
    gamma_e: float | np.ndarray

    def __post_init__(self):
        for name in ("gamma_b", "gamma_e"):
            v = np.asarray(getattr(self, name), dtype=float)
            if not np.all(np.isfinite(v)):
                raise ValueError(f"{name} must be finite")
            if np.any(v < 0):
                raise ValueError(f"{name} must be non-negative")

    @classmethod
    def from_db(cls, gamma_b_db, gamma_e_db) -> "ChannelPoint":
        return cls(db_to_linear(gamma_b_db), db_to_linear(gamma_e_db))


@dataclass(frozen=True)
class RatePoint:
    """A finite-blocklength operating point (N, epsilon, delta)."""

    blocklength_n: int
    epsilon: float
    delta: float

    def __post_init__(self):
        if not isinstance(self.blocklength_n, int) or self.blocklength_n < 1:
            raise ValueError("blocklength_n must be an integer >= 1")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie strictly inside (0, 1)")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie strictly inside (0, 1)")


def q_func(x):
    """Gaussian upper-tail probability Q(x) = 0.5 * erfc(x / sqrt(2))."""
    x = _as_finite("x", x)
    return 0.5 * special.erfc(x / _SQRT2)


def q_inv(p):
    """Inverse of the Gaussian Q function.

    Starts from the standard normal quantile and polishes with Newton
    iterations against :func:`q_func` until the step falls below 1e-13,
    so the roundtrip q_func(q_inv(p)) = p holds to well below 1e-10.
    """
    p = _as_probability("p", p)
    x = -special.ndtri(p)
    for _ in range(4):
        pdf = np.exp(-0.5 * x * x) / _SQRT2PI
        step = np.where(pdf > 0.0, (q_func(x) - p) / np.maximum(pdf, 1e-300), 0.0)
        x = x + step
        if np.all(np.abs(step) < 1e-13):
            break
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def capacity(gamma):
    """Channel capacity log2(1 + gamma) in bits per channel use."""
    gamma = _as_snr("gamma", gamma)
    return np.log1p(gamma) * LOG2_E


def dispersion(gamma):
    """Channel dispersion (log2 e)^2 * (1 - (1 + gamma)^-2), bits^2/use."""
    gamma = _as_snr("gamma", gamma)
    return MAX_DISPERSION * (1.0 - (1.0 + gamma) ** -2)


def max_coding_rate(n, epsilon, gamma):
    """Maximal coding rate C - sqrt(V/N) * Qinv(eps), clamped at zero.

    Converges to the capacity as n grows; equals it exactly at eps = 0.5.
    """
    n = _as_blocklength(n)
    epsilon = _as_probability("epsilon", epsilon)
    gamma = _as_snr("gamma", gamma)
    rate = capacity(gamma) - np.sqrt(dispersion(gamma) / n) * q_inv(epsilon)
    return np.maximum(0.0, rate)


def secrecy_capacity(ch: ChannelPoint):
    """Secrecy capacity C(gamma_b) - C(gamma_e) (may be negative)."""
    return capacity(ch.gamma_b) - capacity(ch.gamma_e)


def _secrecy_rate_raw(gamma_b, gamma_e, n, epsilon, delta):
    """Unclamped achievability bound; callers clamp where appropriate."""
    pen_b = np.sqrt(dispersion(gamma_b) / n) * q_inv(epsilon)
    pen_e = np.sqrt(dispersion(gamma_e) / n) * q_inv(delta)
    return capacity(gamma_b) - capacity(gamma_e) - pen_b - pen_e


def achievable_secrecy_rate(n, epsilon, delta, ch: ChannelPoint):
    """Lower bound on the maximal secret communication rate, clamped at 0."""
    n = _as_blocklength(n)
    epsilon = _as_probability("epsilon", epsilon)
    delta = _as_probability("delta", delta)
    return np.maximum(0.0, _secrecy_rate_raw(ch.gamma_b, ch.gamma_e, n, epsilon, delta))


def converse_secrecy_rate(n, epsilon, delta, ch: ChannelPoint):
    """Upper bound Cs - sqrt(V3/N) * Qinv(eps + delta), clamped at 0."""
    n = _as_blocklength(n)
    epsilon = np.asarray(epsilon, dtype=float)
    delta = np.asarray(delta, dtype=float)
    total = _as_probability("epsilon + delta", epsilon + delta)
    pen = np.sqrt(dispersion(ch.gamma_b) / n) * q_inv(total)
    return np.maximum(0.0, secrecy_capacity(ch) - pen)


def decoding_error_prob(r0, n, delta_bar, ch: ChannelPoint):
    """Decoding error probability at fixed rate r0 under secrecy preset.

    Inverts the achievability bound: the returned eps makes the lower
    bound equal r0 for the given channel realization,

        eps = Q( sqrt(n / V1) * (Cs - sqrt(V2/n) * Qinv(delta_bar) - r0) ).

    A zero-dispersion main link (gamma_b = 0) saturates to 0 or 1 by the
    sign of the rate margin (0.5 when the margin is exactly zero).
    """
    n = _as_blocklength(n)
    delta_bar = _as_probability("delta_bar", delta_bar)
    r0 = np.asarray(r0, dtype=float)
    if np.any(r0 < 0) or not np.all(np.isfinite(r0)):
        raise ValueError("r0 must be finite and non-negative")

    gamma_b = np.asarray(ch.gamma_b, dtype=float)
    margin = (
        secrecy_capacity(ch)
        - np.sqrt(dispersion(ch.gamma_e) / n) * q_inv(delta_bar)
        - r0
    )
    v1 = dispersion(gamma_b)
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = np.sqrt(n / v1) * margin
    eps = np.where(
        v1 > 0.0,
        q_func(np.where(v1 > 0.0, arg, 0.0)),
        np.where(margin > 0.0, 0.0, np.where(margin < 0.0, 1.0, 0.5)),
    )
    return eps[()] if isinstance(eps, np.ndarray) and eps.ndim == 0 else eps
