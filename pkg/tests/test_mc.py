import math

import numpy as np
import pytest

from fbsec.fading import FadingScenario
from fbsec.fbcore import decoding_error_prob
from fbsec.mc import (
    InsufficientConditioningError,
    McBudget,
    MetricEstimate,
    NonFiniteSampleError,
    estimate_conditional,
    estimate_mean,
    estimate_probability,
)

EXP10 = FadingScenario(rho_b=10.0, rho_e=10.0, k_alice=1, k_eve=1)
FIG3 = FadingScenario(rho_b=10.0, rho_e=10.0**0.3, k_alice=1, k_eve=2)


def test_constant_integrand_is_exact():
    est = estimate_mean(lambda ch: 3.25, EXP10, 10_000, seed=0)
    assert est.value == 3.25
    assert est.std_error == 0.0
    assert est.n_samples == 10_000 and est.seed == 0


def test_indicator_matches_exponential_tail():
    mu = 7.0
    est = estimate_mean(lambda ch: (ch.gamma_b > mu).astype(float), EXP10, 200_000, seed=1)
    assert abs(est.value - math.exp(-mu / 10.0)) <= 3 * est.std_error


def test_error_prob_integrand_self_consistent():
    f = lambda ch: decoding_error_prob(1.0, 200, 1e-3, ch)
    small = estimate_mean(f, FIG3, 100_000, seed=2)
    large = estimate_mean(f, FIG3, 1_000_000, seed=3)
    combined = math.hypot(small.std_error, large.std_error)
    assert abs(small.value - large.value) <= 3 * combined


def test_probability_trivial_events():
    assert estimate_probability(lambda ch: ch.gamma_b == ch.gamma_b, EXP10, 5_000, 0).value == 1.0
    assert estimate_probability(lambda ch: ch.gamma_b > 0, EXP10, 5_000, 0).value == 1.0


def test_probability_symmetry():
    est = estimate_probability(lambda ch: ch.gamma_b > ch.gamma_e, EXP10, 200_000, seed=4)
    assert abs(est.value - 0.5) <= 3 * est.std_error
    assert est.std_error == pytest.approx(
        math.sqrt(est.value * (1 - est.value) / est.n_samples)
    )


def test_conditional_event_superset_of_condition():
    est = estimate_conditional(
        lambda ch: ch.gamma_b > 1.0,
        lambda ch: ch.gamma_b > 5.0,
        EXP10,
        50_000,
        seed=5,
    )
    assert est.value == 1.0


def test_conditional_independent_event():
    uncond = estimate_probability(lambda ch: ch.gamma_e > 10.0, EXP10, 400_000, seed=6)
    cond = estimate_conditional(
        lambda ch: ch.gamma_e > 10.0,
        lambda ch: ch.gamma_b > 10.0,
        EXP10,
        400_000,
        seed=6,
    )
    assert abs(cond.value - uncond.value) <= 3 * math.hypot(cond.std_error, uncond.std_error)


def test_conditional_memorylessness():
    mu = 6.0
    est = estimate_conditional(
        lambda ch: ch.gamma_b > 2 * mu,
        lambda ch: ch.gamma_b > mu,
        EXP10,
        400_000,
        seed=7,
    )
    assert abs(est.value - math.exp(-mu / 10.0)) <= 3 * est.std_error


def test_conditional_insufficient_samples():
    with pytest.raises(InsufficientConditioningError):
        estimate_conditional(
            lambda ch: ch.gamma_b > 0,
            lambda ch: ch.gamma_b > 1e6,
            EXP10,
            10_000,
            seed=8,
        )


def test_non_finite_integrand_reports_channel():
    def bad(ch):
        vals = np.asarray(ch.gamma_b, dtype=float).copy()
        vals[vals > 20.0] = np.nan
        return vals

    with pytest.raises(NonFiniteSampleError) as err:
        estimate_mean(bad, EXP10, 50_000, seed=9)
    assert err.value.channel.gamma_b > 20.0
    assert math.isnan(err.value.value)


def test_minimum_sample_count_enforced():
    with pytest.raises(ValueError):
        estimate_mean(lambda ch: ch.gamma_b, EXP10, 99, seed=0)
    with pytest.raises(ValueError):
        McBudget(n_samples=10)


def test_rms_error_scaling():
    f = lambda ch: decoding_error_prob(1.0, 200, 1e-3, ch)
    small = estimate_mean(f, FIG3, 100_000, seed=10)
    large = estimate_mean(f, FIG3, 400_000, seed=10)
    ratio = small.std_error / large.std_error
    assert 1.6 <= ratio <= 2.4


def test_worker_count_independence():
    f = lambda ch: decoding_error_prob(1.0, 200, 1e-3, ch)
    results = [estimate_mean(f, FIG3, 300_000, seed=11, workers=w) for w in (1, 2, 8)]
    assert results[0] == results[1] == results[2]
    probs = [
        estimate_probability(lambda ch: ch.gamma_b > 9.0, FIG3, 300_000, seed=12, workers=w)
        for w in (1, 2, 8)
    ]
    assert probs[0] == probs[1] == probs[2]


def test_seed_reproducibility_bit_identical():
    f = lambda ch: np.log2(1.0 + ch.gamma_b)
    a = estimate_mean(f, FIG3, 150_000, seed=13)
    b = estimate_mean(f, FIG3, 150_000, seed=13)
    assert a == b
    c = estimate_mean(f, FIG3, 150_000, seed=14)
    assert c.value != a.value


def test_metric_estimate_validation():
    with pytest.raises(ValueError):
        MetricEstimate(1.0, -0.1, 100, 0)
    with pytest.raises(ValueError):
        MetricEstimate(1.0, 0.1, 0, 0)
