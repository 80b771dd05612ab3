import math

import numpy as np
import pytest

from fbsec.fading import FadingScenario, PointMassScenario
from fbsec.fbcore import _secrecy_rate_raw
from fbsec.mc import McBudget, MetricEstimate
from fbsec.metrics import (
    CsiModel,
    SecurityConstraints,
    TransmissionPlan,
    _sop_at,
    effective_throughput,
)
from fbsec.optimize import (
    ArgmaxResult,
    InfeasibleVerdict,
    SweepRow,
    SweepSpec,
    SweepTable,
    argmax_feasible,
    optimal_rate_bisect,
    sweep,
)

CONS = SecurityConstraints(1e-3, 1e-3, 0.3)
FIG45 = FadingScenario(rho_b=10.0**1.5, rho_e=10.0, k_alice=8, k_eve=1)
SMALL = McBudget(n_samples=100_000, seed=31)


def _table(variable, values, stderr=0.0, feasible=None):
    spec = SweepSpec(variable, tuple(range(1, len(values) + 1)) if variable == "blocklength" else tuple(float(i) for i in range(1, len(values) + 1)), "secrecy-throughput", CONS)
    rows = tuple(
        SweepRow(
            float(i + 1),
            MetricEstimate(v, stderr, 1000, 0),
            True if feasible is None else feasible[i],
        )
        for i, v in enumerate(values)
    )
    return SweepTable(spec, rows)


# --- spec validation ---------------------------------------------------------


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec("bandwidth", (1, 2), "secrecy-throughput", CONS)
    with pytest.raises(ValueError):
        SweepSpec("blocklength", (), "secrecy-throughput", CONS)
    with pytest.raises(ValueError):
        SweepSpec("blocklength", (100, 100), "secrecy-throughput", CONS)
    with pytest.raises(ValueError):
        SweepSpec("blocklength", (100.5, 200), "secrecy-throughput", CONS)
    with pytest.raises(ValueError):
        SweepSpec("rate", (0.5, 1.0), "not-a-metric", CONS)
    with pytest.raises(ValueError):
        SweepSpec("rate", (0.5, 1.0), "reliable-throughput", CONS)  # csi missing
    SweepSpec("rate", (0.5, 1.0), "reliable-throughput", CONS, CsiModel.perfect())


def test_blocklength_plausibility_bound():
    spec = SweepSpec("blocklength", (1, 2000), "effective-throughput", CONS)
    plan = TransmissionPlan(500, 1000)
    with pytest.raises(ValueError):
        sweep(spec, FIG45, plan, SMALL)


# --- sweep -------------------------------------------------------------------


def test_single_point_sweep_equals_direct_call():
    spec = SweepSpec("blocklength", (800,), "effective-throughput", CONS)
    plan = TransmissionPlan(500, 1000)
    table = sweep(spec, FIG45, plan, SMALL)
    direct = effective_throughput(TransmissionPlan(500, 800), FIG45, CONS, SMALL)
    assert len(table.rows) == 1
    assert table.rows[0].estimate == direct.throughput
    assert table.rows[0].feasible == direct.feasible


def test_sweep_common_random_numbers():
    spec = SweepSpec("blocklength", (400, 800), "effective-throughput", CONS)
    table = sweep(spec, FIG45, TransmissionPlan(500, 1000), SMALL)
    assert all(r.estimate.seed == SMALL.seed for r in table.rows)
    again = sweep(spec, FIG45, TransmissionPlan(500, 1000), SMALL)
    assert table == again


def test_sweep_threshold_variable():
    spec = SweepSpec(
        "threshold", (50.0, 150.0), "reliable-throughput", CONS, CsiModel.quantized(1)
    )
    table = sweep(spec, FIG45, TransmissionPlan(500, 800, mu=0.0), SMALL)
    assert len(table.rows) == 2
    assert all(r.estimate.value > 0 for r in table.rows)


# --- argmax ------------------------------------------------------------------


def test_argmax_noiseless_interior_peak():
    table = _table("blocklength", [0.1, 0.5, 0.9, 0.4])
    res = argmax_feasible(table)
    assert isinstance(res, ArgmaxResult)
    assert res.value == 3.0 and not res.tied


def test_argmax_monotone_objective_picks_endpoint():
    table = _table("blocklength", [0.1, 0.2, 0.3, 0.4])
    assert argmax_feasible(table).value == 4.0


def test_argmax_invariant_under_increasing_transform():
    vals = [0.1, 0.7, 0.3]
    t1 = argmax_feasible(_table("blocklength", vals))
    t2 = argmax_feasible(_table("blocklength", [5 * v + 2 for v in vals]))
    assert t1.value == t2.value


def test_argmax_all_infeasible():
    table = _table("blocklength", [0.5, 0.6], feasible=[False, False])
    assert isinstance(argmax_feasible(table), InfeasibleVerdict)


def test_argmax_skips_infeasible_peak():
    table = _table("blocklength", [0.2, 0.9, 0.4], feasible=[True, False, True])
    assert argmax_feasible(table).value == 3.0


def test_argmax_tie_break_prefers_small_blocklength():
    table = _table("blocklength", [0.500, 0.501, 0.1], stderr=0.01)
    res = argmax_feasible(table)
    assert res.tied and res.value == 1.0


def test_argmax_tie_break_prefers_large_rate():
    spec = SweepSpec("rate", (1.0, 2.0, 3.0), "effective-throughput", CONS)
    rows = tuple(
        SweepRow(v, MetricEstimate(m, 0.01, 1000, 0), True)
        for v, m in [(1.0, 0.500), (2.0, 0.501), (3.0, 0.1)]
    )
    res = argmax_feasible(SweepTable(spec, rows))
    assert res.tied and res.value == 2.0


# --- rate bisection ----------------------------------------------------------


def test_bisect_point_mass_converges_to_achievable_rate():
    pm = PointMassScenario(50.0, 5.0)
    n = 500
    rate = optimal_rate_bisect(n, pm, CONS, None, SMALL)
    expected = float(_secrecy_rate_raw(50.0, 5.0, n, CONS.eps_bar, CONS.delta_bar))
    assert rate == pytest.approx(expected, abs=1e-4)


def test_bisect_postcondition_on_fading():
    budget = McBudget(n_samples=100_000, seed=32)
    n = 800
    rate = optimal_rate_bisect(n, FIG45, CONS, None, budget)
    at = _sop_at(rate, n, 0.0, FIG45, CONS, budget)
    beyond = _sop_at(rate + 1e-4, n, 0.0, FIG45, CONS, budget)
    assert at.value <= CONS.zeta
    assert beyond.value > CONS.zeta - 3 * beyond.std_error


def test_bisect_vacuous_constraint_hits_reliability_gate():
    loose = SecurityConstraints(1e-3, 1e-3, 1.0 - 1e-9)
    tight_rate = optimal_rate_bisect(500, FIG45, CONS, None, SMALL)
    gate_rate = optimal_rate_bisect(500, FIG45, loose, None, SMALL)
    # With the outage constraint vacuous, only the reliability gate
    # (vanishing transmission probability) limits the rate, so the
    # returned rate moves well past the zeta-limited one.
    assert gate_rate > tight_rate

    def feasible(r):
        try:
            return _sop_at(r, 500, 0.0, FIG45, loose, SMALL).value <= loose.zeta
        except Exception:
            return False

    assert feasible(gate_rate) and not feasible(gate_rate + 1e-4)


def test_bisect_zero_rate_verdict():
    # Eavesdropper overwhelmingly strong: even rate 0 is in outage.
    pm = PointMassScenario(1.0, 100.0)
    assert optimal_rate_bisect(500, pm, CONS, None, SMALL) == 0.0


def test_bisect_matches_dense_grid_argmax():
    # Fig-5 setting at N = 1500: largest feasible rate on a dense grid.
    budget = McBudget(n_samples=100_000, seed=33)
    n = 1500
    rate = optimal_rate_bisect(n, FIG45, CONS, CsiModel.non_adaptive(), budget)
    step = 0.02
    grid = np.arange(max(rate - 0.3, step), rate + 0.3, step)
    feasible = [
        g for g in grid if _sop_at(float(g), n, 0.0, FIG45, CONS, budget).value <= CONS.zeta
    ]
    assert feasible
    assert abs(rate - max(feasible)) <= step


def test_bisect_rejects_bad_args():
    with pytest.raises(TypeError):
        optimal_rate_bisect(500, FIG45, CONS, "perfect", SMALL)
    with pytest.raises(ValueError):
        optimal_rate_bisect(500, FIG45, CONS, None, SMALL, tol=0.0)
