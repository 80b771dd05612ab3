"""Scenario-driven command line front end.

    fbsec run <scenario.toml> --out <dir> [--seed U64] [--samples N] [--workers K]
    fbsec validate <scenario.toml>
    fbsec list

A scenario file declares one of five study types (rate-bounds,
secrecy-throughput, effective-throughput, sop-study, optimize) plus the
channel/fading parameters, constraints, grids, and Monte Carlo budget.
Parsing is strict: unknown keys are rejected and validation reports
every violated invariant, not just the first.  SNR fields accept a
``*_db`` or ``*_linear`` suffixed key, never both; conversion to linear
happens exactly once, here.

``run`` writes results.csv (fixed, versioned column order; 9 significant
digits; every stochastic column with ``*_stderr`` plus n_samples and
seed siblings) and manifest.json (fully resolved config including
defaults and overrides, tool version, per-study runtime) atomically.

Exit codes: 0 success, 2 config error, 3 infeasible-everywhere
optimization, 4 Monte Carlo insufficiency.  Every nonzero exit is
accompanied by a single-line JSON diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from importlib import metadata, resources
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .fbcore import (
    ChannelPoint,
    achievable_secrecy_rate,
    converse_secrecy_rate,
    db_to_linear,
    secrecy_capacity,
)
from .fading import FadingScenario
from .mc import InsufficientConditioningError, McBudget
from .metrics import (
    CsiModel,
    SecurityConstraints,
    TransmissionPlan,
    average_error_prob,
    effective_throughput,
    reliable_throughput,
)
from .optimize import (
    OBJECTIVES,
    VARIABLES,
    ArgmaxResult,
    SweepSpec,
    argmax_feasible,
    sweep,
)

SCHEMA_VERSION = "1"

STUDIES = (
    "rate-bounds",
    "secrecy-throughput",
    "effective-throughput",
    "sop-study",
    "optimize",
)

#: Column order is part of the output contract (positional parsing downstream).
CSV_COLUMNS = {
    "rate-bounds": ("N", "achievable", "converse", "capacity_gap"),
    "secrecy-throughput": (
        "N",
        "delta_bar",
        "r0",
        "avg_error_prob",
        "avg_error_prob_stderr",
        "throughput",
        "throughput_stderr",
        "n_samples",
        "seed",
    ),
    "effective-throughput": (
        "N",
        "r0",
        "outage_prob",
        "outage_prob_stderr",
        "throughput",
        "throughput_stderr",
        "feasible",
        "n_samples",
        "seed",
    ),
    "sop-study": (
        "N",
        "scheme",
        "throughput",
        "throughput_stderr",
        "sop",
        "sop_stderr",
        "sop_feasible",
        "n_samples",
        "seed",
    ),
    "optimize": (
        "variable",
        "value",
        "objective",
        "objective_value",
        "objective_value_stderr",
        "feasible",
        "is_optimum",
        "tie",
        "n_samples",
        "seed",
    ),
}

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_MC = 4


def _version() -> str:
    try:
        return metadata.version("fbsec")
    except metadata.PackageNotFoundError:
        return "0.0.0+unknown"


class ConfigErrors(Exception):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class InfeasibleEverywhere(Exception):
    pass


# --- strict TOML parsing ----------------------------------------------------


def _kind_ok(kind, value):
    if isinstance(value, bool):
        return kind == "bool", value
    if kind == "int":
        return isinstance(value, int), value
    if kind == "number":
        return isinstance(value, (int, float)), float(value) if isinstance(value, (int, float)) else value
    if kind == "str":
        return isinstance(value, str), value
    if kind == "list-int":
        ok = isinstance(value, list) and all(
            isinstance(v, int) and not isinstance(v, bool) for v in value
        )
        return ok, value
    if kind == "list-number":
        ok = isinstance(value, list) and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        )
        return ok, [float(v) for v in value] if ok else value
    raise AssertionError(kind)


class _Section:
    """One TOML table with consumed-key tracking and error accumulation."""

    def __init__(self, name, data, problems):
        self.name = name
        self.data = data if isinstance(data, dict) else {}
        self.problems = problems
        self.seen = set()
        if not isinstance(data, dict):
            problems.append(f"[{name}] must be a table")

    def _label(self, key):
        return f"{self.name}.{key}" if self.name else key

    def take(self, key, kind, required=True, default=None, check=None, describe=None):
        self.seen.add(key)
        if key not in self.data:
            if required:
                self.problems.append(f"missing key {self._label(key)}")
            return default
        ok, value = _kind_ok(kind, self.data[key])
        if not ok:
            self.problems.append(
                f"{self._label(key)}: expected {kind}, got {self.data[key]!r}"
            )
            return default
        if check is not None and not check(value):
            self.problems.append(
                f"{self._label(key)}: {describe or 'invalid value'} (got {self.data[key]!r})"
            )
            return default
        return value

    def take_snr(self, base, required=True, default=None):
        """Exactly one of <base>_db / <base>_linear; returns linear."""
        db_key, lin_key = f"{base}_db", f"{base}_linear"
        self.seen.update((db_key, lin_key))
        has_db, has_lin = db_key in self.data, lin_key in self.data
        if has_db and has_lin:
            self.problems.append(
                f"{self._label(base)}: give exactly one of {db_key} / {lin_key}, not both"
            )
            return default
        if not has_db and not has_lin:
            if required:
                self.problems.append(
                    f"{self._label(base)}: one of {db_key} / {lin_key} is required"
                )
            return default
        key = db_key if has_db else lin_key
        raw = self.data[key]
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            self.problems.append(f"{self._label(key)}: expected number, got {raw!r}")
            return default
        value = float(db_to_linear(raw)) if has_db else float(raw)
        if not value >= 0.0:
            self.problems.append(f"{self._label(key)}: SNR must be non-negative")
            return default
        return value

    def reject_unknown(self):
        for key in sorted(set(self.data) - self.seen):
            self.problems.append(f"unknown key {self._label(key)}")


class _Root:
    def __init__(self, data, problems):
        self.data = data
        self.problems = problems
        self.seen = set()

    def section(self, name, required=True):
        self.seen.add(name)
        if name not in self.data:
            if required:
                self.problems.append(f"missing section [{name}]")
            return _Section(name, {}, self.problems)
        return _Section(name, self.data[name], self.problems)

    def has(self, name):
        return name in self.data

    def table_list(self, name, required=True):
        self.seen.add(name)
        if name not in self.data:
            if required:
                self.problems.append(f"missing array of tables [[{name}]]")
            return []
        value = self.data[name]
        if not isinstance(value, list) or not all(isinstance(v, dict) for v in value):
            self.problems.append(f"[[{name}]] must be an array of tables")
            return []
        return value

    def reject_unknown(self):
        for key in sorted(set(self.data) - self.seen):
            self.problems.append(f"unknown section or key {key}")


def _prob_check(v):
    return 0.0 < v < 1.0


def _parse_grid_n(section):
    grid = section.take(
        "n",
        "list-int",
        check=lambda g: len(g) > 0
        and all(v >= 1 for v in g)
        and all(b > a for a, b in zip(g, g[1:])),
        describe="must be a nonempty strictly increasing list of integers >= 1",
    )
    section.reject_unknown()
    return grid


def _parse_fading(root):
    sec = root.section("fading")
    rho_b = sec.take_snr("rho_b")
    rho_e = sec.take_snr("rho_e")
    k_alice = sec.take("k_alice", "int", check=lambda v: v >= 1, describe="must be >= 1")
    k_eve = sec.take("k_eve", "int", check=lambda v: v >= 1, describe="must be >= 1")
    sec.reject_unknown()
    resolved = {
        "rho_b_linear": rho_b,
        "rho_e_linear": rho_e,
        "k_alice": k_alice,
        "k_eve": k_eve,
    }
    if None in resolved.values():
        return None, resolved
    return FadingScenario(rho_b, rho_e, k_alice, k_eve), resolved


def _parse_constraints(root):
    sec = root.section("constraints")
    vals = {
        name: sec.take(name, "number", check=_prob_check, describe="must lie strictly inside (0, 1)")
        for name in ("eps_bar", "delta_bar", "zeta")
    }
    sec.reject_unknown()
    if None in vals.values():
        return None, vals
    return SecurityConstraints(**vals), vals


def _parse_plan(root, grid_n, problems, mu_must_be_zero=False):
    sec = root.section("plan")
    b_bits = sec.take("b_bits", "int", check=lambda v: v >= 1, describe="must be >= 1")
    mu = sec.take_snr("mu", required=False, default=0.0)
    sec.reject_unknown()
    if mu_must_be_zero and mu not in (None, 0.0):
        problems.append("plan.mu: this study has no on-off gate; mu must be 0")
    resolved = {"b_bits": b_bits, "mu_linear": mu}
    if b_bits is None or mu is None or not grid_n:
        return None, resolved
    return [TransmissionPlan(b_bits, n, mu) for n in grid_n], resolved


def _parse_mc(root):
    sec = root.section("mc", required=False)
    out = {
        "n_samples": sec.take(
            "n_samples", "int", required=False, default=1_000_000,
            check=lambda v: v >= 100, describe="must be >= 100",
        ),
        "seed": sec.take("seed", "int", required=False, default=0, check=lambda v: v >= 0, describe="must be >= 0"),
        "workers": sec.take("workers", "int", required=False, default=1, check=lambda v: v >= 1, describe="must be >= 1"),
    }
    sec.reject_unknown()
    return out


def _parse_csi_table(name, data, problems):
    sec = _Section(name, data, problems)
    kind = sec.take("kind", "str", check=lambda v: v in ("perfect", "quantized"), describe="must be 'perfect' or 'quantized'")
    bits = sec.take("feedback_bits", "int", required=False, check=lambda v: v >= 1, describe="must be >= 1")
    sec.reject_unknown()
    if kind is None:
        return None, {"kind": None, "feedback_bits": bits}
    if kind == "quantized" and bits is None:
        problems.append(f"{name}: quantized CSI requires feedback_bits")
        return None, {"kind": kind, "feedback_bits": None}
    if kind == "perfect" and bits is not None:
        problems.append(f"{name}: feedback_bits only applies to quantized CSI")
        return None, {"kind": kind, "feedback_bits": bits}
    return CsiModel(kind, bits), {"kind": kind, "feedback_bits": bits}


def parse_scenario(raw: dict):
    """Validate a scenario dict; returns (study, runnable, resolved_config).

    Raises ConfigErrors listing every violated invariant.
    """
    problems: list[str] = []
    root = _Root(raw, problems)

    study_sec = root.section("study")
    study = study_sec.take(
        "type", "str", check=lambda v: v in STUDIES, describe=f"must be one of {STUDIES}"
    )
    mc = _parse_mc(root)
    runnable: dict = {}
    resolved: dict = {"study": {"type": study}, "mc": mc}

    if study == "rate-bounds":
        study_sec.reject_unknown()
        ch_sec = root.section("channel")
        gb = ch_sec.take_snr("gamma_b")
        ge = ch_sec.take_snr("gamma_e")
        ch_sec.reject_unknown()
        rp = root.section("rate_point")
        epsilon = rp.take("epsilon", "number", check=_prob_check, describe="must lie strictly inside (0, 1)")
        delta = rp.take("delta", "number", check=_prob_check, describe="must lie strictly inside (0, 1)")
        if epsilon is not None and delta is not None and epsilon + delta >= 1.0:
            problems.append("rate_point: epsilon + delta must be < 1")
        rp.reject_unknown()
        grid = _parse_grid_n(root.section("grid"))
        resolved.update(
            {
                "channel": {"gamma_b_linear": gb, "gamma_e_linear": ge},
                "rate_point": {"epsilon": epsilon, "delta": delta},
                "grid": {"n": grid},
            }
        )
        if not problems:
            runnable = {
                "channel": ChannelPoint(gb, ge),
                "epsilon": epsilon,
                "delta": delta,
                "grid": grid,
            }

    elif study in ("secrecy-throughput", "effective-throughput"):
        delta_values = None
        if study == "secrecy-throughput":
            delta_values = study_sec.take(
                "delta_bar_values",
                "list-number",
                required=False,
                check=lambda g: len(g) > 0 and all(_prob_check(v) for v in g),
                describe="must be a nonempty list of values strictly inside (0, 1)",
            )
        study_sec.reject_unknown()
        scenario, fading_resolved = _parse_fading(root)
        constraints, cons_resolved = _parse_constraints(root)
        grid = _parse_grid_n(root.section("grid"))
        plans, plan_resolved = _parse_plan(root, grid, problems, mu_must_be_zero=True)
        if delta_values is None and constraints is not None:
            delta_values = [constraints.delta_bar]
        resolved.update(
            {
                "fading": fading_resolved,
                "constraints": cons_resolved,
                "plan": plan_resolved,
                "grid": {"n": grid},
            }
        )
        if study == "secrecy-throughput":
            resolved["study"]["delta_bar_values"] = delta_values
        if not problems:
            runnable = {
                "scenario": scenario,
                "constraints": constraints,
                "plans": plans,
                "delta_bar_values": delta_values,
            }

    elif study == "sop-study":
        study_sec.reject_unknown()
        scenario, fading_resolved = _parse_fading(root)
        constraints, cons_resolved = _parse_constraints(root)
        grid = _parse_grid_n(root.section("grid"))
        plans, plan_resolved = _parse_plan(root, grid, problems)
        schemes = []
        schemes_resolved = []
        for i, data in enumerate(root.table_list("schemes")):
            model, res = _parse_csi_table(f"schemes[{i}]", data, problems)
            schemes.append(model)
            schemes_resolved.append(res)
        if not schemes_resolved:
            problems.append("sop-study requires at least one [[schemes]] table")
        resolved.update(
            {
                "fading": fading_resolved,
                "constraints": cons_resolved,
                "plan": plan_resolved,
                "grid": {"n": grid},
                "schemes": schemes_resolved,
            }
        )
        if not problems:
            runnable = {
                "scenario": scenario,
                "constraints": constraints,
                "plans": plans,
                "schemes": schemes,
            }

    elif study == "optimize":
        study_sec.reject_unknown()
        scenario, fading_resolved = _parse_fading(root)
        constraints, cons_resolved = _parse_constraints(root)
        sw = root.section("sweep")
        variable = sw.take("variable", "str", check=lambda v: v in VARIABLES, describe=f"must be one of {VARIABLES}")
        objective = sw.take("objective", "str", check=lambda v: v in OBJECTIVES, describe=f"must be one of {OBJECTIVES}")
        grid_kind = "list-int" if variable == "blocklength" else "list-number"
        grid = sw.take(
            "grid",
            grid_kind,
            check=lambda g: len(g) > 0 and all(b > a for a, b in zip(g, g[1:])),
            describe="must be a nonempty strictly increasing list"
            + (" of integers" if variable == "blocklength" else ""),
        )
        sw.reject_unknown()
        plan_sec = root.section("plan")
        b_bits = plan_sec.take("b_bits", "int", check=lambda v: v >= 1, describe="must be >= 1")
        n_base = plan_sec.take("n", "int", required=(variable != "blocklength"), check=lambda v: v >= 1, describe="must be >= 1")
        mu = plan_sec.take_snr("mu", required=False, default=0.0)
        plan_sec.reject_unknown()
        csi = None
        csi_resolved = None
        if root.has("csi"):
            csi, csi_resolved = _parse_csi_table("csi", root.section("csi").data, problems)
        if objective == "reliable-throughput" and csi is None:
            problems.append("objective 'reliable-throughput' requires a [csi] section")
        resolved.update(
            {
                "fading": fading_resolved,
                "constraints": cons_resolved,
                "plan": {"b_bits": b_bits, "n": n_base, "mu_linear": mu},
                "sweep": {"variable": variable, "grid": grid, "objective": objective},
                "csi": csi_resolved,
            }
        )
        if not problems:
            base_plan = TransmissionPlan(b_bits, n_base if n_base else int(grid[0]), mu)
            runnable = {
                "scenario": scenario,
                "constraints": constraints,
                "spec": SweepSpec(variable, tuple(grid), objective, constraints, csi),
                "base_plan": base_plan,
            }

    root.reject_unknown()
    if problems:
        raise ConfigErrors(problems)
    return study, runnable, resolved


# --- study runners ----------------------------------------------------------


def _run_rate_bounds(runnable, budget):
    ch = runnable["channel"]
    eps, delta = runnable["epsilon"], runnable["delta"]
    cs = float(secrecy_capacity(ch))
    rows = []
    for n in runnable["grid"]:
        lo = float(achievable_secrecy_rate(n, eps, delta, ch))
        hi = float(converse_secrecy_rate(n, eps, delta, ch))
        rows.append(
            {"N": n, "achievable": lo, "converse": hi, "capacity_gap": cs - lo}
        )
    return rows, {}


def _run_secrecy_throughput(runnable, budget):
    rows = []
    for delta_bar in runnable["delta_bar_values"]:
        base = runnable["constraints"]
        constraints = SecurityConstraints(base.eps_bar, delta_bar, base.zeta)
        for plan in runnable["plans"]:
            e = average_error_prob(plan, runnable["scenario"], constraints, budget)
            rows.append(
                {
                    "N": plan.n,
                    "delta_bar": delta_bar,
                    "r0": plan.r0,
                    "avg_error_prob": e.value,
                    "avg_error_prob_stderr": e.std_error,
                    "throughput": plan.r0 * (1.0 - e.value),
                    "throughput_stderr": plan.r0 * e.std_error,
                    "n_samples": e.n_samples,
                    "seed": e.seed,
                }
            )
    return rows, {}


def _run_effective_throughput(runnable, budget):
    rows = []
    for plan in runnable["plans"]:
        res = effective_throughput(plan, runnable["scenario"], runnable["constraints"], budget)
        rows.append(
            {
                "N": plan.n,
                "r0": plan.r0,
                "outage_prob": res.outage.value,
                "outage_prob_stderr": res.outage.std_error,
                "throughput": res.throughput.value,
                "throughput_stderr": res.throughput.std_error,
                "feasible": res.feasible,
                "n_samples": res.outage.n_samples,
                "seed": res.outage.seed,
            }
        )
    return rows, {}


def _scheme_label(csi):
    return "perfect" if csi.kind == "perfect" else f"quantized-{csi.feedback_bits}"


def _run_sop_study(runnable, budget):
    rows = []
    for plan in runnable["plans"]:
        for csi in runnable["schemes"]:
            res = reliable_throughput(
                plan, runnable["scenario"], runnable["constraints"], csi, budget
            )
            rows.append(
                {
                    "N": plan.n,
                    "scheme": _scheme_label(csi),
                    "throughput": res.throughput.value,
                    "throughput_stderr": res.throughput.std_error,
                    "sop": res.sop.value if res.sop else float("nan"),
                    "sop_stderr": res.sop.std_error if res.sop else float("nan"),
                    "sop_feasible": res.meets_constraint,
                    "n_samples": res.throughput.n_samples,
                    "seed": res.throughput.seed,
                }
            )
    return rows, {}


def _run_optimize(runnable, budget):
    spec = runnable["spec"]
    table = sweep(spec, runnable["scenario"], runnable["base_plan"], budget)
    outcome = argmax_feasible(table)
    is_opt = isinstance(outcome, ArgmaxResult)
    rows = []
    for row in table.rows:
        rows.append(
            {
                "variable": spec.variable,
                "value": row.value,
                "objective": spec.objective,
                "objective_value": row.estimate.value,
                "objective_value_stderr": row.estimate.std_error,
                "feasible": row.feasible,
                "is_optimum": is_opt and row.value == outcome.value,
                "tie": is_opt and outcome.tied and row.value == outcome.value,
                "n_samples": row.estimate.n_samples,
                "seed": row.estimate.seed,
            }
        )
    extra = {
        "optimum": (
            {"value": outcome.value, "objective_value": outcome.estimate.value, "tied": outcome.tied}
            if is_opt
            else None
        )
    }
    if not is_opt:
        raise InfeasibleFound(rows, extra)
    return rows, extra


class InfeasibleFound(InfeasibleEverywhere):
    """Optimization found no feasible point; carries the sweep rows."""

    def __init__(self, rows, extra):
        self.rows = rows
        self.extra = extra
        super().__init__("every grid point violates its constraint")


RUNNERS = {
    "rate-bounds": _run_rate_bounds,
    "secrecy-throughput": _run_secrecy_throughput,
    "effective-throughput": _run_effective_throughput,
    "sop-study": _run_sop_study,
    "optimize": _run_optimize,
}


# --- output -----------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    return "%.9g" % float(value)


def _atomic_write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, study: str, rows):
    columns = CSV_COLUMNS[study]
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    _atomic_write_text(path, "\n".join(lines) + "\n")


def _noise_warnings(study: str, rows):
    """Flag estimates whose 3*stderr exceeds 1% of the value."""
    noisy = 0
    total = 0
    for row in rows:
        for col in CSV_COLUMNS[study]:
            if not col.endswith("_stderr"):
                continue
            base = col[: -len("_stderr")]
            value, stderr = row.get(base), row.get(col)
            if not isinstance(value, (int, float)) or not isinstance(stderr, (int, float)):
                continue
            if stderr != stderr or value != value:  # NaN placeholders
                continue
            total += 1
            if value != 0 and 3.0 * stderr > 0.01 * abs(value):
                noisy += 1
    if noisy:
        return [
            f"{noisy} of {total} estimates have 3*stderr above 1% of their value; "
            "consider a larger --samples budget"
        ]
    return []


# --- public operations ------------------------------------------------------


def bundled_scenarios() -> dict[str, Path]:
    """Names and paths of the bundled figure-reproduction scenarios."""
    base = resources.files("fbsec").joinpath("scenarios")
    out = {}
    for entry in sorted(base.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".toml"):
            out[entry.name[: -len(".toml")]] = Path(str(entry))
    return out


def _resolve_scenario_path(arg: str) -> Path:
    p = Path(arg)
    if p.exists():
        return p
    name = arg[: -len(".toml")] if arg.endswith(".toml") else arg
    bundled = bundled_scenarios()
    if name in bundled:
        return bundled[name]
    raise ConfigErrors([f"scenario file not found: {arg}"])


def validate(scenario_path) -> list[str]:
    """All violated invariants of a scenario file (empty when valid)."""
    path = _resolve_scenario_path(str(scenario_path))
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as err:
        return [f"TOML parse error: {err}"]
    try:
        parse_scenario(raw)
    except ConfigErrors as err:
        return err.problems
    return []


def run(scenario_path, output_dir, seed=None, samples=None, workers=None) -> int:
    """Run one scenario and write results.csv + manifest.json.

    Returns the process exit code; raises nothing on the documented
    failure modes (diagnostics go to stderr).
    """
    try:
        path = _resolve_scenario_path(str(scenario_path))
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
        study, runnable, resolved = parse_scenario(raw)
    except tomllib.TOMLDecodeError as err:
        return _diag(EXIT_CONFIG, f"TOML parse error: {err}")
    except ConfigErrors as err:
        return _diag(EXIT_CONFIG, "; ".join(err.problems))

    mc = dict(resolved["mc"])
    if seed is not None:
        mc["seed"] = seed
    if samples is not None:
        mc["n_samples"] = samples
    if workers is not None:
        mc["workers"] = workers
    resolved["mc"] = mc
    try:
        budget = McBudget(mc["n_samples"], mc["seed"], mc["workers"])
    except ValueError as err:
        return _diag(EXIT_CONFIG, str(err))

    out = Path(output_dir)
    status = EXIT_OK
    status_message = None
    extra = {}
    started = time.perf_counter()
    try:
        rows, extra = RUNNERS[study](runnable, budget)
    except InfeasibleFound as err:
        rows, extra = err.rows, err.extra
        status = EXIT_INFEASIBLE
        status_message = str(err)
    except InsufficientConditioningError as err:
        return _diag(EXIT_MC, str(err))
    except ValueError as err:
        return _diag(EXIT_CONFIG, str(err))
    elapsed = time.perf_counter() - started

    warnings = _noise_warnings(study, rows)
    for message in warnings:
        print(f"warning: {message}", file=sys.stderr)

    manifest = {
        "tool": "fbsec",
        "version": _version(),
        "schema_version": SCHEMA_VERSION,
        "study": study,
        "scenario_file": str(path),
        "resolved_config": resolved,
        "csv_columns": list(CSV_COLUMNS[study]),
        "results_csv": "results.csv",
        "rows": len(rows),
        "runtime_seconds": {study: elapsed},
        "warnings": warnings,
        **extra,
    }
    write_csv(out / "results.csv", study, rows)
    _atomic_write_text(out / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {out / 'results.csv'} ({len(rows)} rows) and {out / 'manifest.json'}")
    if status != EXIT_OK:
        return _diag(status, status_message)
    return status


def _diag(code: int, message: str) -> int:
    line = json.dumps({"tool": "fbsec", "code": code, "error": " ".join(str(message).split())})
    print(line, file=sys.stderr)
    return code


# --- entry point ------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fbsec",
        description="Finite-blocklength physical-layer-security studies over fading wiretap channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Run a scenario file and write CSV + manifest.")
    p_run.add_argument("scenario", help="Path to a scenario .toml, or a bundled name (fig2..fig5).")
    p_run.add_argument("--out", required=True, help="Output directory.")
    p_run.add_argument("--seed", type=int, default=None, help="Override mc.seed.")
    p_run.add_argument("--samples", type=int, default=None, help="Override mc.n_samples.")
    p_run.add_argument("--workers", type=int, default=None, help="Override mc.workers.")

    p_val = sub.add_parser("validate", help="Check a scenario file without running it.")
    p_val.add_argument("scenario")

    sub.add_parser("list", help="List bundled scenarios.")

    args = parser.parse_args(argv)

    if args.command == "run":
        return run(args.scenario, args.out, args.seed, args.samples, args.workers)
    if args.command == "validate":
        try:
            problems = validate(args.scenario)
        except ConfigErrors as err:
            problems = err.problems
        if problems:
            for problem in problems:
                print(problem)
            return _diag(EXIT_CONFIG, f"{len(problems)} validation problem(s)")
        print("valid")
        return EXIT_OK
    for name, path in bundled_scenarios().items():
        print(f"{name}\t{path}")
    return EXIT_OK
