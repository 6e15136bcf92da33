"""Command line front end: norm sweeps, single-norm reports, parameter sweeps,
and a self-check table that pits the exact solver against the simulator.

Output files are deterministic: rows are sorted by key, floats go through one
formatter, headers echo every effective parameter, and no timestamps are
written, so reruns and different worker counts produce identical bytes.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from multiprocessing import get_context

import numpy as np

from .evolution import fixation_pair, norm_report, pair_profiles
from .game import FF, FU, STRATEGIES, UF, UU, ModelParams, Scenario, ScenarioKind
from .norms import NormPattern, SocialNorm, all_norms
from .repchain import (
    Composition,
    build_transition_matrix,
    expected_payoffs,
    expected_quit_rate,
    limiting_distribution,
    monomorphic_distribution,
    monomorphic_payoff,
    pair_payoff_profile,
)
from .simulate import SimConfig, simulate_fixation, simulate_reputation

SCHEMA = 1

_DEFAULTS: dict = {
    "scenario": "benchmark",
    "z": 50,
    "eps": 0.01,
    "beta": 1.0,
    "p": 0.01,
    "sigma": 0.1,
    "p1": 0.5,
    "p2": 0.5,
    "norms": "all",
    "threshold": 0.55,
    "grid": None,
    "grid_over": None,
    "workers": 1,
    "seed": 1,
}

_INT_KEYS = {"z", "workers", "seed"}
_FLOAT_KEYS = {"eps", "beta", "p", "sigma", "p1", "p2", "threshold"}


class ConfigError(Exception):
    pass


class ValidationFailure(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; the contract reserves 2 for
    # validation failures, so usage problems are rethrown as config errors
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairdg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument(
            "--scenario",
            choices=["benchmark", "dictator-opt-out", "recipient-opt-out"],
        )
        p.add_argument("--z", type=int)
        p.add_argument("--eps", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--p", type=float)
        p.add_argument("--sigma", type=float)
        p.add_argument("--p1", type=float)
        p.add_argument("--p2", type=float)
        p.add_argument("--config", help="JSON file of defaults (flags win)")
        p.add_argument("--workers", type=int)
        p.add_argument("--seed", type=int)

    ps = sub.add_parser("sweep-norms", help="fairness table over a set of norms")
    add_common(ps)
    ps.add_argument("--norms", help="'all', a comma list of labels, or a pattern")
    ps.add_argument("--threshold", type=float)
    ps.add_argument("--out", required=True)

    pd = sub.add_parser("norm-detail", help="full report for one norm")
    add_common(pd)
    pd.add_argument("--norm", required=True, help="label or matrix text")
    pd.add_argument("--out", required=True, help="JSON path; a _reputation.csv sibling is written too")

    pp = sub.add_parser("sweep-param", help="fairness along a parameter grid")
    add_common(pp)
    pp.add_argument("--norms", help="'all', a comma list of labels, or a pattern")
    pp.add_argument("--threshold", type=float)
    pp.add_argument("--grid", help="start:step:end or a comma list")
    pp.add_argument("--grid-over", dest="grid_over", choices=["p1", "p2", "beta"])
    pp.add_argument("--out", required=True)

    pv = sub.add_parser("validate", help="simulator-vs-solver check table")
    add_common(pv)
    pv.add_argument("--out", help="CSV path (stdout when omitted)")
    return parser


def _load_config(path: str) -> dict:
    try:
        with open(path) as f:
            raw = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    out = {}
    for key, value in raw.items():
        name = key.replace("-", "_")
        if name not in _DEFAULTS:
            raise ConfigError(f"unknown config key: {key}")
        if name in _INT_KEYS:
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"config key {key} must be an integer")
        elif name in _FLOAT_KEYS:
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ConfigError(f"config key {key} must be a number")
            value = float(value)
        elif value is not None and not isinstance(value, str):
            raise ConfigError(f"config key {key} must be a string")
        out[name] = value
    return out


def _effective(args: argparse.Namespace) -> dict:
    eff = dict(_DEFAULTS)
    if getattr(args, "config", None):
        eff.update(_load_config(args.config))
    for name in _DEFAULTS:
        value = getattr(args, name, None)
        if value is not None:
            eff[name] = value
    if eff["z"] < 2:
        raise ConfigError("--z must be at least 2")
    if eff["workers"] < 1:
        raise ConfigError("--workers must be positive")
    if not 0 < eff["threshold"] < 1:
        raise ConfigError("--threshold must lie in (0, 1)")
    return eff


def _build_params(eff: dict) -> ModelParams:
    try:
        return ModelParams(
            z=eff["z"], eps=eff["eps"], p=eff["p"], beta=eff["beta"]
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def _build_scenario(eff: dict) -> Scenario:
    try:
        if eff["scenario"] == "benchmark":
            return Scenario.benchmark()
        if eff["scenario"] == "dictator-opt-out":
            return Scenario.dictator_opt_out(p1=eff["p1"], sigma=eff["sigma"])
        if eff["scenario"] == "recipient-opt-out":
            return Scenario.recipient_opt_out(p2=eff["p2"])
    except ValueError as exc:
        raise ConfigError(str(exc))
    raise ConfigError(f"unknown scenario: {eff['scenario']}")


def _select_norms(text: str) -> list[SocialNorm]:
    text = text.strip()
    if text.lower() == "all":
        return list(all_norms())
    if any(ch in text for ch in "*;["):
        try:
            return list(NormPattern.parse(text).match())
        except ValueError as exc:
            raise ConfigError(f"bad norm pattern: {exc}")
    norms = {}
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            norm = SocialNorm.parse(token)
        except ValueError as exc:
            raise ConfigError(f"bad norm '{token}': {exc}")
        norms[norm.label] = norm
    if not norms:
        raise ConfigError("empty norm selection")
    return [norms[k] for k in sorted(norms)]


def _parse_grid(text: str | None, over: str) -> list[float]:
    if not text:
        raise ConfigError("sweep-param needs --grid")
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(tok) for tok in text.split(":")]
            if len(parts) != 3:
                raise ValueError("expected start:step:end")
            start, step, end = parts
            if step <= 0:
                raise ValueError("step must be positive")
            values = []
            k = 0
            while True:
                v = start + k * step
                if v > end + 1e-12:
                    break
                values.append(min(v, end))
                k += 1
        else:
            values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad grid '{text}': {exc}")
    if not values:
        raise ConfigError("grid is empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError("grid must be strictly ascending")
    if over in ("p1", "p2") and (values[0] < 0 or values[-1] > 1):
        raise ConfigError(f"{over} grid values must lie in [0, 1]")
    if over == "beta" and values[0] < 0:
        raise ConfigError("beta grid values must be nonnegative")
    return values


# ---------------------------------------------------------------------------
# CSV plumbing


def _scenario_header(eff: dict) -> list[str]:
    lines = [f"scenario={eff['scenario']}"]
    if eff["scenario"] == "dictator-opt-out":
        lines += [f"p1={_fmt(eff['p1'])}", f"sigma={_fmt(eff['sigma'])}"]
    elif eff["scenario"] == "recipient-opt-out":
        lines += [f"p2={_fmt(eff['p2'])}"]
    return lines


def _model_header(eff: dict) -> list[str]:
    return [
        f"z={eff['z']}",
        f"eps={_fmt(eff['eps'])}",
        f"p={_fmt(eff['p'])}",
        f"beta={_fmt(eff['beta'])}",
    ]


def _read_table(path: str):
    header = []
    columns = None
    rows = []
    with open(path) as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("# "):
                header.append(line[2:])
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    return header, columns, rows


def _load_resumable(path: str, header: list[str], columns: list[str], key_width: int):
    """Rows already present in a compatible output file, keyed by the first
    key_width cells. A file with different header or columns is a hard error
    rather than something to silently redo."""
    if not os.path.exists(path):
        return {}
    old_header, old_columns, old_rows = _read_table(path)
    if old_header != header or old_columns != columns:
        raise ConfigError(
            f"existing output {path} was produced with different settings; "
            "remove it or write elsewhere"
        )
    # an interrupted copy may end mid-row; incomplete rows are recomputed
    return {
        tuple(r[:key_width]): r for r in old_rows if len(r) == len(columns)
    }


def _write_table(path: str, header: list[str], columns: list[str], rows: list[list[str]]):
    tmp = path + ".tmp"
    with open(tmp, "w") as f:
        for line in header:
            f.write(f"# {line}\n")
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(row) + "\n")
    os.replace(tmp, path)


def _run_tasks(tasks, worker, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with get_context("fork").Pool(min(workers, len(tasks))) as pool:
        return pool.map(worker, tasks, chunksize=1)


# ---------------------------------------------------------------------------
# sweep-norms

_SWEEP_COLUMNS = (
    ["label"]
    + [f"phi_{s.name}" for s in STRATEGIES]
    + [f"ff_{s.name}" for s in STRATEGIES]
    + ["F", "high"]
)


def _norm_row_task(task):
    label, scenario, params, threshold = task
    rep = norm_report(SocialNorm.from_label(label), scenario, params)
    row = [str(label)]
    row += [_fmt(v) for v in rep.phi]
    row += [_fmt(v) for v in rep.per_strategy_fairness]
    row += [_fmt(rep.fairness), "1" if rep.fairness > threshold else "0"]
    return row


def _sweep_norms(args) -> int:
    eff = _effective(args)
    params = _build_params(eff)
    scenario = _build_scenario(eff)
    norms = _select_norms(eff["norms"])
    header = (
        [f"schema={SCHEMA}", "command=sweep-norms"]
        + _scenario_header(eff)
        + _model_header(eff)
        + [f"norms={eff['norms']}", f"threshold={_fmt(eff['threshold'])}"]
    )
    done = _load_resumable(args.out, header, list(_SWEEP_COLUMNS), key_width=1)
    tasks = [
        (n.label, scenario, params, eff["threshold"])
        for n in norms
        if (str(n.label),) not in done
    ]
    for row in _run_tasks(tasks, _norm_row_task, eff["workers"]):
        done[(row[0],)] = row
    rows = [done[k] for k in sorted(done, key=lambda k: int(k[0]))]
    _write_table(args.out, header, list(_SWEEP_COLUMNS), rows)
    return 0


# ---------------------------------------------------------------------------
# norm-detail


def _norm_detail(args) -> int:
    eff = _effective(args)
    params = _build_params(eff)
    scenario = _build_scenario(eff)
    try:
        norm = SocialNorm.parse(args.norm)
    except ValueError as exc:
        raise ConfigError(f"bad norm '{args.norm}': {exc}")
    rep = norm_report(norm, scenario, params)
    with open(args.out + ".tmp", "w") as f:
        json.dump(rep.to_json_dict(), f, indent=2)
        f.write("\n")
    os.replace(args.out + ".tmp", args.out)

    stem, _ = os.path.splitext(args.out)
    csv_path = stem + "_reputation.csv"
    header = (
        [f"schema={SCHEMA}", "command=norm-detail", f"norm={norm.label}"]
        + _scenario_header(eff)
        + _model_header(eff)
    )
    columns = ["i"] + [f"v_{s.name}" for s in STRATEGIES]
    rows = []
    for i in range(params.z + 1):
        rows.append(
            [str(i)] + [_fmt(rep.mono_marginals[s.name][i]) for s in STRATEGIES]
        )
    _write_table(csv_path, header, columns, rows)
    return 0


# ---------------------------------------------------------------------------
# sweep-param

_PARAM_COLUMNS = ["value", "label", "F", "phi_focal", "ff_focal", "high"]


def _focal_strategy(scenario_name: str):
    return UF if scenario_name == "dictator-opt-out" else FU


def _param_point_task(task):
    """One (grid value, norm) evaluation for a p1 or p2 grid."""
    label, value, eff, threshold = task
    eff = dict(eff, **{eff["grid_over"]: value})
    params = _build_params(eff)
    scenario = _build_scenario(eff)
    focal = _focal_strategy(eff["scenario"])
    fi = STRATEGIES.index(focal)
    rep = norm_report(SocialNorm.from_label(label), scenario, params)
    return [
        _fmt(value),
        str(label),
        _fmt(rep.fairness),
        _fmt(rep.phi[fi]),
        _fmt(rep.per_strategy_fairness[fi]),
        "1" if rep.fairness > threshold else "0",
    ]


def _beta_curve_task(task):
    """All beta grid points for one norm; the reputation chains do not depend
    on beta, so the pair profiles are solved once and reused."""
    label, values, eff, threshold = task
    params = _build_params(eff)
    scenario = _build_scenario(eff)
    focal = _focal_strategy(eff["scenario"])
    fi = STRATEGIES.index(focal)
    norm = SocialNorm.from_label(label)
    profiles = pair_profiles(params, norm, scenario)
    monos = {
        s.name: monomorphic_distribution(s, params, norm, scenario).marginal_i()
        for s in STRATEGIES
    }
    rows = []
    for value in values:
        rep = norm_report(
            norm,
            scenario,
            dataclasses.replace(params, beta=value),
            profiles=profiles,
            mono_marginals=monos,
        )
        rows.append(
            [
                _fmt(value),
                str(label),
                _fmt(rep.fairness),
                _fmt(rep.phi[fi]),
                _fmt(rep.per_strategy_fairness[fi]),
                "1" if rep.fairness > threshold else "0",
            ]
        )
    return rows


def _sweep_param(args) -> int:
    eff = _effective(args)
    over = eff["grid_over"]
    if over is None:
        over = {"dictator-opt-out": "p1", "recipient-opt-out": "p2"}.get(eff["scenario"])
        if over is None:
            raise ConfigError("--grid-over is required for the benchmark scenario")
        eff["grid_over"] = over
    if over == "p1" and eff["scenario"] != "dictator-opt-out":
        raise ConfigError("a p1 grid needs --scenario dictator-opt-out")
    if over == "p2" and eff["scenario"] != "recipient-opt-out":
        raise ConfigError("a p2 grid needs --scenario recipient-opt-out")
    values = _parse_grid(eff["grid"], over)
    _build_params(eff)
    _build_scenario(eff)
    norms = _select_norms(eff["norms"])
    focal = _focal_strategy(eff["scenario"])

    scen_header = _scenario_header(eff)
    model_header = _model_header(eff)
    axis = f"{over}={_fmt(eff[over])}" if over in ("p1", "p2") else f"beta={_fmt(eff['beta'])}"
    scen_header = [h for h in scen_header if h != axis]
    model_header = [h for h in model_header if h != axis]
    header = (
        [f"schema={SCHEMA}", "command=sweep-param", f"grid-over={over}"]
        + [f"grid={','.join(_fmt(v) for v in values)}"]
        + scen_header
        + model_header
        + [
            f"norms={eff['norms']}",
            f"threshold={_fmt(eff['threshold'])}",
            f"focal={focal.name}",
        ]
    )
    done = _load_resumable(args.out, header, _PARAM_COLUMNS, key_width=2)
    if over == "beta":
        tasks = []
        for n in norms:
            missing = [
                v for v in values if (_fmt(v), str(n.label)) not in done
            ]
            if missing:
                tasks.append((n.label, missing, eff, eff["threshold"]))
        for rows in _run_tasks(tasks, _beta_curve_task, eff["workers"]):
            for row in rows:
                done[(row[0], row[1])] = row
    else:
        tasks = [
            (n.label, v, eff, eff["threshold"])
            for v in values
            for n in norms
            if (_fmt(v), str(n.label)) not in done
        ]
        for row in _run_tasks(tasks, _param_point_task, eff["workers"]):
            done[(row[0], row[1])] = row
    rows = [
        done[k] for k in sorted(done, key=lambda k: (float(k[0]), int(k[1])))
    ]
    _write_table(args.out, header, _PARAM_COLUMNS, rows)
    return 0


# ---------------------------------------------------------------------------
# validate

_OCC_PANEL = [
    # name, norm label, scenario key, x, y, m
    ("bench-255-mixed", 255, "benchmark", FU, UF, 4),
    ("bench-165-mixed", 165, "benchmark", FU, UU, 5),
    ("bench-165-mono-UF", 165, "benchmark", UF, UF, 10),
    ("bench-153-mixed", 153, "benchmark", FF, UU, 3),
    ("dictator-69-mixed", 69, "dictator-opt-out", UF, FF, 3),
    ("dictator-69-mono-UF", 69, "dictator-opt-out", UF, UF, 10),
    ("dictator-229-mixed", 229, "dictator-opt-out", UU, UF, 7),
    ("recipient-165-mixed", 165, "recipient-opt-out", FU, UU, 5),
    ("recipient-165-mono-FU", 165, "recipient-opt-out", FU, FU, 10),
    ("recipient-90-mixed", 90, "recipient-opt-out", UF, FU, 2),
]

_VALIDATE_Z = 10
_OCC_ROUNDS = 1_100_000
_OCC_BURN_IN = 100_000
_FIX_REPLICATES = 10_000


def _validate_scenario(key: str) -> Scenario:
    if key == "benchmark":
        return Scenario.benchmark()
    if key == "dictator-opt-out":
        return Scenario.dictator_opt_out(p1=0.5, sigma=0.1)
    return Scenario.recipient_opt_out(p2=0.5)


def _occ_case_task(task):
    idx, name, label, scen_key, x, y, m, seed = task
    params = ModelParams(z=_VALIDATE_Z)
    scenario = _validate_scenario(scen_key)
    norm = SocialNorm.from_label(label)
    comp = Composition(_VALIDATE_Z, m, x, y)
    cfg = SimConfig(
        params=params,
        scenario=scenario,
        norm=norm,
        comp=comp,
        rounds=_OCC_ROUNDS,
        seed=seed,
        burn_in=_OCC_BURN_IN,
    )
    sim = simulate_reputation(cfg)
    tm = build_transition_matrix(comp, params, norm, scenario)
    dist = limiting_distribution(tm)
    rows = []
    tv = 0.5 * float(np.abs(sim.occupancy - dist.weights).sum())
    rows.append((name, "tv", tv, 0.02, tv < 0.02))
    if comp.m == comp.z:
        g = monomorphic_payoff(x, params, norm, scenario, dist)
        dgx = abs(sim.mean_payoff_x - g)
        rows.append((name, "payoff_x_err", dgx, 0.01, dgx < 0.01))
    else:
        g_x, g_y = expected_payoffs(comp, params, norm, scenario, dist)
        dgx = abs(sim.mean_payoff_x - g_x)
        dgy = abs(sim.mean_payoff_y - g_y)
        rows.append((name, "payoff_x_err", dgx, 0.01, dgx < 0.01))
        rows.append((name, "payoff_y_err", dgy, 0.01, dgy < 0.01))
    if scenario.kind is not ScenarioKind.BENCHMARK:
        rate = expected_quit_rate(comp, params, norm, scenario, dist)
        se = sim.quit_rate_se()
        if se > 0:
            dev = abs(sim.quit_rate - rate) / se
            rows.append((name, "quit_rate_dev_se", dev, 3.0, dev < 3.0))
    return idx, rows


def _fix_case_task(task):
    idx, kind, seed = task
    params_kw = {"z": _VALIDATE_Z}
    if kind == "neutral-255-UF-into-UU":
        # identical behavior when everyone is good: only s_G is expressed
        norm, scenario = SocialNorm.from_label(255), Scenario.benchmark()
        x, y = UF, UU
        expected = 1.0 / _VALIDATE_Z
        rpe = 500
    elif kind == "beta0-165-FU-into-UU":
        norm = SocialNorm.from_label(165)
        scenario = Scenario.recipient_opt_out(p2=0.5)
        x, y = FU, UU
        params_kw["beta"] = 0.0
        expected = 1.0 / _VALIDATE_Z
        rpe = 500
    else:  # analytic-165-FU-into-UU
        norm = SocialNorm.from_label(165)
        scenario = Scenario.recipient_opt_out(p2=0.5)
        x, y = FU, UU
        expected = None
        rpe = None
    params = ModelParams(**params_kw)
    if expected is None:
        profile = pair_payoff_profile(x, y, params, norm, scenario)
        expected, _ = fixation_pair(profile, params.beta)
    cfg = SimConfig(
        params=params,
        scenario=scenario,
        norm=norm,
        comp=Composition(_VALIDATE_Z, 1, x, y),
        rounds=10**12,
        seed=seed,
    )
    out = simulate_fixation(cfg, replicates=_FIX_REPLICATES, rounds_per_event=rpe)
    se = math.sqrt(expected * (1.0 - expected) / _FIX_REPLICATES)
    dev = abs(out.frequency - expected) / se
    return idx, [(f"fixation-{kind}", "freq_dev_se", dev, 3.0, dev < 3.0)]


_VALIDATE_COLUMNS = ["check", "metric", "value", "bound", "status"]


def _validate_case_task(task):
    if len(task) == 8:
        return _occ_case_task(task)
    return _fix_case_task(task)


def _validate(args) -> int:
    eff = _effective(args)
    tasks = []
    for i, (name, label, scen_key, x, y, m) in enumerate(_OCC_PANEL):
        tasks.append((i, name, label, scen_key, x, y, m, eff["seed"] * 10007 + i))
    fix_kinds = [
        "neutral-255-UF-into-UU",
        "beta0-165-FU-into-UU",
        "analytic-165-FU-into-UU",
    ]
    fix_tasks = [
        (len(tasks) + j, kind, eff["seed"] * 10007 + 100 + j)
        for j, kind in enumerate(fix_kinds)
    ]
    results = _run_tasks(tasks + fix_tasks, _validate_case_task, eff["workers"])
    results.sort(key=lambda r: r[0])
    rows = []
    ok = True
    for _, case_rows in results:
        for name, metric, value, bound, passed in case_rows:
            ok &= passed
            rows.append([name, metric, _fmt(value), _fmt(bound), "pass" if passed else "FAIL"])
    header = [
        f"schema={SCHEMA}",
        "command=validate",
        f"z={_VALIDATE_Z}",
        f"rounds={_OCC_ROUNDS - _OCC_BURN_IN}",
        f"replicates={_FIX_REPLICATES}",
        f"seed={eff['seed']}",
    ]
    if args.out:
        _write_table(args.out, header, _VALIDATE_COLUMNS, rows)
    else:
        for line in header:
            print(f"# {line}")
        print(",".join(_VALIDATE_COLUMNS))
        for row in rows:
            print(",".join(row))
    if not ok:
        raise ValidationFailure("one or more oracle checks failed")
    return 0


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "sweep-norms":
            return _sweep_norms(args)
        if args.command == "norm-detail":
            return _norm_detail(args)
        if args.command == "sweep-param":
            return _sweep_param(args)
        return _validate(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationFailure as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
