"""Command-line entry point: ``indtrans {gen,solve,sweep,f4,lemma-check}``.

Human summaries go to stdout; machine output (JSON or CSV) goes to ``--out``
when given. Exit codes: 0 ok, 1 solver or check failure, 2 bad input,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis
from .algorithms import ExactModeTooLarge, SolverParams, greedy_hall_factor, semirandom_factor
from .constructions import catlin, first_column_clique, greedy_trap_instance, latin_greedy_trap, random_knd1
from .core import InvariantViolation, ParseError, is_factor, read_graph, serialize, to_json
from .exhaustive import BudgetExceeded, SizeCapExceeded, brute_force_factor, f4_instance, verify_f4
from .matching import dump_adjacency

EXIT_OK, EXIT_FAILURE, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3

_PARAM_FIELDS = {f.name: f.type for f in dataclasses.fields(SolverParams)}


class InputError(Exception):
    pass


def parse_params(text: str | None, seed: int | None) -> SolverParams:
    """``"c=0.8,delta=0.05"`` -> SolverParams; ``seed`` overrides any seed key."""
    values: dict = {}
    for item in filter(None, (text or "").split(",")):
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or key not in _PARAM_FIELDS:
            raise InputError(f"bad --params entry {item!r}; known keys: {', '.join(_PARAM_FIELDS)}")
        kind = _PARAM_FIELDS[key]
        try:
            if kind in ("bool", bool):
                values[key] = raw.strip().lower() in ("1", "true", "yes", "on")
            elif kind in ("int", int):
                values[key] = int(raw)
            else:
                values[key] = float(raw)
        except ValueError:
            raise InputError(f"bad value for {key}: {raw!r}") from None
    if seed is not None:
        values["seed"] = seed
    try:
        return SolverParams(**values)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(payload: str, out: str | None) -> None:
    if out is None:
        return
    Path(out).write_text(payload)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# gen

def cmd_gen(args) -> int:
    kind, k = args.kind, args.k
    if kind == "random":
        if args.n is None:
            raise InputError("gen random needs both k and n")
        g = random_knd1(k, args.n, args.seed or 0)
    elif args.n is not None:
        raise InputError(f"gen {kind} takes only k")
    elif kind == "catlin":
        g = catlin(k)
    elif kind == "clique":
        g = first_column_clique(k)
    elif args.full:
        g, F = greedy_trap_instance(k)
    else:
        B, W = latin_greedy_trap(k)
        text = dump_adjacency(B)
        print(f"latin-trap k={k}: bipartite m={B.m}, V* = {list(W)}, |N(V*)| = {B.neighborhood(list(W)).size}")
        _write_or_print(text, args.out)
        return EXIT_OK

    g.validate()
    text = to_json(g) + "\n" if args.format == "json" else serialize(g)
    print(f"{kind}: [{g.k},{g.n},1]-graph, {g.edge_count()} edges, valid")
    if kind == "latin-trap":
        print(f"greedy start factor covering {F.t} parts: {F.tolist()}")
    _write_or_print(text, args.out)
    return EXIT_OK


def _write_or_print(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# solve

def _stage_dicts(reports) -> list[dict]:
    return [dataclasses.asdict(r) for r in reports]


def run_solver(g, algorithm: str, params: SolverParams, *, time_budget: float | None = None,
               lemma_checks: bool = False) -> dict:
    """Run one solver and return the machine-readable result (timing excluded)."""
    result: dict = {"algorithm": algorithm, "k": g.k, "n": g.n, "seed": params.seed,
                    "params": params.to_dict(), "stage_reports": [], "factor": None}
    if algorithm == "greedy":
        res = greedy_hall_factor(g)
        F = res.factor
        if F is None:
            result["failed_stage"] = res.failed_stage
            result["witness"] = {"right": list(res.witness.right),
                                 "neighborhood": list(res.witness.neighborhood)}
    elif algorithm == "semirandom":
        res = semirandom_factor(g, params, lemma_checks=lemma_checks)
        F = res.factor
        result["attempts"] = res.attempts
        result["stage_reports"] = _stage_dicts(res.reports)
    elif algorithm == "brute":
        try:
            F = brute_force_factor(g, time_budget=time_budget)
        except BudgetExceeded as exc:
            result["status"] = "budget-exceeded"
            result["nodes"] = exc.nodes
            return result
    else:
        raise InputError(f"unknown algorithm {algorithm!r}")

    if F is not None:
        if not is_factor(g, F):
            raise InvariantViolation(f"{algorithm} emitted an invalid factor")
        result["status"] = "success"
        result["factor"] = F.tolist()
    else:
        result["status"] = "no-factor-exists" if algorithm == "brute" else "failure"
    return result


def cmd_solve(args) -> int:
    params = parse_params(args.params, args.seed)
    g = read_graph(args.input)
    start = time.perf_counter()
    result = run_solver(g, args.algorithm, params, time_budget=args.time_budget,
                        lemma_checks=args.lemma_checks)
    result["wall_time_ms"] = round((time.perf_counter() - start) * 1000, 3) if args.timing else None
    status = result["status"]
    line = f"{args.algorithm} on [{g.k},{g.n},1]: {status}"
    if "attempts" in result:
        line += f" after {result['attempts']} attempt(s)"
    if result["stage_reports"]:
        good = sum(r["good"] for r in result["stage_reports"])
        line += f"; {good}/{len(result['stage_reports'])} stages good in the last attempt"
    print(line)
    _emit(_dump_json(result), args.out)
    return EXIT_OK if status in ("success", "no-factor-exists") else EXIT_FAILURE


# sweep

def _trial(job: tuple) -> dict:
    algorithm, ratio, n, trial, seed, params_dict, timing = job
    k = max(2, math.ceil(ratio * n))
    state = np.random.SeedSequence([seed, n, round(ratio * 10**6), trial]).generate_state(2)
    params = SolverParams(**{**params_dict, "seed": int(state[1])})
    g = random_knd1(k, n, int(state[0]))
    start = time.perf_counter()
    res = run_solver(g, algorithm, params)
    elapsed = (time.perf_counter() - start) * 1000
    if algorithm == "semirandom":
        stages = sum(1 for _ in _until_fallback(res["stage_reports"]))
    elif algorithm == "greedy":
        stages = k - 1 if res["status"] == "success" else res["failed_stage"] - 1
    else:
        stages = None
    return {"k": k, "success": res["status"] == "success", "stages": stages,
            "wall_ms": elapsed if timing else None}


def _until_fallback(reports):
    for r in reports:
        if r["fallback_used"]:
            return
        yield r


def sweep_rows(algorithm: str, ratios, ns, trials: int, seed: int, params: SolverParams,
               workers: int = 1, timing: bool = False) -> list[dict]:
    cells = [(ratio, n) for ratio in ratios for n in ns]
    jobs = [(algorithm, ratio, n, trial, seed, params.to_dict(), timing)
            for ratio, n in cells for trial in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        outcomes = [_trial(job) for job in jobs]
    rows = []
    for idx, (ratio, n) in enumerate(cells):
        chunk = outcomes[idx * trials:(idx + 1) * trials]
        successes = sum(o["success"] for o in chunk)
        rows.append({
            "algorithm": algorithm,
            "ratio": ratio,
            "n": n,
            "k": chunk[0]["k"],
            "trials": trials,
            "successes": successes,
            "success_rate": round(successes / trials, 6),
            "mean_stages_before_fallback": _mean([o["stages"] for o in chunk], 6),
            "mean_wall_ms": _mean([o["wall_ms"] for o in chunk], 3),
        })
    return rows


def _mean(values, digits: int) -> float | None:
    if any(v is None for v in values):
        return None
    return round(float(np.mean(values)), digits)


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def cmd_sweep(args) -> int:
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    params = parse_params(args.params, args.seed)
    try:
        ratios, ns = _float_list(args.ratios), _int_list(args.n)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.algorithm == "brute" and max(ns) > 6:
        raise InputError("brute sweeps are capped at n <= 6")
    rows = sweep_rows(args.algorithm, ratios, ns, args.trials, params.seed, params,
                      workers=args.workers, timing=args.timing)
    for r in rows:
        print(f"ratio={r['ratio']:<7g} n={r['n']:<5d} k={r['k']:<5d} "
              f"success {r['successes']}/{r['trials']}  stages~{r['mean_stages_before_fallback']}")
    if args.format == "json":
        payload = _dump_json({"seed": params.seed, "params": params.to_dict(), "rows": rows})
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows({k: ("" if v is None else v) for k, v in r.items()} for r in rows)
        payload = buf.getvalue()
    _emit(payload, args.out)
    return EXIT_OK


# f4

def cmd_f4(args) -> int:
    rep = verify_f4(args.limit, workers=args.workers, relabel_checks=args.relabel_checks,
                    seed=args.seed or 0)
    print(rep.summary() + (f"; relabel spot checks {rep.relabel_checked}, "
                           f"{len(rep.relabel_failures)} failures" if rep.relabel_checked else ""))
    if args.timing:
        print(f"wall time {rep.wall_time_s:.2f}s")
    if args.dump_failures and rep.failures:
        folder = Path(args.dump_failures)
        folder.mkdir(parents=True, exist_ok=True)
        for idx in rep.failures:
            (folder / f"f4_{idx:05d}.knd1").write_text(serialize(f4_instance(idx)))
    _emit(_dump_json(rep.to_dict(timing=args.timing)), args.out)
    return EXIT_OK if rep.passed else EXIT_FAILURE


# lemma-check

def cmd_lemma_check(args) -> int:
    c = args.c
    lo, hi = analysis.min_feasible_c(args.tolerance)
    c_star = 0.5 * (lo + hi)
    checks: list[tuple[str, str, bool]] = []
    value = analysis.c_condition_value(c)
    checks.append(("2c^2 ln((1+c)/c) >= 1", f"{value:.6f}", value >= 1))
    report = None
    if value >= 1:
        report = analysis.verify_f_nonpositive(c, args.grid_step)
        mu_top = 1 / (1 + c)
        gap = abs(analysis.integral_closed_form(c, mu_top) - analysis.integral_numeric(c, mu_top))
        checks += [
            ("max f on [0, 1/(1+c)] <= 1e-12", f"{report.max_value:.3e}", report.max_value <= 1e-12),
            ("f(0) = -c", f"{report.value_at_zero:.6f}", report.value_at_zero == -c),
            ("f increasing below threshold", f"{report.increasing_threshold:.6f}", report.strictly_increasing),
            ("closed form vs quadrature at 1/(1+c)", f"{gap:.2e}", gap <= 1e-9),
            (f"margin for mu <= (1-{report.epsilon})/(1+c)", f"{report.margin:.6f}", report.margin > 0),
        ]
    width = max(len(name) for name, _, _ in checks)
    print(f"lemma check at c = {c}")
    for name, shown, ok in checks:
        print(f"  {name:<{width}}  {shown:>12}  {'pass' if ok else 'FAIL'}")
    print(f"c* = {c_star:.9f} (bracket width {hi - lo:.1e}); 1/(1+c*) = {1 / (1 + c_star):.6f}")
    passed = all(ok for _, _, ok in checks)
    if not passed and value < 1:
        print(f"c = {c} is below c* so the integral bound cannot hold; pick c >= {hi:.6f}")
    payload = {"c": c, "c_star": c_star, "c_star_bracket": [lo, hi], "passed": passed,
               "checks": [{"name": n, "value": v, "passed": ok} for n, v, ok in checks]}
    _emit(_dump_json(payload), args.out)
    return EXIT_OK if passed else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indtrans", description="factors of independent transversals")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="machine output path")
    common.add_argument("--timing", action="store_true", help="include wall times in machine output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("kind", choices=["random", "catlin", "clique", "latin-trap"])
    p.add_argument("k", type=int)
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--full", action="store_true", help="latin-trap: emit the whole graph instead of the bipartite stage")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", parents=[common], help="search for a factor")
    p.add_argument("input")
    p.add_argument("--algorithm", choices=["greedy", "semirandom", "brute"], default="semirandom")
    p.add_argument("--params", default=None, help="c=,delta=,eta=,epsilon=,restarts=")
    p.add_argument("--time-budget", type=float, default=None)
    p.add_argument("--lemma-checks", action="store_true")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", parents=[common], help="success rates over k/n and n")
    p.add_argument("--ratios", default="0.4,0.5,0.5624")
    p.add_argument("--n", default="200")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--algorithm", choices=["greedy", "semirandom", "brute"], default="semirandom")
    p.add_argument("--params", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("f4", parents=[common], help="check every [4,4,1] instance")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--relabel-checks", type=int, default=100)
    p.add_argument("--dump-failures", default=None, metavar="DIR")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_f4)

    p = sub.add_parser("lemma-check", parents=[common], help="numeric checks of the integral bound")
    p.add_argument("c", type=float, nargs="?", default=0.778)
    p.add_argument("--grid-step", type=float, default=1e-4)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_lemma_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InputError, ParseError, SizeCapExceeded, ExactModeTooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
