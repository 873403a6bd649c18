"""gnmalpha command line.

Exit codes: 0 ok, 1 input error, 2 verification failure, 3 node budget exceeded.
Settings come from flags, then an optional key=value file (--config), then defaults.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .enumeration import count_min2_matrices, phi_exact_mixture
from .experiments import run_concentration, run_xkr, trials_csv
from .extended import count_variables
from .graph import Graph, InputError, sample_gnm, sample_gnp
from .prediction import Params, predict
from .rng import SeedSpec
from .solver import DEFAULT_BUDGET, BudgetExceeded, alpha_exact
from .verify import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3

DEFAULTS = {
    "n": None, "m": None, "p": None, "eps": 0.1, "trials": 200, "seed": 0,
    "budget": DEFAULT_BUDGET, "out": None, "k": None, "r": 0, "workers": 1,
    "beta": None, "gamma": None, "kappa": None,
}
TYPES = {"n": int, "m": int, "p": float, "eps": float, "trials": int, "seed": int,
         "budget": int, "out": str, "k": int, "r": int, "workers": int,
         "beta": int, "gamma": int, "kappa": int}


def read_config(path: str) -> dict:
    """Flat key=value file; '#' starts a comment."""
    cfg = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, val = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in TYPES:
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            cfg[key] = TYPES[key](val)
        except ValueError:
            raise InputError(f"{path}:{lineno}: bad value for {key}: {val!r}") from None
    return cfg


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config(args.config))
    for key in TYPES:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    return cfg


def _need(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise InputError("missing " + ", ".join("--" + k for k in missing))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _m_of(cfg: dict) -> int:
    """m from --m, or the rounded expectation p C(n,2) when only --p is given."""
    if cfg["m"] is not None:
        return cfg["m"]
    _need(cfg, "p")
    return round(cfg["p"] * cfg["n"] * (cfg["n"] - 1) / 2)


def cmd_predict(cfg, args) -> int:
    _need(cfg, "n")
    rep = predict(Params(cfg["n"], _m_of(cfg), cfg["eps"]))
    _emit(rep.to_json(), cfg["out"])
    return EXIT_OK


def cmd_alpha(cfg, args) -> int:
    g = Graph.from_text(Path(args.graphfile).read_text(encoding="utf-8"))
    try:
        res = alpha_exact(g, cfg["budget"])
    except BudgetExceeded as e:
        _emit(_dump({"status": "budget", "nodes": e.nodes, "lower_bound": e.lower_bound}), cfg["out"])
        return EXIT_BUDGET
    _emit(_dump({"status": "ok", "alpha": res.alpha, "witness": sorted(res.witness),
                 "nodes": res.nodes_explored}), cfg["out"])
    return EXIT_OK


def cmd_sample(cfg, args) -> int:
    _need(cfg, "n")
    seed = SeedSpec(cfg["seed"], 0)
    if cfg["m"] is not None:
        g = sample_gnm(cfg["n"], cfg["m"], seed)
    else:
        _need(cfg, "p")
        g = sample_gnp(cfg["n"], cfg["p"], seed)
    _emit(g.to_text(), cfg["out"])
    return EXIT_OK


def cmd_count(cfg, args) -> int:
    _need(cfg, "k")
    g = Graph.from_text(Path(args.graphfile).read_text(encoding="utf-8"))
    counts = count_variables(g, cfg["k"], cfg["r"])
    _emit(_dump({"k": cfg["k"], "r": cfg["r"], "counts": counts}), cfg["out"])
    return EXIT_OK


def cmd_enumerate(cfg, args) -> int:
    _need(cfg, "beta", "gamma", "kappa")
    res = count_min2_matrices(cfg["beta"], cfg["gamma"], cfg["kappa"])
    _emit(res.to_json(), cfg["out"])
    return EXIT_OK


def cmd_phi_exact(cfg, args) -> int:
    _need(cfg, "n", "m", "k")
    val = phi_exact_mixture(cfg["n"], cfg["m"], cfg["k"], cfg["r"])
    _emit(_dump({"n": cfg["n"], "m": cfg["m"], "k": cfg["k"], "r": cfg["r"],
                 "phi": float(val), "phi_fraction": f"{val.numerator}/{val.denominator}"}), cfg["out"])
    return EXIT_OK


def cmd_verify(cfg, args) -> int:
    rep = run_suite(args.suite)
    _emit(_dump(rep.to_dict()), cfg["out"])
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_experiment(cfg, args) -> int:
    _need(cfg, "n")
    if args.kind == "concentration":
        m = _m_of(cfg) if (cfg["m"] is not None or cfg["p"] is not None) else math.ceil(cfg["n"] ** 1.3)
        summary, rows = run_concentration(cfg["n"], m, cfg["trials"], cfg["seed"], cfg["budget"],
                                          cfg["eps"], cfg["workers"])
        summary.seconds = 0.0  # keep the summary a pure function of the inputs
        if cfg["out"]:
            base = Path(cfg["out"])
            base.with_suffix(".csv").write_text(trials_csv(rows), encoding="utf-8", newline="\n")
            base.with_suffix(".json").write_text(summary.to_json(), encoding="utf-8", newline="\n")
        else:
            sys.stdout.write(summary.to_json())
        return EXIT_OK if summary.failures == 0 else EXIT_BUDGET
    if args.kind == "xkr":
        _need(cfg, "m", "k")
        rep = run_xkr(cfg["n"], cfg["m"], cfg["k"], cfg["r"], cfg["trials"], cfg["seed"])
        _emit(rep.to_json(), cfg["out"])
        return EXIT_OK
    raise InputError(f"unknown experiment {args.kind!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value settings file")
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--p", type=float)
    common.add_argument("--eps", type=float)
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--budget", type=int, help="solver node budget")
    common.add_argument("--out", help="output path (experiment: base name for .csv/.json)")
    common.add_argument("--k", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("--beta", type=int)
    common.add_argument("--gamma", type=int)
    common.add_argument("--kappa", type=int)
    common.add_argument("--workers", type=int)

    ap = argparse.ArgumentParser(prog="gnmalpha", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("predict", parents=[common], help="k_V, k_0, r_0, r_1 report (JSON)")
    p = sub.add_parser("alpha", parents=[common], help="exact independence number of a graph file")
    p.add_argument("graphfile")
    sub.add_parser("sample", parents=[common], help="sample G(n,m) or G(n,p) as an edge list")
    p = sub.add_parser("count", parents=[common], help="U/W/X/Y/Z counts for a graph file")
    p.add_argument("graphfile")
    sub.add_parser("enumerate", parents=[common], help="count 0-1 matrices with row sums >= 2")
    sub.add_parser("phi-exact", parents=[common], help="exact Phi for (n, m, k, r)")
    p = sub.add_parser("verify", parents=[common], help="run an invariant battery")
    p.add_argument("suite", choices=SUITES)
    p = sub.add_parser("experiment", parents=[common], help="seeded Monte-Carlo experiment")
    p.add_argument("kind", choices=("concentration", "xkr"))
    return ap


COMMANDS = {
    "predict": cmd_predict, "alpha": cmd_alpha, "sample": cmd_sample, "count": cmd_count,
    "enumerate": cmd_enumerate, "phi-exact": cmd_phi_exact, "verify": cmd_verify,
    "experiment": cmd_experiment,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg, args)
    except (InputError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
