"""Command-line entry point: ``stiffpress {simulate,limit,sweep,diagnose,selftest}``.

Exit status is 0 on success, 1 on a configuration error and 2 on a
numerical failure.
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .config import load_config, read_density_csv
from .diagnostics import (
    KineticGrid,
    erode,
    kinetic_two_valued_metric,
    mu_profile,
    pressure_sup_bound_check,
    record_diagnostics,
)
from .errors import ConfigurationError, NumericalFailure, StiffPressError
from .harness import fmt_real, run_sweep, write_dump, write_run
from .hyperbolic import run_hyperbolic
from .pme import run_pme
from .selftest import selftest
from .state import make_state

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _output_dir(args, cfg):
    return Path(args.output_dir or cfg.output_dir)


def cmd_run(args, solver):
    cfg = load_config(args.config)
    out = _output_dir(args, cfg)
    runner = run_pme if solver == "pme" else run_hyperbolic
    try:
        result = runner(cfg)
    except NumericalFailure as exc:
        if exc.dump is not None:
            out.mkdir(parents=True, exist_ok=True)
            print(f"state dump: {write_dump(exc.dump, out / 'failure_dump.csv')}", file=sys.stderr)
        raise
    for path in write_run(result, out):
        print(path)
    print(f"steps={result.n_steps} mass_drift={result.mass_drift:.3e} max_clipped={result.clipped.max(initial=0.0):.3e}")
    return EXIT_OK


def cmd_sweep(args):
    cfg = load_config(args.config)
    path = _output_dir(args, cfg) / "sweep.csv"
    rows = run_sweep(cfg, args.m, args.K, csv_path=path)
    print(path)
    failed = [r for r in rows if r.status != "ok"]
    return EXIT_NUMERICAL if failed else EXIT_OK


def cmd_diagnose(args):
    cfg = load_config(args.config)
    g, p = cfg.grid, cfg.params
    u = read_density_csv(args.snapshot, g)
    if u.min() < 0 or u.max() > p.K:
        raise ConfigurationError(f"snapshot density leaves [0, K={p.K}]", key="u")
    s = make_state(0.0, u, p, g)
    rec = record_diagnostics(s, p, g, 0.0)
    prof = mu_profile(s, p, g)
    inner = erode(prof.interior, 2)
    items = {
        "mass": rec.mass,
        "u_min": rec.u_min,
        "u_max": rec.u_max,
        "P_max": rec.P_max,
        "comp_residual_l1": rec.comp_residual_l1,
        "sat_product_P": rec.sat_product_P,
        "sat_product_gradP": rec.sat_product_gradP,
        "kinetic_metric": kinetic_two_valued_metric(u, g, KineticGrid.for_capacity(p.K)),
        "support_cells": prof.support.sum(),
        "interior_cells": inner.sum(),
        "mu_min_on_support": prof.mu[prof.support].min() if prof.support.any() else None,
        "mu_max_abs_interior": np.abs(prof.mu[inner]).max() if inner.any() else None,
    }
    if p.K < 1:
        items["pressure_ceiling"] = pressure_sup_bound_check(p)
    for key, value in items.items():
        print(f"{key}={value if isinstance(value, (int, np.integer)) else fmt_real(value)}")
    return EXIT_OK


def cmd_selftest(args):
    results = selftest()
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}" + (f"  ({r.detail})" if r.detail else ""))
    failed = sum(not r.ok for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_NUMERICAL


def build_parser():
    parser = argparse.ArgumentParser(prog="stiffpress", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("simulate", "porous-medium run"), ("limit", "hyperbolic limit run")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="config file or preset name (fig1, fig2)")
        p.add_argument("--output-dir")
    p = sub.add_parser("sweep", help="(m, K) sweep written to sweep.csv")
    p.add_argument("config")
    p.add_argument("--m", type=_float_list, required=True)
    p.add_argument("--K", type=_float_list, required=True)
    p.add_argument("--output-dir")
    p = sub.add_parser("diagnose", help="diagnostics of one snapshot CSV")
    p.add_argument("snapshot")
    p.add_argument("config")
    sub.add_parser("selftest", help="built-in checks")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    handlers = {
        "simulate": lambda a: cmd_run(a, "pme"),
        "limit": lambda a: cmd_run(a, "hyperbolic"),
        "sweep": cmd_sweep,
        "diagnose": cmd_diagnose,
        "selftest": cmd_selftest,
    }
    try:
        return handlers[args.command](args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StiffPressError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
