"""Command-line interface.

Subcommands: ``moments``, ``sweep``, ``qnormal-table``, ``simulate``, ``compare``.
Exit codes: 0 success, 2 validation error, 3 numerical/degenerate error,
4 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from .asymptotic import asymptotic_report
from .errors import DimensionCapError, QmomError, ValidationError
from .config import RunConfig, load_config
from .finite import moment_report
from .model import RScheme, SystemSpec, Uniform
from .qnormal import QuadratureError, q_hermite, qnormal_pdf, support
from .simulator import (
    EnsembleConfig,
    compare_with_theory,
    ensemble_moments,
    histogram_csv,
    to_json,
)
from .sweep import grid_systems, rows_to_csv, sweep

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_RESOURCE = 0, 2, 3, 4


def _add_system(p):
    g = p.add_argument_group("system")
    g.add_argument("--stats", choices=["fermion", "boson"])
    g.add_argument("--N1", type=int)
    g.add_argument("--m1", type=int)
    g.add_argument("--N2", type=int)
    g.add_argument("--m2", type=int)


def _add_interaction(p, with_k=True):
    g = p.add_argument_group("interaction")
    if with_k:
        g.add_argument("--k", type=int)
    g.add_argument("--scheme", choices=["uniform", "rscheme", "table"])
    g.add_argument("--v2", help="base variance (rational, e.g. 1 or 0.5 or 1/3)")
    g.add_argument("--R", help="cross-species variance ratio for --scheme rscheme")
    g.add_argument("--table", help="explicit variances, e.g. '2,0=1; 1,1=0.5; 0,2=1'")
    g.add_argument("--y-policy", dest="y_policy",
                   choices=["asymptotic_u", "drop", "asymptotic_reduced", "exact_trace"])
    g.add_argument("--mode", choices=["finite", "asymptotic"])


def _add_simulate(p):
    g = p.add_argument_group("simulation")
    g.add_argument("--members", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--bins", type=int)
    g.add_argument("--workers", type=int)
    g.add_argument("--dim-cap", dest="dim_cap", type=int)
    g.add_argument("--histogram", help="write the standardized eigenvalue histogram CSV here")
    g.add_argument("--json", help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmom",
        description="Moments of two-species k-body embedded GUEs and the q-normal density.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="mu2, q, mu4, mu6 at one parameter point")
    p.add_argument("--config")
    _add_system(p)
    _add_interaction(p)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--json", help="write the JSON report here instead of stdout")

    p = sub.add_parser("sweep", help="CSV of q and mu6 for k = k_min .. k_max")
    p.add_argument("--config")
    _add_system(p)
    _add_interaction(p, with_k=False)
    p.add_argument("--k-min", dest="k_min", type=int)
    p.add_argument("--k-max", dest="k_max", type=int)
    p.add_argument("--grid", choices=["fermion", "boson", "small-m1"],
                   help="sweep every system of a built-in default grid")
    p.add_argument("--csv", help="write CSV here instead of stdout")

    p = sub.add_parser("qnormal-table", help="q-normal density and He_1..He_4 on a grid")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--x-min", type=float, default=-4.0)
    p.add_argument("--x-max", type=float, default=4.0)
    p.add_argument("--points", type=int, default=81)
    p.add_argument("--csv", help="write CSV here instead of stdout")

    for name, help_ in (("simulate", "Monte Carlo moments of the explicit ensemble"),
                        ("compare", "formulas against Monte Carlo")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config")
        _add_system(p)
        _add_interaction(p)
        _add_simulate(p)
    return parser


_CONFIG_KEYS = (
    "stats", "N1", "m1", "N2", "m2", "k", "scheme", "v2", "R", "table", "y_policy", "mode",
    "k_min", "k_max", "grid", "members", "seed", "bins", "workers", "dim_cap",
    "json", "csv", "histogram",
)


def _config(args) -> RunConfig:
    cfg = load_config(getattr(args, "config", None))
    flags = {key: getattr(args, key, None) for key in _CONFIG_KEYS}
    return cfg.override(**flags)


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(cfg: RunConfig, k: Optional[int] = None):
    system = cfg.system()
    inter = cfg.interaction(k)
    if cfg.mode == "asymptotic":
        return asymptotic_report(system, inter, cfg.y_policy)
    return moment_report(system, inter, cfg.policy())


def cmd_moments(args) -> int:
    cfg = _config(args)
    rep = _report(cfg)
    if args.format == "text":
        lines = [
            f"mode         {rep.mode}",
            f"y_policy     {rep.y_policy}",
            f"mu2          {rep.mu2!r}",
            f"q            {rep.q!r}",
            f"mu4          {rep.mu4!r}",
            f"mu6_formula  {rep.mu6_formula!r}",
            f"mu6_qnormal  {rep.mu6_qnormal!r}",
            f"rel_diff     {rep.rel_diff!r}",
        ]
        _emit("\n".join(lines) + "\n", cfg.json)
    else:
        _emit(to_json(rep.to_dict()), cfg.json)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if cfg.scheme == "rscheme":
        scheme = RScheme(cfg.v2, cfg.R)
    elif cfg.scheme == "uniform":
        scheme = Uniform(cfg.v2)
    else:
        raise ValidationError("sweeps support the uniform and rscheme variance schemes")
    policy = cfg.y_policy
    if cfg.grid:
        jobs = [(SystemSpec(stats, *spec), k_max) for stats, spec, k_max in grid_systems(cfg.grid)]
    else:
        system = cfg.system()
        jobs = [(system, min(system.m1, system.m2))]
    rows = []
    for system, k_max in jobs:
        top = cfg.k_max if cfg.k_max is not None else k_max
        if top < cfg.k_min:
            raise ValidationError(f"empty k range {cfg.k_min}..{top} (need min(m1, m2) >= 1)")
        rows += sweep(system, scheme, range(cfg.k_min, top + 1), cfg.mode, policy)
    _emit(rows_to_csv(rows), cfg.csv)
    return EXIT_OK


def qnormal_table(q: float, x_min: float, x_max: float, points: int) -> str:
    if points < 1 or x_max < x_min:
        raise ValidationError("need points >= 1 and x_max >= x_min")
    s = support(q)  # validates q
    x = np.linspace(x_min, x_max, points)
    x = x[(x >= s.lower) & (x <= s.upper)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "pdf", "He1", "He2", "He3", "He4"])
    pdf = np.atleast_1d(qnormal_pdf(x, q))
    he = [np.atleast_1d(q_hermite(n, x, q)) for n in range(1, 5)]
    for n, xv in enumerate(x):
        writer.writerow([repr(float(xv)), repr(float(pdf[n]))] + [repr(float(h[n])) for h in he])
    return buf.getvalue()


def cmd_qnormal_table(args) -> int:
    _emit(qnormal_table(args.q, args.x_min, args.x_max, args.points), args.csv)
    return EXIT_OK


def _ensemble(cfg: RunConfig) -> EnsembleConfig:
    cfg.require("members", "seed")
    return EnsembleConfig(
        sys=cfg.system(),
        inter=cfg.interaction(),
        members=cfg.members,
        master_seed=cfg.seed,
        bins=cfg.bins,
        dim_cap=cfg.dim_cap,
        workers=cfg.workers,
    )


def cmd_simulate(args) -> int:
    cfg = _config(args)
    emp = ensemble_moments(_ensemble(cfg))
    if cfg.histogram:
        _emit(histogram_csv(emp.histogram), cfg.histogram)
    _emit(to_json(emp.to_dict()), cfg.json)
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _config(args)
    ens = _ensemble(cfg)
    report = compare_with_theory(ens, cfg.policy())
    if cfg.histogram:
        _emit(histogram_csv(report["empirical"]["histogram"]), cfg.histogram)
    _emit(to_json(report), cfg.json)
    return EXIT_OK


COMMANDS = {
    "moments": cmd_moments,
    "sweep": cmd_sweep,
    "qnormal-table": cmd_qnormal_table,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="qmom: %(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"qmom: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DimensionCapError as exc:
        print(f"qmom: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (QmomError, QuadratureError, ArithmeticError) as exc:
        print(f"qmom: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
