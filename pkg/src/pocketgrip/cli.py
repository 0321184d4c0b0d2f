"""Command-line front end.

Pressures on the command line are in kPa unless a unit is attached
(``125``, ``125kPa`` and ``0.125MPa`` are the same), forces in N and masses
in kg unless suffixed with ``g``.  Results go to stdout (or ``--output``) as
CSV or JSON.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import re
import sys
from importlib import resources

import numpy as np

from . import config_io as cio
from .analysis import (
    RATES_HEADER,
    ROUNDNESS_HEADER,
    TrialRecord,
    friction_from_trace,
    roundness_table,
    success_table,
)
from .contact import resolve_contact
from .errors import ConfigError, DegenerateNormal, DomainError, EmptyWindow
from .grasp import SWEEP_HEADER, GraspQuery, check_grasp, min_normal_force, min_pressure, sweep_grid
from .harness import run_trials
from .membrane import EXACT, MODES, resolve_bulge

INFEASIBLE = "infeasible"
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2

PHYSICS = {"bulge", "friction", "curve", "grasp", "min-pressure", "min-force", "sweep", "simulate"}


class UsageError(Exception):
    pass


def _pressure(text):
    text = text.strip()
    if re.fullmatch(cio.NUMBER, text):
        text += " kPa"
    try:
        return cio.parse_quantity(text, cio.PRESSURE, "pressure")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _force(text):
    try:
        return cio.parse_quantity(text, cio.FORCE, "force")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _mass(text):
    try:
        return cio.parse_mass(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(default):
    """Global flags, accepted both before and after the subcommand."""
    kw = {} if default else {"default": argparse.SUPPRESS}
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", **({"default": None} if default else kw),
                   help="configuration file")
    p.add_argument("--format", choices=("csv", "json"), **({"default": "csv"} if default else kw))
    p.add_argument("--output", metavar="PATH", **({"default": "-"} if default else kw),
                   help="output file, '-' for stdout")
    p.add_argument("--strict", action="store_true", **({"default": False} if default else kw),
                   help="exit 1 when a grasp or inverse solve is infeasible")
    return p


def build_parser():
    common = _common(default=False)
    parser = argparse.ArgumentParser(prog="pocketgrip", parents=[_common(default=True)],
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if name in PHYSICS:
            sp.add_argument("--mode", choices=MODES, default=EXACT, help="bulge height model")
        return sp

    sp = add("bulge", "bulge height, cap radius and protrusion")
    sp.add_argument("--p", type=_pressure, nargs="+", required=True, metavar="KPA")

    sp = add("friction", "contact regime and friction at one (n, p)")
    sp.add_argument("--n", type=_force, required=True, metavar="N")
    sp.add_argument("--p", type=_pressure, required=True, metavar="KPA")

    sp = add("curve", "friction coefficient against pressure at fixed n")
    sp.add_argument("--n", type=_force, required=True, metavar="N")
    sp.add_argument("--p-min", type=_pressure, default=0.0, metavar="KPA")
    sp.add_argument("--p-max", type=_pressure, default=125e3, metavar="KPA")
    sp.add_argument("--steps", type=int, default=6)

    sp = add("grasp", "feasibility of one grasp")
    sp.add_argument("--mass", type=_mass, required=True)
    sp.add_argument("--n", type=_force, required=True, metavar="N")
    sp.add_argument("--p", type=_pressure, required=True, metavar="KPA")

    sp = add("min-pressure", "smallest pressure that lifts the payload")
    sp.add_argument("--mass", type=_mass, required=True)
    sp.add_argument("--n", type=_force, required=True, metavar="N")

    sp = add("min-force", "smallest normal force that lifts the payload")
    sp.add_argument("--mass", type=_mass, required=True)
    sp.add_argument("--p", type=_pressure, required=True, metavar="KPA")

    sp = add("sweep", "feasibility over an (n, p) grid")
    sp.add_argument("--mass", type=_mass, help="defaults to [sweep] mass")
    sp.add_argument("--n-grid", type=_force, nargs="+", metavar="N")
    sp.add_argument("--p-grid", type=_pressure, nargs="+", metavar="KPA")

    sp = add("simulate", "Monte Carlo success rate of the grasp protocol")
    sp.add_argument("--mass", type=_mass, required=True)
    sp.add_argument("--n", type=_force, required=True, metavar="N")
    sp.add_argument("--p", type=_pressure, required=True, metavar="KPA")
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--seed", type=int, help="overrides the [plant] seed")
    sp.add_argument("--transcripts", metavar="DIR", help="write one transcript per trial")
    sp.add_argument("--records", metavar="PATH", help="write per-trial outcome records as CSV")

    sp = add("rates", "success rate per (n, p) from trial records")
    sp.add_argument("input", metavar="RECORDS_CSV", help="n_newton,p_pascal,outcome; '-' for stdin")

    sp = add("analyze-trace", "friction coefficient of a sliding trace")
    sp.add_argument("input", metavar="TRACE_CSV", help="t,fy,fz; '-' for stdin")
    sp.add_argument("--start", type=float, metavar="S")
    sp.add_argument("--end", type=float, metavar="S")

    sp = add("roundness", "roundness ratio and success rate per (mass, n, p)")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("input", nargs="?", metavar="SAMPLES_CSV",
                     help="mass_kg,n_newton,p_pascal,d_min_m,d_max_m,outcome; '-' for stdin")
    src.add_argument("--golden", action="store_true", help="use the shipped optima data")
    return parser


# ---- commands ---------------------------------------------------------------

def cmd_bulge(args, cfg):
    header = ("p_pascal", "h_m", "R_m", "s_m")
    rows = []
    for p in args.p:
        b = resolve_bulge(p, cfg.membrane, args.mode)
        rows.append((b.p, b.h, b.R, b.s))
    return header, rows, True


def cmd_friction(args, cfg):
    header = ("n_newton", "p_pascal", "regime", "mu_eff", "friction_force_n", "area_m2",
              "delta_m", "n_membrane_n", "n_rim_n")
    s = resolve_contact(args.n, args.p, cfg.membrane, cfg.grasp.per_bulge, args.mode)
    return header, [(s.n, s.p, s.regime.value, s.mu_eff, s.friction_force, s.area,
                     s.delta, s.n_membrane, s.n_rim)], True


def curve_rows(n, p_min, p_max, steps, spec, per_bulge=3, mode=EXACT):
    """Rows ``(p, regime, mu_eff, friction_force)`` at evenly spaced pressures."""
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    if p_max < p_min:
        raise DomainError("p-max must not be below p-min")
    rows = []
    for p in np.linspace(p_min, p_max, steps).tolist():
        s = resolve_contact(n, p, spec, per_bulge, mode)
        rows.append((p, s.regime.value, s.mu_eff, s.friction_force))
    return rows


def cmd_curve(args, cfg):
    rows = curve_rows(args.n, args.p_min, args.p_max, args.steps, cfg.membrane,
                      cfg.grasp.per_bulge, args.mode)
    return ("p_pascal", "regime", "mu_eff", "friction_force_n"), rows, True


def _query(args, cfg, n, p):
    g = cfg.grasp
    return GraspQuery(mass=args.mass, n=n, p=p, gravity=g.gravity, contacts=g.contacts,
                      safety_factor=g.safety_factor)


def cmd_grasp(args, cfg):
    v = check_grasp(_query(args, cfg, args.n, args.p), cfg.membrane, cfg.grasp.per_bulge, args.mode)
    return SWEEP_HEADER, [v.row()], v.feasible


def _solver_kwargs(args, cfg):
    return dict(per_bulge=cfg.grasp.per_bulge, mode=args.mode,
                safety_factor=cfg.grasp.safety_factor)


def cmd_min_pressure(args, cfg):
    g = cfg.grasp
    p = min_pressure(args.mass, g.gravity, g.contacts, args.n, cfg.membrane,
                     **_solver_kwargs(args, cfg))
    row = (args.mass, args.n, INFEASIBLE if p is None else p)
    return ("mass_kg", "n_newton", "p_pascal"), [row], p is not None


def cmd_min_force(args, cfg):
    g = cfg.grasp
    n = min_normal_force(args.mass, g.gravity, g.contacts, args.p, cfg.membrane,
                         **_solver_kwargs(args, cfg))
    row = (args.mass, args.p, INFEASIBLE if n is None else n)
    return ("mass_kg", "p_pascal", "n_newton"), [row], n is not None


def cmd_sweep(args, cfg):
    sw = cfg.sweep
    mass = args.mass if args.mass is not None else (sw.mass if sw else None)
    n_grid = args.n_grid or (sw.n_grid if sw else None)
    p_grid = args.p_grid or (sw.p_grid if sw else None)
    if mass is None or not n_grid or not p_grid:
        raise UsageError("sweep needs --mass, --n-grid and --p-grid or a [sweep] section")
    g = cfg.grasp
    table = sweep_grid(mass, g.gravity, g.contacts, n_grid, p_grid, cfg.membrane,
                       **_solver_kwargs(args, cfg))
    return SWEEP_HEADER, [v.row() for v in table], True


def cmd_simulate(args, cfg):
    plant = cfg.plant
    if args.seed is not None:
        plant = dataclasses.replace(plant, seed=args.seed)
    if args.trials < 1:
        raise DomainError(f"trials must be >= 1, got {args.trials}")
    q = _query(args, cfg, args.n, args.p)
    transcripts = run_trials(q, cfg.membrane, plant, args.trials,
                             per_bulge=cfg.grasp.per_bulge, mode=args.mode)
    if args.transcripts:
        os.makedirs(args.transcripts, exist_ok=True)
        width = max(4, len(str(args.trials - 1)))
        for i, tr in enumerate(transcripts):
            path = os.path.join(args.transcripts, f"trial_{i:0{width}d}.txt")
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(tr.to_text())
    if args.records:
        rows = [(q.n, q.p, tr.outcome.value) for tr in transcripts]
        _write(args.records, cio.format_table(("n_newton", "p_pascal", "outcome"), rows))
    records = [TrialRecord(q.n, q.p, tr.outcome) for tr in transcripts]
    return RATES_HEADER, [r.row() for r in success_table(records)], True


def cmd_rates(args, cfg):
    rows = success_table(cio.read_records_csv(args.input))
    return RATES_HEADER, [r.row() for r in rows], True


def cmd_analyze_trace(args, cfg):
    trace = cio.read_trace_csv(args.input)
    if (args.start is None) != (args.end is None):
        raise UsageError("--start and --end must be given together")
    window = "auto" if args.start is None else (args.start, args.end)
    mu = friction_from_trace(trace, window)
    return ("samples", "mu"), [(len(trace.t), mu)], True


def golden_roundness_path():
    return resources.files("pocketgrip").joinpath("data", "roundness_optima.csv")


def cmd_roundness(args, cfg):
    if args.golden:
        with resources.as_file(golden_roundness_path()) as path:
            samples = cio.read_roundness_csv(str(path))
    else:
        samples = cio.read_roundness_csv(args.input)
    return ROUNDNESS_HEADER, [r.row() for r in roundness_table(samples)], True


COMMANDS = {
    "bulge": cmd_bulge,
    "friction": cmd_friction,
    "curve": cmd_curve,
    "grasp": cmd_grasp,
    "min-pressure": cmd_min_pressure,
    "min-force": cmd_min_force,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "rates": cmd_rates,
    "analyze-trace": cmd_analyze_trace,
    "roundness": cmd_roundness,
}


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = None
        if args.command in PHYSICS:
            if not args.config:
                raise UsageError(f"{args.command} requires --config")
            cfg = cio.load_config(args.config)
        header, rows, ok = COMMANDS[args.command](args, cfg)
        _write(args.output, cio.format_table(header, rows, args.format))
    except (UsageError, ConfigError, DomainError, EmptyWindow, DegenerateNormal, OSError) as exc:
        print(f"pocketgrip: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.strict and not ok:
        return EXIT_INFEASIBLE
    return 0


if __name__ == "__main__":
    sys.exit(main())
