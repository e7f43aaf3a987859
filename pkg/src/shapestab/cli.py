"""Command-line front end: reproducible, scriptable reports.

Every report embeds the fully resolved configuration and the library
version; identical configurations produce byte-identical JSON (keys sorted,
floats printed with 17 significant digits).  Exit codes: 0 success, 2
validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import ShapeStabError
from .hessian_spectra import PAIR_CODES, FunctionalCombo, lagrangian_spectrum
from .stability import (
    coercivity_constant,
    minimal_penalty,
    penalized,
    sobolev_indices,
    threshold,
)

COMMANDS = ("spectra", "thresholds", "coercivity", "verify",
            "counterexample", "penalty")


def worker_count() -> int:
    """Internal parallelism cap from SHL_THREADS (default: hardware count)."""
    raw = os.environ.get("SHL_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
            if n >= 1:
                return n
        except ValueError:
            pass
    return os.cpu_count() or 1


def _format_floats(obj):
    """Recursively normalize floats to 17 significant digits for stable
    serialization."""
    if isinstance(obj, float):
        return float(format(obj, ".17g"))
    if isinstance(obj, dict):
        return {k: _format_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_format_floats(v) for v in obj]
    if isinstance(obj, np.floating):
        return float(format(float(obj), ".17g"))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def dump_json(obj) -> str:
    return json.dumps(_format_floats(obj), sort_keys=True, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="shapestab",
        description="Spectral stability reports for shape functionals on balls.")
    p.add_argument("--cmd", required=True, choices=COMMANDS)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--modes", type=int, default=100)
    p.add_argument("--pair", choices=sorted(PAIR_CODES), default="PE")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=-0.1)
    p.add_argument("--fd-step", type=float, default=1e-3)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=7)
    return p


def _resolved_config(args) -> dict:
    return {
        "command": args.cmd,
        "dim": args.dim,
        "modes": args.modes,
        "pair": args.pair,
        "t": args.t,
        "gamma": args.gamma,
        "fd_step": args.fd_step,
        "format": args.format,
        "seed": args.seed,
        "version": __version__,
    }


def _validate(args):
    if args.dim < 2:
        raise ValueError("--dim must be >= 2")
    if args.modes < 2:
        raise ValueError("--modes must be >= 2")
    if not (0 < args.fd_step < 0.5):
        raise ValueError("--fd-step must lie in (0, 0.5)")


def run_command(args) -> tuple[str, str]:
    """Returns (text, kind) with kind in {'csv', 'json'}."""
    cfg = _resolved_config(args)

    if args.cmd == "spectra":
        spec = lagrangian_spectrum(
            FunctionalCombo.from_pair(args.pair, args.t), args.dim, args.modes)
        if args.format == "csv":
            return spec.to_csv(), "csv"
        return dump_json({"config": cfg, "spectrum": spec.to_dict()}), "json"

    if args.cmd == "thresholds":
        rep = threshold(args.pair, args.dim, K=args.modes)
        if args.format == "csv":
            return rep.to_csv(), "csv"
        return dump_json({"config": cfg, "report": rep.to_dict()}), "json"

    if args.cmd == "coercivity":
        spec = lagrangian_spectrum(
            FunctionalCombo.from_pair(args.pair, args.t), args.dim, args.modes)
        s2 = sobolev_indices(args.pair).s2
        out = {
            "config": cfg,
            "s2": s2,
            "coercivity_s0": coercivity_constant(spec, 0.0),
            "coercivity_s2": coercivity_constant(spec, s2),
        }
        if args.format == "csv":
            return ("s,lambda\n0," + format(out["coercivity_s0"], ".17g")
                    + f"\n{s2}," + format(out["coercivity_s2"], ".17g") + "\n"), "csv"
        return dump_json(out), "json"

    if args.cmd == "verify":
        from .verification import reports_to_csv, standard_suite
        if args.dim != 2:
            raise ValueError("verify runs on the perturbed disk (d = 2) only")
        reports = standard_suite(step=args.fd_step)
        if args.format == "csv":
            return reports_to_csv(reports), "csv"
        return dump_json({"config": cfg,
                          "reports": [r.to_dict() for r in reports],
                          "max_rel_gap": max(r.rel_gap for r in reports)}), "json"

    if args.cmd == "counterexample":
        from .counterexample import run
        grid = np.geomspace(1e-5, 0.5, 25)
        exp = run(args.dim, args.gamma, grid)
        if args.format == "csv":
            return exp.to_csv(), "csv"
        return dump_json({"config": cfg, "experiment": exp.to_dict()}), "json"

    if args.cmd == "penalty":
        spec = lagrangian_spectrum(
            FunctionalCombo.from_pair(args.pair, args.t), args.dim, args.modes)
        C = minimal_penalty(spec)
        pen = penalized(spec, 2.0 * C if C > 0 else 1.0)
        out = {
            "config": cfg,
            "minimal_C": C,
            "penalized_at_2C": {"c0": float(pen.c[0]), "c1": float(pen.c[1])},
        }
        if args.format == "csv":
            return "quantity,value\nminimal_C," + format(C, ".17g") + "\n", "csv"
        return dump_json(out), "json"

    raise ValueError(f"unknown command {args.cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        _validate(args)
    except ValueError as e:
        sys.stderr.write(dump_json({"error": "validation", "detail": str(e)}))
        return 2
    try:
        text, _ = run_command(args)
    except (ValueError, KeyError) as e:
        sys.stderr.write(dump_json({"error": "validation", "detail": str(e)}))
        return 2
    except (ShapeStabError, np.linalg.LinAlgError) as e:
        sys.stderr.write(dump_json({"error": "numerical",
                                    "detail": str(e),
                                    "type": type(e).__name__}))
        return 3
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
