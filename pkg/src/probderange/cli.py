"""Command-line front end: value tables, series coefficients and theorem checks.

Rationals cross this boundary as ``num/den`` strings in both directions.
Exit status is 0 when everything passes, 1 when an identity fails and 2 on
usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Callable, Iterable, TextIO

from . import combinatorics as comb_
from . import probfamily as pf
from .moments import DistributionError, MomentProfile, parse_distribution
from .oracles import GF_BUILDERS, EvalPoint, gf_oracle
from .series import as_rational
from .verify import (
    RECORD_FIELDS,
    THEOREMS,
    TheoremPreconditionError,
    certify_theorem,
    sample_points,
    verify_theorem,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

TABLE_FIELDS = ("family", "n", "k", "value")
SERIES_FIELDS = ("gf", "n", "coefficient")


class UsageError(Exception):
    pass


def parse_rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None


def fmt(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# family id -> (needs, row function).  needs lists the parameters that must be
# given; a row function yields (n, k, value) for n = 0..n_max.


def _rows_prob(fn: Callable, with_x: bool):
    def rows(cfg):
        ctx = pf.ProbContext(cfg.Y, cfg.lam, cfg.n_max)
        for n in range(cfg.n_max + 1):
            yield n, None, fn(ctx, n, cfg.x) if with_x else fn(ctx, n)

    return rows


def _rows_d_prob_r(cfg):
    ctx = pf.ProbContext(cfg.Y, cfg.lam, cfg.n_max)
    for n in range(cfg.n_max + 1):
        yield n, None, pf.derange_prob_r(ctx, cfg.r, n)


def _rows_stirling2_prob(cfg):
    ctx = pf.ProbContext(cfg.Y, cfg.lam, cfg.n_max)
    for n in range(cfg.n_max + 1):
        for k in range(n + 1):
            yield n, k, pf.stirling2_prob(ctx, n, k)


def _rows_triangle(fn: Callable, with_lam: bool):
    def rows(cfg):
        for n in range(cfg.n_max + 1):
            for k in range(n + 1):
                yield n, k, fn(n, k, cfg.lam) if with_lam else fn(n, k)

    return rows


def _rows_poly(fn: Callable, with_lam: bool):
    def rows(cfg):
        for n in range(cfg.n_max + 1):
            yield n, None, fn(n, cfg.x, cfg.lam) if with_lam else fn(n, cfg.x)

    return rows


FAMILIES: dict[str, tuple[tuple[str, ...], Callable]] = {
    "d_prob": (("dist", "lambda", "x"), _rows_prob(pf.derange_prob, True)),
    "d_prob_r": (("dist", "lambda", "r"), _rows_d_prob_r),
    "D_prob": (("dist", "lambda", "x"), _rows_prob(pf.derange2_prob, True)),
    "fubini_prob": (("dist", "lambda", "x"), _rows_prob(pf.fubini_prob, True)),
    "bell_prob": (("dist", "lambda", "x"), _rows_prob(pf.bell_prob, True)),
    "euler_prob": (("dist", "lambda"), _rows_prob(pf.euler_prob, False)),
    "stirling2_prob": (("dist", "lambda"), _rows_stirling2_prob),
    "d": (("x",), _rows_poly(comb_.derangement_poly, False)),
    "d_deg": (("lambda", "x"), _rows_poly(comb_.derangement_deg_poly, True)),
    "D_deg": (("lambda", "x"), _rows_poly(comb_.derangement2_deg_poly, True)),
    "fubini_deg": (("lambda", "x"), _rows_poly(comb_.fubini_deg, True)),
    "stirling1": ((), _rows_triangle(comb_.stirling1, False)),
    "stirling2_deg": (("lambda",), _rows_triangle(comb_.stirling2_deg, True)),
    "stirling1_deg_unsigned": (("lambda",), _rows_triangle(comb_.stirling1_deg_unsigned, True)),
}

# what each generating function reads from the point
GF_NEEDS = {
    "d_prob": ("dist", "lambda", "x"),
    "d_prob_r": ("dist", "lambda", "r"),
    "D_prob": ("dist", "lambda", "x"),
    "fubini_prob": ("dist", "lambda", "x"),
    "bell_prob": ("dist", "lambda", "x"),
    "euler_prob": ("dist", "lambda"),
    "stirling2_prob": ("dist", "lambda", "k"),
    "d_deg": ("lambda", "x"),
    "D_deg": ("lambda", "x"),
    "fubini_deg": ("lambda", "x"),
    "stirling2_deg": ("lambda", "k"),
    "d_classical": ("x",),
    "phi_euler": ("dist", "lambda", "x"),
}


class Config:
    """Validated command-line settings."""

    def __init__(self, ns: argparse.Namespace):
        self.command = ns.command
        self.format = ns.format
        self.n_max = ns.n_max
        if self.n_max is not None and self.n_max < 0:
            raise UsageError("--n must be nonnegative")
        self.Y = parse_distribution(ns.dist) if getattr(ns, "dist", None) else None
        self.lam = parse_rational(ns.lam) if getattr(ns, "lam", None) is not None else None
        self.x = parse_rational(ns.x) if getattr(ns, "x", None) is not None else None
        self.r = getattr(ns, "r", None)
        self.k = getattr(ns, "k", None)
        for name in ("r", "k"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise UsageError(f"--{name} must be nonnegative")

    def require(self, needs: Iterable[str], what: str) -> None:
        attr = {"dist": "Y", "lambda": "lam", "x": "x", "r": "r", "k": "k"}
        missing = [f"--{n}" for n in needs if getattr(self, attr[n]) is None]
        if missing:
            raise UsageError(f"{what} requires {', '.join(missing)}")


# --- output ------------------------------------------------------------------


class Emitter:
    def __init__(self, out: TextIO, fmt_: str, fields: tuple[str, ...]):
        self.out = out
        self.fields = fields
        self.format = fmt_
        if fmt_ == "csv":
            self.writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
            self.writer.writeheader()

    def emit(self, record: dict) -> None:
        if self.format == "csv":
            self.writer.writerow({k: _csv_cell(record.get(k)) for k in self.fields})
        else:
            self.out.write(json.dumps({k: record.get(k) for k in self.fields}) + "\n")


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


# --- commands --------------------------------------------------------------------


def run_table(cfg: Config, out: TextIO) -> int:
    family = cfg.family
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    needs, rows = FAMILIES[family]
    cfg.require(needs, f"family {family}")
    em = Emitter(out, cfg.format, TABLE_FIELDS)
    for n, k, value in rows(cfg):
        em.emit({"family": family, "n": n, "k": k, "value": fmt(value)})
    return EXIT_OK


def run_series(cfg: Config, out: TextIO) -> int:
    gf = cfg.gf
    if gf not in GF_BUILDERS:
        raise UsageError(f"unknown generating function {gf!r}; choose from {', '.join(GF_BUILDERS)}")
    needs = GF_NEEDS[gf]
    cfg.require(needs, f"generating function {gf}")
    lam = cfg.lam if cfg.lam is not None else Fraction(1)
    if "lambda" in needs and lam == 0:
        raise UsageError(
            "lambda = 0 has no degenerate series; use 'table' for the closed-form values at lambda = 0"
        )
    point = EvalPoint(
        lam,
        cfg.x if cfg.x is not None else 0,
        cfg.Y if cfg.Y is not None else MomentProfile.constant(1),
        cfg.r or 0,
    )
    series = gf_oracle(gf, point, cfg.n_max, cfg.k or 0)
    em = Emitter(out, cfg.format, SERIES_FIELDS)
    for n, c in enumerate(series):
        em.emit({"gf": gf, "n": n, "coefficient": fmt(c)})
    return EXIT_OK


def _explicit_point(cfg: Config, theorem_id: str) -> EvalPoint:
    y = cfg.Y if cfg.Y is not None else MomentProfile.constant(1)
    if theorem_id == "2.13" and cfg.Y is None:
        y = MomentProfile.gamma(1, 1)
    r = cfg.r if cfg.r is not None else (1 if theorem_id == "2.8" else 0)
    return EvalPoint(cfg.lam, cfg.x if cfg.x is not None else 0, y, r)


def run_verify(cfg: Config, out: TextIO, err: TextIO) -> int:
    ids = THEOREMS if cfg.theorem == "all" else (cfg.theorem,)
    for tid in ids:
        if tid not in THEOREMS:
            raise UsageError(f"unknown theorem {tid!r}; choose 'all' or one of {', '.join(THEOREMS)}")
    if cfg.samples < 1:
        raise UsageError("--samples must be at least 1")
    em = Emitter(out, cfg.format, RECORD_FIELDS)
    failures = config_errors = 0
    for tid in ids:
        if cfg.exhaustive:
            y = cfg.Y if cfg.Y is not None else MomentProfile.constant(1)
            if tid == "2.13" and cfg.Y is None:
                y = MomentProfile.gamma(1, 1)
            r = cfg.r if cfg.r is not None else (1 if tid == "2.8" else 0)
            jobs = [("grid", lambda tid=tid, y=y, r=r: certify_theorem(tid, y, cfg.n_max, r))]
        elif cfg.lam is not None:
            p = _explicit_point(cfg, tid)
            jobs = [(p, lambda tid=tid, p=p: verify_theorem(tid, p, cfg.n_max))]
        else:
            points = sample_points(cfg.seed, cfg.samples, tid, cfg.Y)
            jobs = [(p, lambda tid=tid, p=p: verify_theorem(tid, p, cfg.n_max)) for p in points]
        checks = passed = 0
        notes = set()
        for where, job in jobs:
            try:
                reports = job()
            except TheoremPreconditionError as exc:
                config_errors += 1
                err.write(f"theorem {tid} at point {where}: {exc}\n")
                continue
            for rep in reports:
                em.emit(rep.to_record())
                checks += 1
                passed += rep.passed
                if rep.note and rep.mode == "exact":
                    notes.add(rep.note)
        failures += checks - passed
        err.write(f"theorem {tid}: {passed}/{checks} checks passed\n")
        for note in sorted(notes):
            err.write(f"theorem {tid}: {note}\n")
    status = EXIT_USAGE if config_errors else (EXIT_FAIL if failures else EXIT_OK)
    err.write(
        f"summary: {len(ids)} theorem(s), {failures} failure(s), {config_errors} configuration error(s)\n"
    )
    return status


# --- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probderange",
        description="Exact probabilistic degenerate derangement polynomials and identity checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_default):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--n", "--nmax", "--order", dest="n_max", type=int, default=n_default,
                       help="largest index n (or truncation order) to emit")
        p.add_argument("--dist", help="constant:c | bernoulli:p | discrete:v1=p1,... | poisson:a | gamma:a,b | uniform01")
        p.add_argument("--lambda", dest="lam", help="degeneracy parameter as num/den")
        p.add_argument("--x", help="polynomial argument as num/den")
        p.add_argument("--r", type=int)

    t = sub.add_parser("table", help="closed-form values for n = 0..n")
    t.add_argument("--family", required=True, help=", ".join(FAMILIES))
    common(t, 10)

    s = sub.add_parser("series", help="generating-function coefficients up to t^order")
    s.add_argument("--gf", required=True, help=", ".join(GF_BUILDERS))
    s.add_argument("--k", type=int, help="column for the Stirling generating functions")
    common(s, 10)

    v = sub.add_parser("verify", help="check the identities at sample points")
    v.add_argument("--theorem", default="all")
    v.add_argument("--samples", type=int, default=3)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--exhaustive", action="store_true",
                   help="check an (n+1)x(n+1) grid of (x, lambda) values instead of random points")
    common(v, 12)
    return parser


def main(argv=None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = Config(ns)
        if ns.command == "table":
            cfg.family = ns.family
            return run_table(cfg, out)
        if ns.command == "series":
            cfg.gf = ns.gf
            return run_series(cfg, out)
        cfg.theorem = ns.theorem
        cfg.samples = ns.samples
        cfg.seed = ns.seed
        cfg.exhaustive = ns.exhaustive
        return run_verify(cfg, out, err)
    except (UsageError, DistributionError, ValueError) as exc:
        err.write(f"probderange: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
