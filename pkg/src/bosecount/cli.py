"""Command-line interface: ``bosecount <command> --model ... [options]``.

Commands
--------
count        Omega(E) table, CSV ``E,omega``
joint        Omega(N, E) table, CSV ``N,E,omega``
asymptote    leading-order estimates at given energies
compare      exact counts against the estimates, CSV ``E,ln_exact,ln_estimate,ratio,formula_id``
contour      contour-integral recovery of Omega(E) and its error
condition-h  margin Re theta(x+iy) - theta(x) on a grid
residual     remainder J(x + iy) of the log G expansion on a sweep
report       one JSON document with profile, tables and statistics

Exit status is 0 on success, 1 when an internal check fails (or a warning
under ``--strict``) and 2 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import asymptotics as asy
from . import exact, gpf
from .errors import BoseCountError, DomainError, ProfileUnavailable
from .spectrum import SpectrumModel, ZetaProfile, load_profile, parse_model, zeta_profile

# integers above this are written to JSON as decimal strings
_JSON_INT_MAX = 2**53

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2


def _energies(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"energies must be comma-separated integers: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty energy list")
    if values[0] < 1 or any(b <= a for a, b in zip(values, values[1:])):
        raise argparse.ArgumentTypeError("energies must be strictly increasing positive integers")
    return values


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be ≥ 0")
    return value


def _json_int(v: int):
    return v if abs(v) <= _JSON_INT_MAX else str(v)


def _num(v) -> str:
    # shortest round-trip repr keeps CSV output byte-deterministic
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([x if isinstance(x, str) else _num(x) for x in row])
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _threads_hint() -> int | None:
    raw = os.environ.get("BOSECOUNT_THREADS")
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"BOSECOUNT_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise DomainError(f"BOSECOUNT_THREADS must be a positive integer, got {raw!r}")
    return value


def _profile(args, model: SpectrumModel) -> ZetaProfile:
    if args.profile:
        prof = load_profile(args.profile)
    else:
        try:
            prof = zeta_profile(model)
        except ProfileUnavailable as exc:
            raise ProfileUnavailable(f"{args.command}: {exc}") from None
    if prof.n != model.n:
        raise DomainError(f"model/profile mismatch: model n={model.n}, profile n={prof.n}")
    return prof


def _default_formulas(model: SpectrumModel, prof: ZetaProfile) -> list[str]:
    out = ["main1"]
    if prof.n == 2:
        out.append("main2")
    if model.kind == "partitions":
        out.append("hardy_ramanujan")
    return out


def _dyadic(e_max: int, smallest: int = 8) -> list[int]:
    out = []
    E = e_max
    while E >= smallest:
        out.append(E)
        E //= 2
    return out[::-1]


class Run:
    """State of one command: collected warnings and failed checks."""

    def __init__(self, args):
        self.args = args
        self.warnings: list[str] = []
        self.failures: list[str] = []

    def warn(self, msg: str):
        self.warnings.append(msg)

    def check(self, ok: bool, msg: str):
        if not ok:
            self.failures.append(msg)

    # commands -----------------------------------------------------------

    def count(self, model):
        table = exact.count_states(model, self.args.emax)
        if self.args.format == "json":
            return _json({"model": model.label(), "e_max": table.e_max, "omega": [_json_int(v) for v in table.omega]})
        return _csv(["E", "omega"], enumerate(table.omega))

    def joint(self, model):
        e_max = self.args.emax
        n_max = self.args.nmax
        if n_max is None:
            lam_min = model.lambda_min
            n_max = max(1, e_max // lam_min) if lam_min else 1
        jt = exact.count_joint(model, e_max, n_max)
        rows = [(N, E, jt.get(N, E)) for N in range(0, n_max + 1) for E in range(e_max + 1) if jt.get(N, E)]
        if self.args.format == "json":
            return _json(
                {
                    "model": model.label(),
                    "e_max": e_max,
                    "n_max": n_max,
                    "rows": [[N, E, _json_int(w)] for N, E, w in rows],
                }
            )
        return _csv(["N", "E", "omega"], rows)

    def _estimates(self, prof, model, E, formulas):
        out = []
        for f in formulas:
            res = asy.estimate(prof, E, f)
            for w in res.warnings:
                self.warn(f"E={E} {f}: {w}")
            out.append(res)
        return out

    def asymptote(self, model):
        prof = _profile(self.args, model)
        formulas = self.args.formulas or _default_formulas(model, prof)
        rows = []
        for E in self.args.energies:
            sd = asy.solve_saddle(prof, E)
            for res in self._estimates(prof, model, E, formulas):
                rows.append((E, res.formula_id, res.estimate_log, res.C, res.kappa, res.exponent, sd.x_E, sd.eta))
        header = ["E", "formula_id", "ln_estimate", "C", "kappa", "exponent", "x_E", "eta"]
        if self.args.format == "json":
            return _json({"model": model.label(), "rows": [dict(zip(header, r)) for r in rows]})
        return _csv(header, rows)

    def compare(self, model):
        prof = _profile(self.args, model)
        formulas = self.args.formulas or _default_formulas(model, prof)
        energies = self.args.energies
        table = exact.count_states(model, energies[-1])
        for E in energies:
            if table[E]:
                self._estimates(prof, model, E, formulas)
        rows = asy.comparison_rows(table, prof, energies, formulas)
        header = ["E", "ln_exact", "ln_estimate", "ratio", "formula_id"]
        if self.args.format == "json":
            return _json({"model": model.label(), "rows": [dict(zip(header, r)) for r in rows]})
        return _csv(header, rows)

    def contour(self, model):
        energies = self.args.energies or list(range(0, self.args.emax + 1))
        table = exact.count_states(model, energies[-1])
        prof = None
        if self.args.x is None:
            prof = _profile(self.args, model)
        rows = []
        for E in energies:
            if self.args.x is not None:
                x = self.args.x
            else:
                x = asy.solve_saddle(prof, E).x_E if E > 0 else 0.5
            ext = gpf.contour_extract(model, E, x, self.args.quad_points)
            w = table[E]
            err = abs(ext.value - w) / w if w else abs(ext.value)
            imag = abs(ext.imag) / w if w else abs(ext.imag)
            self.check(err <= self.args.tol, f"E={E}: extraction error {err:.3g} > {self.args.tol:g}")
            self.check(imag <= self.args.tol, f"E={E}: imaginary part {imag:.3g} > {self.args.tol:g}")
            rows.append((E, x, ext.quad_points, w, ext.value, ext.imag, err))
        header = ["E", "x", "quad_points", "exact", "extracted", "imag", "rel_error"]
        if self.args.format == "json":
            return _json({"model": model.label(), "rows": [dict(zip(header, (r[0], r[1], r[2], _json_int(r[3])) + r[4:])) for r in rows]})
        return _csv(header, rows)

    def _emit_diagnostic(self, model, rows):
        header = ["x", "y", "re_logG", "im_logG", "re_J", "im_J", "margin"]
        if self.args.format == "json":
            return _json({"model": model.label(), "rows": [dict(zip(header, r)) for r in rows]})
        return _csv(header, rows)

    def condition_h(self, model):
        a = self.args
        points = []
        for x in np.linspace(a.xmin, a.xmax, a.nx):
            half = np.linspace(x, math.pi, a.ny // 2)
            points.extend((float(x), float(y)) for y in np.concatenate([-half[::-1], half]))
        try:
            prof = _profile(a, model)
        except ProfileUnavailable:
            # no profile: J columns stay empty, margins are still defined
            prof = None
        if prof is None:
            rows = []
            for x, y in points:
                v = gpf.log_grand_partition(model, complex(x, y), a.tail_tol)
                rows.append((x, y, v.real, v.imag, None, None, gpf.condition_h_margin(model, x, y, a.tail_tol)))
        else:
            rows = gpf.diagnostic_rows(model, points, prof, a.tail_tol)
        for r in rows:
            self.check(r[6] < 0, f"margin ≥ 0 at x={r[0]}, y={r[1]}")
        return self._emit_diagnostic(model, rows)

    def residual(self, model):
        a = self.args
        if not -1.0 <= a.y_ratio <= 1.0:
            raise DomainError("--y-ratio must lie in [-1, 1]")
        prof = _profile(a, model)
        xs = np.geomspace(a.xmin, a.xmax, a.nx)
        points = [(float(x), float(a.y_ratio * x)) for x in xs]
        return self._emit_diagnostic(model, gpf.diagnostic_rows(model, points, prof, a.tail_tol))

    def report(self, model):
        prof = _profile(self.args, model)
        e_max = self.args.emax
        table = exact.count_states(model, e_max)
        cum = exact.cumulative(table)
        p = prof.n / (prof.n + 1)
        energies = _dyadic(e_max)
        stats = []
        for E in energies:
            w, d = table[E], cum.d[E]
            entry = {"E": E}
            if w:
                entry["knopp_gap"] = prof.Bn - math.log(w) / E**p
            entry["weyl_gap"] = prof.Bn - math.log(d) / E**p
            sd = asy.solve_saddle(prof, E)
            entry["x_E"] = sd.x_E
            entry["eta"] = sd.eta
            stats.append(entry)
        formulas = self.args.formulas or _default_formulas(model, prof)
        for E in energies:
            if table[E]:
                self._estimates(prof, model, E, formulas)
        comparison = [
            dict(zip(["E", "ln_exact", "ln_estimate", "ratio", "formula_id"], r))
            for r in asy.comparison_rows(table, prof, energies, formulas)
        ]
        prof_doc = prof.to_dict()
        prof_doc["C"], prof_doc["kappa"] = asy.main_constants(prof)
        doc = {
            "model": model.label(),
            "profile": prof_doc,
            "tables": {
                "e_max": e_max,
                "omega": [_json_int(v) for v in table.omega],
                "D": [_json_int(v) for v in cum.d],
            },
            "statistics": {"dyadic": stats, "comparison": comparison},
            "tool_version": __version__,
        }
        return _json(doc)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", required=True, help="partitions | sphere:<n> | custom:<path>")
    common.add_argument("--output", "-o", default="-", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--profile", help="zeta profile JSON {n, A, Z0, Zprime0}")
    common.add_argument("--strict", action="store_true", help="treat warnings as failures")
    common.add_argument(
        "--tail-tol", type=float, default=gpf.DEFAULT_TAIL_TOL, help="series truncation tolerance (default 1e-17)"
    )

    parser = argparse.ArgumentParser(prog="bosecount", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="Omega(E) for E = 0..emax")
    p.add_argument("--emax", type=_nonneg_int, required=True)

    p = sub.add_parser("joint", parents=[common], help="Omega(N, E)")
    p.add_argument("--emax", type=_nonneg_int, required=True)
    p.add_argument("--nmax", type=int, help="largest particle number (default: all)")

    formula_help = "comma list from " + ",".join(asy.FORMULAS[:3])

    def formulas(text):
        out = [f for f in text.split(",") if f]
        bad = [f for f in out if f not in asy.FORMULAS[:3]]
        if bad or not out:
            raise argparse.ArgumentTypeError(f"unknown formula(s) {bad}; {formula_help}")
        return out

    for name in ("asymptote", "compare"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--energies", type=_energies, required=True, help="e.g. 100,400,1600")
        p.add_argument("--formulas", type=formulas, help=formula_help)

    p = sub.add_parser("contour", parents=[common], help="contour-integral extraction vs exact counts")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--emax", type=_nonneg_int, help="all E = 0..emax")
    g.add_argument("--energies", type=_energies)
    p.add_argument("--x", type=float, help="abscissa Re tau (default: saddle point x_E)")
    p.add_argument("--quad-points", type=int, help="trapezoid nodes (default: adaptive)")
    p.add_argument("--tol", type=float, default=1e-8, help="relative error threshold (default 1e-8)")

    p = sub.add_parser("condition-h", parents=[common], help="margin grid")
    p.add_argument("--xmin", type=float, default=0.01)
    p.add_argument("--xmax", type=float, default=0.2)
    p.add_argument("--nx", type=int, default=20)
    p.add_argument("--ny", type=int, default=40, help="y points per x, split between ±[x, pi]")

    p = sub.add_parser("residual", parents=[common], help="J(tau) sweep on tau = x (1 + i r)")
    p.add_argument("--xmin", type=float, default=1e-3)
    p.add_argument("--xmax", type=float, default=1e-1)
    p.add_argument("--nx", type=int, default=20)
    p.add_argument("--y-ratio", type=float, default=0.0, help="r = y/x in [-1, 1]")

    p = sub.add_parser("report", parents=[common], help="JSON report")
    p.add_argument("--emax", type=_nonneg_int, default=1000)
    p.add_argument("--formulas", type=formulas, help=formula_help)
    return parser


def run(args) -> int:
    """Execute a parsed command; returns the exit status."""
    _threads_hint()
    model = parse_model(args.model)
    runner = Run(args)
    text = getattr(runner, args.command.replace("-", "_"))(model)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    for w in runner.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for f in runner.failures:
        print(f"check failed: {f}", file=sys.stderr)
    if runner.failures or (args.strict and runner.warnings):
        return EXIT_CHECK
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except (BoseCountError, ValueError, ArithmeticError) as exc:
        print(f"bosecount {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"bosecount {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
