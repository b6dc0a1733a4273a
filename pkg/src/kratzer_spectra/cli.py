"""Command-line front end: ``spectra {spectrum,verify,compare-ab,wavefunction}``."""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import warnings
from datetime import datetime, timezone

import numpy as np

from . import __version__, ab, frobenius, laguerre, oracle
from .io import SweepRecord, read_sweep, to_csv, to_json
from .model import DomainError, RadialProblem, validate

log = logging.getLogger("kratzer_spectra")

# (A, B, l, k): three B > 0 cases and the Coulomb control
DEMO_SWEEP = [(1.0, 1.0, 0, 0), (1.0, 0.0, 0, 0), (2.0, 0.5, 1, 1), (0.5, 1.0, 1, 0)]

SPECTRUM_COLUMNS = ["A", "B", "l", "n", "energy", "s", "decay_alpha"]
VERIFY_COLUMNS = ["A", "B", "l", "n", "E_closed", "E_fd", "fd_error_estimate",
                  "E_galerkin", "max_deviation", "status"]
WAVE_COLUMNS = ["r", "phi"]


class UsageError(Exception):
    pass


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("SPECTRA_THREADS", os.cpu_count() or 1)))
    except ValueError:
        return 1


def _add_problem_args(p, levels=True):
    p.add_argument("--A", "--coulomb-strength", dest="A", type=float, default=None)
    p.add_argument("--B", "--inverse-square-strength", dest="B", type=float, default=None)
    p.add_argument("--l", "--angular-momentum", dest="l", type=int, default=0)
    if levels:
        p.add_argument("--levels", type=int, default=1, help="number of levels n = 0..levels-1")
        p.add_argument("--sweep", help="sweep file (line format or JSON)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", help="write to file instead of stdout")
    p.add_argument("--stamp", action="store_true", help="add a metadata header")


def _add_oracle_args(p):
    p.add_argument("--R", "--box-radius", dest="R", type=float, default=None)
    p.add_argument("--M", "--grid-points", dest="M", type=int, default=None)
    p.add_argument("--N-b", "--basis-size", dest="N_b", type=int, default=None)
    p.add_argument("--lambda", "--basis-scale", dest="lam", type=float, default=None)
    p.add_argument("--mu", "--basis-exponent", dest="mu", type=float, default=None)
    p.add_argument("--nu", "--laguerre-order", dest="nu", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectra", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="closed-form Kratzer-Fues levels")
    _add_problem_args(p)

    p = sub.add_parser("verify", help="closed form vs finite-difference and Galerkin oracles")
    _add_problem_args(p)
    _add_oracle_args(p)
    p.add_argument("--tol", type=float, default=1e-6)

    p = sub.add_parser("compare-ab", help="adjudicate the AB energy formula")
    _add_problem_args(p)
    _add_oracle_args(p)
    p.add_argument("--oracle", choices=("fd", "galerkin"), default="fd")
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("wavefunction", help="sample phi(r) of one level")
    _add_problem_args(p, levels=False)
    _add_oracle_args(p)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--rmin", type=float, default=0.01)
    p.add_argument("--rmax", type=float, default=20.0)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--with-oracle", action="store_true")
    return parser


def _overrides_from_args(args) -> dict:
    out = {}
    for key, attr in (("R", "R"), ("M", "M"), ("N_b", "N_b"), ("lambda", "lam"), ("mu", "mu"), ("nu", "nu")):
        val = getattr(args, attr, None)
        if val is not None:
            out[key] = val
    return out


def _records(args) -> list[SweepRecord]:
    if getattr(args, "sweep", None):
        return read_sweep(args.sweep)
    if args.A is None or args.B is None:
        raise UsageError("give --A and --B, or --sweep FILE")
    levels = getattr(args, "levels", 1)
    if levels < 1:
        raise UsageError("--levels must be >= 1")
    rec = SweepRecord(args.A, args.B, args.l, levels - 1, _overrides_from_args(args))
    report = validate(rec.problem)
    if not report.valid:
        raise DomainError(f"invalid problem: violated {', '.join(report.violations())}",
                          boundary=report.boundary)
    return [rec]


def _meta(args) -> dict | None:
    if not args.stamp:
        return None
    return {"tool": "kratzer_spectra", "version": __version__, "command": args.command,
            "generated": datetime.now(timezone.utc).isoformat(timespec="seconds")}


def _emit(args, rows, columns, **extra) -> None:
    meta = _meta(args)
    if args.format == "json":
        text = to_json(rows, meta, **extra)
    else:
        header = [f"{k}: {v}" for k, v in meta.items()] if meta else None
        text = to_csv(rows, columns, header)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_spectrum(args) -> int:
    rows = []
    for rec in _records(args):
        problem = rec.problem
        for n in range(rec.n_max + 1):
            sol = frobenius.solve(problem, n)
            rows.append({"A": rec.A, "B": rec.B, "l": rec.l, "n": n, "energy": sol.energy,
                         "s": sol.s, "decay_alpha": sol.decay_alpha})
    _emit(args, rows, SPECTRUM_COLUMNS)
    return 0


def _galerkin_spec(rec: SweepRecord) -> laguerre.BasisSpec:
    ov = rec.overrides
    base = laguerre.BasisSpec.matched(rec.problem, rec.n_max, ov.get("N_b", laguerre.DEFAULT_SIZE))
    return laguerre.BasisSpec(ov.get("lambda", base.lambda_scale), ov.get("mu", base.mu),
                              ov.get("nu", base.nu), base.size)


def verify_record(rec: SweepRecord, tol: float) -> list[dict]:
    problem = rec.problem
    count = rec.n_max + 1
    rows = [{"A": rec.A, "B": rec.B, "l": rec.l, "n": n,
             "E_closed": frobenius.closed_form_energy(problem, n)} for n in range(count)]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", oracle.AccuracyWarning)
            fd = oracle.extrapolate_levels(problem, count, R=rec.overrides.get("R"),
                                           M=rec.overrides.get("M"))
        spec = _galerkin_spec(rec)
        gal = laguerre.galerkin_spectrum(laguerre.build_galerkin(spec, problem), count)
    except Exception as exc:  # an oracle failure marks the record, not the run
        log.error("oracle failure for %s: %s", rec.to_dict(), exc)
        for row in rows:
            row.update(E_fd=math.nan, fd_error_estimate=math.nan, E_galerkin=math.nan,
                       max_deviation=math.nan, status="FAILED")
        return rows
    for row, ex, eg in zip(rows, fd, gal):
        vals = (row["E_closed"], ex.energy, float(eg))
        dev = max(abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1:])
        row.update(E_fd=ex.energy, fd_error_estimate=ex.error_estimate, E_galerkin=float(eg),
                   max_deviation=dev, status="PASS" if dev < tol else "FAIL")
    return rows


def cmd_verify(args) -> int:
    records = _records(args)
    workers = min(thread_cap(), len(records))
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as pool:
            chunks = list(pool.map(lambda r: verify_record(r, args.tol), records))
    else:
        chunks = [verify_record(r, args.tol) for r in records]
    rows = [row for chunk in chunks for row in chunk]
    _emit(args, rows, VERIFY_COLUMNS)
    return 0 if all(r["status"] == "PASS" for r in rows) else 1


def _compare_entries(args):
    if getattr(args, "sweep", None) or args.A is not None:
        recs = _records(args)
        return [(r.A, r.B, r.l, k) for r in recs for k in range(r.n_max + 1)], recs
    return list(DEMO_SWEEP), []


def cmd_compare_ab(args) -> int:
    entries, recs = _compare_entries(args)
    settings = {}
    ov = recs[0].overrides if len(recs) == 1 else _overrides_from_args(args)
    if args.oracle == "fd":
        settings = {k: ov[k] for k in ("R", "M") if k in ov}
    elif "N_b" in ov:
        settings = {"size": ov["N_b"]}
    report = ab.build_discrepancy_report(entries, oracle=args.oracle, tol=args.tol,
                                         threads=thread_cap(), **settings)
    rows = report.as_dicts()
    counts = report.counts()
    _emit(args, rows, list(report.fields), summary=counts, oracle=report.oracle, tol=report.tol)
    summary = ", ".join(f"{k}={counts.get(k, 0)}" for k in
                        (ab.CONFIRMS_CORRECTED, ab.DEGENERATE, ab.INCONCLUSIVE, ab.FAILED))
    print(f"summary: {summary}", file=sys.stderr)
    ok = all(r.verdict in (ab.CONFIRMS_CORRECTED, ab.DEGENERATE) for r in report.rows)
    return 0 if ok else 1


def cmd_wavefunction(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if not args.rmin > 0 or not args.rmax > args.rmin:
        raise UsageError("need 0 < --rmin < --rmax")
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    if args.A is None or args.B is None:
        raise UsageError("give --A and --B")
    problem = RadialProblem.from_params(args.A, args.B, args.l)
    problem.require_regular()
    r = np.linspace(args.rmin, args.rmax, args.samples)
    phi = frobenius.wavefunction(problem, args.n, r)
    rows = [{"r": float(ri), "phi": float(pi)} for ri, pi in zip(r, np.atleast_1d(phi))]
    columns = list(WAVE_COLUMNS)
    if args.with_oracle:
        sampled = oracle_wavefunction(problem, args.n, r, R=args.R, M=args.M)
        for row, val in zip(rows, sampled):
            row["phi_oracle"] = float(val)
        columns.append("phi_oracle")
    _emit(args, rows, columns)
    return 0


def oracle_wavefunction(problem: RadialProblem, n: int, r, R=None, M=None) -> np.ndarray:
    """Oracle eigenvector interpolated at r, scaled by least squares onto the closed form."""
    grid = oracle.default_grid(problem, n, R, M)
    res = oracle.solve(problem, n + 1, grid)
    vec = res.eigenvectors[:, n]
    ref = frobenius.wavefunction(problem, n, grid.nodes)
    vec = vec * (np.dot(ref, vec) / np.dot(vec, vec))
    return np.interp(r, np.concatenate([[0.0], grid.nodes, [grid.R]]),
                     np.concatenate([[0.0], vec, [0.0]]))


COMMANDS = {"spectrum": cmd_spectrum, "verify": cmd_verify,
            "compare-ab": cmd_compare_ab, "wavefunction": cmd_wavefunction}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
