"""Tridiagonal-representation (TRA/PPS) energy formulas, called AB here, and their adjudication.

AB write the potential as V = Z/r + beta/r**2 with Z = ab_alpha*lambda/2.
Mapping to the canonical parametrization happens only here: Z = -A,
beta = B.  The uncorrected energy formula is kept verbatim on purpose;
the corrected variant substitutes 2*beta for beta.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from . import frobenius
from .model import DomainError, RadialProblem

CONFIRMS_CORRECTED = "CONFIRMS_CORRECTED"
DEGENERATE = "DEGENERATE"
INCONCLUSIVE = "INCONCLUSIVE"
FAILED = "FAILED"

DEFAULT_TOL = {"fd": 1e-6, "galerkin": 1e-8}


@dataclass(frozen=True)
class ABParametrization:
    Z: float
    beta: float
    lambda_scale: float
    l: int = 0
    k: int = 0

    def __post_init__(self):
        if not self.lambda_scale > 0:
            raise DomainError(f"lambda must be positive, got {self.lambda_scale}")

    @classmethod
    def from_ab_alpha(cls, ab_alpha: float, beta: float, lambda_scale: float,
                      l: int = 0, k: int = 0) -> "ABParametrization":
        return cls(ab_alpha * lambda_scale / 2.0, beta, lambda_scale, l, k)

    @property
    def ab_alpha(self) -> float:
        return 2.0 * self.Z / self.lambda_scale

    @property
    def two_z_over_lambda(self) -> float:
        return 2.0 * self.Z / self.lambda_scale

    @property
    def bound_state_regime(self) -> bool:
        return self.Z < 0

    def potential(self, r):
        """Z/r + beta/r^2, the form compared against V = -A/r + B/r^2."""
        return self.Z / r + self.beta / r**2

    def scaled_potential(self, r):
        """(lambda^2/2)(ab_alpha x + beta)/x^2 at x = lambda r.

        Expands to Z/r + beta/(2 r^2): the inverse-square coefficient is
        beta/2 here, not beta.
        """
        x = self.lambda_scale * r
        return 0.5 * self.lambda_scale**2 * (self.ab_alpha * x + self.beta) / x**2


def pps_beta(k: int, l: int, two_z_over_lambda: float) -> float:
    """(k + l + 1 + 2Z/lambda)(k - l + 2Z/lambda)."""
    return (k + l + 1 + two_z_over_lambda) * (k - l + two_z_over_lambda)


def ab_level_bound(two_z_over_lambda: float) -> int | None:
    """Largest admissible k, floor(-(1/2 + 2Z/lambda)), or None if no k is admissible."""
    top = -(0.5 + two_z_over_lambda)
    if top < 0:
        return None
    return math.floor(top)


def ab_energy(Z: float, beta: float, l: int, k: int, corrected: bool = False) -> float:
    """-Z^2 / (2 [k + 1/2 + sqrt(beta + (l+1/2)^2)]^2); 2*beta under the root if corrected."""
    b = 2.0 * beta if corrected else beta
    radicand = b + (l + 0.5) ** 2
    if radicand < 0:
        raise DomainError(f"negative radicand {radicand!r} in AB energy formula")
    return -Z**2 / (2.0 * (k + 0.5 + math.sqrt(radicand)) ** 2)


@dataclass
class DiscrepancyRow:
    A: float
    B: float
    l: int
    k: int
    Z: float
    beta: float
    lambda_scale: float
    level_bound: int | None
    exceeds_ab_bound: bool
    E_ab: float
    E_ab_corrected: float
    E_frobenius: float
    E_oracle: float
    err_ab: float
    err_ab_corrected: float
    verdict: str
    error: str = ""


@dataclass
class DiscrepancyReport:
    rows: list[DiscrepancyRow]
    oracle: str = "fd"
    tol: float = 1e-6
    fields: tuple = field(default=tuple(DiscrepancyRow.__dataclass_fields__), repr=False)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for row in self.rows:
            out[row.verdict] = out.get(row.verdict, 0) + 1
        return out

    def as_dicts(self) -> list[dict]:
        return [asdict(r) for r in self.rows]


def _verdict(e_ab, e_corr, e_oracle, B, tol) -> str:
    if B == 0:
        return DEGENERATE
    if abs(e_corr - e_oracle) < tol and abs(e_ab - e_oracle) > 10 * tol:
        return CONFIRMS_CORRECTED
    return INCONCLUSIVE


def oracle_energy(problem: RadialProblem, n: int, oracle: str = "fd", **settings) -> float:
    if oracle == "fd":
        from .oracle import extrapolate
        return extrapolate(problem, n, **settings).energy
    if oracle == "galerkin":
        from .laguerre import galerkin_energy
        return galerkin_energy(problem, n, **settings)
    raise ValueError(f"unknown oracle {oracle!r}")


def discrepancy_row(A: float, B: float, l: int, k: int, oracle: str = "fd",
                    tol: float | None = None, **settings) -> DiscrepancyRow:
    """One adjudication row.

    lambda is fixed per (A, B, l) from the ground state via lambda^2 = -8E_0,
    so every k in the tower shares the same AB potential; k beyond
    ab_level_bound at that lambda is flagged.
    """
    tol = DEFAULT_TOL[oracle] if tol is None else tol
    problem = RadialProblem.from_params(A, B, l)
    problem.require_regular()
    Z, beta = -problem.A, problem.B
    lam = math.sqrt(-8.0 * frobenius.closed_form_energy(problem, 0))
    bound = ab_level_bound(2.0 * Z / lam)
    e_fro = frobenius.closed_form_energy(problem, k)
    e_ab = ab_energy(Z, beta, l, k) if beta + (l + 0.5) ** 2 >= 0 else math.nan
    e_corr = ab_energy(Z, beta, l, k, corrected=True)
    error = ""
    try:
        e_or = oracle_energy(problem, k, oracle, **settings)
        verdict = _verdict(e_ab, e_corr, e_or, B, tol)
    except Exception as exc:  # per-row failure must not abort a sweep
        e_or, verdict, error = math.nan, FAILED, f"{type(exc).__name__}: {exc}"
    return DiscrepancyRow(
        A=problem.A, B=problem.B, l=problem.l, k=int(k), Z=Z, beta=beta,
        lambda_scale=lam, level_bound=bound,
        exceeds_ab_bound=bound is None or k > bound,
        E_ab=e_ab, E_ab_corrected=e_corr, E_frobenius=e_fro, E_oracle=e_or,
        err_ab=abs(e_ab - e_or), err_ab_corrected=abs(e_corr - e_or),
        verdict=verdict, error=error,
    )


def build_discrepancy_report(sweep, oracle: str = "fd", tol: float | None = None,
                             threads: int | None = None, **settings) -> DiscrepancyReport:
    """Adjudicate each (A, B, l, n) entry; rows keep input order."""
    tol = DEFAULT_TOL[oracle] if tol is None else tol
    entries = [tuple(e) for e in sweep]

    def work(entry):
        A, B, l, n = entry
        return discrepancy_row(A, B, int(l), int(n), oracle=oracle, tol=tol, **settings)

    if threads and threads > 1 and len(entries) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(work, entries))
    else:
        rows = [work(e) for e in entries]
    return DiscrepancyReport(rows=rows, oracle=oracle, tol=tol)
