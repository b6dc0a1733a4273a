"""Finite-difference eigenvalue oracle for the radial Hamiltonian.

Three-point stencil on r_i = i*h, i = 1..M, h = R/(M+1), Dirichlet at 0
and R.  Eigenvalues come from Sturm-sequence bisection, eigenvectors from
inverse iteration, and the continuum limit from one Richardson step.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.linalg import solve_banded

from .model import DomainError, RadialProblem, effective_potential

log = logging.getLogger(__name__)

DEFAULT_POINTS = 12_000
MAX_POINTS = 200_000
ACCURACY_WARNING = 1e-4
MAX_SWEEPS = 50


class AccuracyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class GridSpec:
    R: float
    M: int = DEFAULT_POINTS

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError(f"box radius must be positive, got {self.R}")
        if int(self.M) != self.M or self.M < 3:
            raise DomainError(f"need at least 3 interior points, got {self.M}")

    @property
    def h(self) -> float:
        return self.R / (self.M + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.M + 1)

    def refined(self) -> "GridSpec":
        """Same box, half the spacing: M -> 2M + 1."""
        return GridSpec(self.R, 2 * self.M + 1)


@dataclass
class OracleResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    grid: GridSpec | None = None
    extrapolated: bool = False
    node_counts: list[int] = field(default_factory=list)
    converged: list[bool] = field(default_factory=list)
    unbound: list[bool] = field(default_factory=list)


@dataclass(frozen=True)
class Extrapolation:
    energy: float
    error_estimate: float
    coarse: float
    fine: float
    grid: GridSpec


def discretize(problem: RadialProblem, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the symmetric tridiagonal Hamiltonian."""
    h = grid.h
    d = 1.0 / h**2 + effective_potential(problem, grid.nodes)
    e = np.full(grid.M - 1, -0.5 / h**2)
    return np.atleast_1d(d), e


def kinetic_matrix(M: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Stencil with V = 0."""
    return np.full(M, 1.0 / h**2), np.full(M - 1, -0.5 / h**2)


@numba.njit(cache=True, nogil=True)
def _sturm_count(d, e2, x, pivmin):
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, d.size):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


@numba.njit(cache=True, nogil=True)
def _bisect(d, e2, k, lo, hi, pivmin):
    # k-th (0-based) eigenvalue inside [lo, hi]
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        if _sturm_count(d, e2, mid, pivmin) > k:
            hi = mid
        else:
            lo = mid


def gershgorin(d: np.ndarray, e: np.ndarray) -> tuple[float, float]:
    ae = np.abs(e)
    rad = np.zeros_like(d)
    rad[:-1] += ae
    rad[1:] += ae
    return float(np.min(d - rad)), float(np.max(d + rad))


def _pivmin(d, e):
    return np.finfo(float).tiny * max(1.0, float(np.max(e**2)) if e.size else 1.0)


def sturm_count(d, e, shift: float) -> int:
    """Number of eigenvalues strictly below ``shift``."""
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    return int(_sturm_count(d, e**2, float(shift), _pivmin(d, e)))


def tridiagonal_eigenvalues(d, e, count: int | None = None) -> np.ndarray:
    """Lowest ``count`` eigenvalues (all by default), ascending, by bisection."""
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    count = d.size if count is None else count
    if not 0 < count <= d.size:
        raise DomainError(f"count must lie in 1..{d.size}, got {count}")
    lo, hi = gershgorin(d, e)
    span = max(hi - lo, 1.0)
    lo, hi = lo - 1e-3 * span, hi + 1e-3 * span
    e2, pivmin = e**2, _pivmin(d, e)
    out = np.empty(count)
    for k in range(count):
        a = out[k - 1] if k else lo
        out[k] = _bisect(d, e2, k, a - 1e-14 * span, hi, pivmin)
    return out


def inverse_iteration(d, e, value: float, max_sweeps: int = MAX_SWEEPS,
                      tol: float = 1e-10) -> tuple[np.ndarray, float, bool]:
    """Unit eigenvector for the eigenvalue nearest ``value``.

    Returns (vector, Rayleigh quotient, converged).  The start vector is
    deterministic.
    """
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    m = d.size
    scale = max(1.0, float(np.max(np.abs(d))) + 2 * float(np.max(np.abs(e), initial=0.0)))
    shift = value + 4 * np.finfo(float).eps * scale
    ab = np.zeros((3, m))
    ab[0, 1:] = e
    ab[1] = d - shift
    ab[2, :-1] = e
    x = np.linspace(1.0, 2.0, m)
    x /= np.linalg.norm(x)
    converged = False
    for _ in range(max_sweeps):
        y = solve_banded((1, 1), ab, x, check_finite=False)
        y /= np.linalg.norm(y)
        if np.dot(y, x) < 0:
            y = -y
        done = np.linalg.norm(y - x) < tol
        x = y
        if done:
            converged = True
            break
    hx = d * x
    hx[:-1] += e * x[1:]
    hx[1:] += e * x[:-1]
    if x[np.argmax(np.abs(x))] < 0:
        x = -x
    return x, float(np.dot(x, hx)), converged


def count_nodes(vector, rel_cutoff: float = 1e-12) -> int:
    """Strict sign changes, ignoring entries below rel_cutoff * max|v|."""
    v = np.asarray(vector, dtype=float)
    keep = v[np.abs(v) >= rel_cutoff * np.max(np.abs(v))]
    return int(np.count_nonzero(np.diff(np.sign(keep))))


def node_positions(grid: GridSpec, vector) -> np.ndarray:
    """Linearly interpolated sign-change radii of a grid eigenvector."""
    v = np.asarray(vector, dtype=float)
    r = grid.nodes
    mask = np.abs(v) >= 1e-12 * np.max(np.abs(v))
    r, v = r[mask], v[mask]
    idx = np.nonzero(np.diff(np.sign(v)))[0]
    return r[idx] - v[idx] * (r[idx + 1] - r[idx]) / (v[idx + 1] - v[idx])


def lowest_eigenpairs(d, e, count: int, vectors: bool = True,
                      grid: GridSpec | None = None) -> OracleResult:
    values = tridiagonal_eigenvalues(d, e, count)
    result = OracleResult(eigenvalues=values, grid=grid, unbound=[bool(v >= 0) for v in values])
    if vectors:
        vecs = np.empty((len(d), count))
        for k, val in enumerate(values):
            vecs[:, k], _, ok = inverse_iteration(d, e, val)
            result.converged.append(ok)
            if not ok:
                log.warning("inverse iteration did not converge for eigenvalue %d", k)
        result.eigenvectors = vecs
        result.node_counts = [count_nodes(vecs[:, k]) for k in range(count)]
    return result


def default_box(problem: RadialProblem, n_max: int) -> float:
    """max(30/alpha_est, 20) with alpha_est = A/(n_max + s)."""
    from .frobenius import decay_rate
    return max(30.0 / decay_rate(problem, n_max), 20.0)


def default_grid(problem: RadialProblem, n_max: int, R: float | None = None,
                 M: int | None = None) -> GridSpec:
    return GridSpec(default_box(problem, n_max) if R is None else R,
                    DEFAULT_POINTS if M is None else M)


def solve(problem: RadialProblem, count: int, grid: GridSpec | None = None,
          vectors: bool = True) -> OracleResult:
    """Lowest ``count`` levels on a single grid."""
    problem.require_regular()
    grid = grid or default_grid(problem, count - 1)
    d, e = discretize(problem, grid)
    return lowest_eigenpairs(d, e, count, vectors=vectors, grid=grid)


def extrapolate_levels(problem: RadialProblem, count: int, grid: GridSpec | None = None,
                       R: float | None = None, M: int | None = None) -> list[Extrapolation]:
    """Richardson step (4 E(h/2) - E(h)) / 3 for levels 0..count-1.

    The 3-point stencil error is O(h^2); one refinement cancels it.
    """
    problem.require_regular()
    grid = grid or default_grid(problem, count - 1, R, M)
    fine_grid = grid.refined()
    if fine_grid.M > MAX_POINTS:
        raise DomainError(f"refined grid needs {fine_grid.M} points, budget is {MAX_POINTS}")
    coarse = solve(problem, count, grid, vectors=False).eigenvalues
    fine = solve(problem, count, fine_grid, vectors=False).eigenvalues
    out = []
    for ec, ef in zip(coarse, fine):
        estimate = abs(ef - ec) / 3.0
        if estimate > ACCURACY_WARNING:
            warnings.warn(f"Richardson error estimate {estimate:.3g} exceeds {ACCURACY_WARNING}",
                          AccuracyWarning, stacklevel=2)
        out.append(Extrapolation((4.0 * ef - ec) / 3.0, estimate, float(ec), float(ef), grid))
    return out


def extrapolate(problem: RadialProblem, level: int, grid: GridSpec | None = None,
                R: float | None = None, M: int | None = None) -> Extrapolation:
    """Extrapolated energy of a single level."""
    if grid is None:
        problem.require_regular()
        grid = default_grid(problem, level, R, M)
    return extrapolate_levels(problem, level + 1, grid)[level]
