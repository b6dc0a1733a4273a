"""Scaled-Laguerre basis phi_n(r) = (lam r)^mu exp(-lam r/2) L_n^nu(lam r).

Provides the J = H - E identity check for this basis and a Rayleigh-Ritz
(Galerkin) oracle: matrix elements are polynomial integrals against the
weight x^(2mu-2) e^(-x), evaluated exactly by generalized Gauss-Laguerre
quadrature built with Golub-Welsch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import hessenberg, solve_triangular

from .model import DomainError, RadialProblem
from .oracle import tridiagonal_eigenvalues

DEFAULT_SIZE = 30


@dataclass(frozen=True)
class BasisSpec:
    lambda_scale: float
    mu: float
    nu: float
    size: int = DEFAULT_SIZE

    def __post_init__(self):
        if not self.lambda_scale > 0:
            raise DomainError(f"lambda must be positive, got {self.lambda_scale}")
        if not self.nu > -1:
            raise DomainError(f"Laguerre order nu must exceed -1, got {self.nu}")
        if not self.mu > 0.5:
            raise DomainError(f"mu must exceed 1/2 for a finite kinetic integral, got {self.mu}")
        if int(self.size) != self.size or self.size < 1:
            raise DomainError(f"basis size must be a positive integer, got {self.size}")

    @classmethod
    def matched(cls, problem: RadialProblem, n_max: int = 0, size: int = DEFAULT_SIZE,
                lambda_factor: float = 1.0) -> "BasisSpec":
        """lam = 2A/(n_max + s), mu = s, nu = 2s - 1.

        At lambda_factor = 1 the level-n_max eigenfunction lies in the span.
        """
        from .frobenius import indicial_exponent
        s = indicial_exponent(problem)
        mu = s if s > 0.5 else 1.0
        return cls(lambda_factor * 2.0 * problem.A / (n_max + s), mu, 2.0 * s - 1.0, size)


@dataclass
class GalerkinSystem:
    H: np.ndarray
    S: np.ndarray
    spec: BasisSpec
    quadrature_order: int


def laguerre_eval(n: int, nu: float, x):
    """L_n^nu(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = nu + 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + nu + 1 - x) * cur - (k + nu) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def laguerre_table(n_max: int, nu: float, x) -> np.ndarray:
    """Rows L_0^nu(x) .. L_{n_max}^nu(x)."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = nu + 1.0 - x
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + nu + 1 - x) * out[k] - (k + nu) * out[k - 1]) / (k + 1)
    return out


def laguerre_derivative(n: int, nu: float, x, order: int = 1):
    """d^order/dx^order L_n^nu = (-1)^order L_{n-order}^{nu+order}."""
    if order > n:
        return np.zeros_like(np.asarray(x, dtype=float)) + 0.0
    return (-1) ** order * laguerre_eval(n - order, nu + order, x)


def gauss_laguerre(order: int, a: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for int_0^inf x^a e^-x f(x) dx (Golub-Welsch).

    Nodes are the eigenvalues of the Jacobi matrix, polished by Newton on
    L_order^a; weights come from the Christoffel function of the
    orthonormal polynomials, i.e. the squared first eigenvector components.
    """
    if not a > -1:
        raise DomainError(f"weight exponent must exceed -1, got {a}")
    k = np.arange(order)
    diag = 2.0 * k + a + 1.0
    off = np.sqrt(k[1:] * (k[1:] + a))
    x = tridiagonal_eigenvalues(diag, off)
    for _ in range(2):
        f = laguerre_eval(order, a, x)
        df = -laguerre_eval(order - 1, a + 1, x) if order > 1 else -np.ones_like(x)
        x = x - f / df
    mu0 = math.gamma(a + 1.0)
    # orthonormal recurrence: b_{j+1} p_{j+1} = (x - a_j) p_j - b_j p_{j-1}
    with np.errstate(over="ignore", invalid="ignore"):
        p_prev = np.zeros_like(x)
        p = np.full_like(x, 1.0 / math.sqrt(mu0))
        total = p**2
        for j in range(order - 1):
            b_prev = off[j - 1] if j else 0.0
            p_prev, p = p, ((x - diag[j]) * p - b_prev * p_prev) / off[j]
            total += p**2
        w = np.where(np.isfinite(total), 1.0 / total, 0.0)
    return x, w


def basis_function(spec: BasisSpec, n: int, r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("basis function requires r > 0")
    x = spec.lambda_scale * r
    out = x**spec.mu * np.exp(-x / 2) * laguerre_eval(n, spec.nu, x)
    return float(out) if np.ndim(out) == 0 else out


def _laguerre_ld(n, nu, x):
    prev, cur = np.longdouble(1), np.longdouble(nu) + 1 - x
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + np.longdouble(nu) + 1 - x) * cur - (k + np.longdouble(nu)) * prev) / (k + 1)
    return cur


def _hamiltonian_apply_fd(spec, n, problem, E, r):
    # -(2/lam^2) (H - E) phi_n with a 5-point second derivative, step 1e-4 r;
    # extended precision keeps the h^-2 roundoff below the stencil error
    ld = np.longdouble
    lam, mu = ld(spec.lambda_scale), ld(spec.mu)
    r = ld(r)
    h = ld("1e-4") * r

    def phi(rr):
        x = lam * rr
        return x**mu * np.exp(-x / 2) * _laguerre_ld(n, spec.nu, x)

    f = [phi(r + k * h) for k in (-2, -1, 0, 1, 2)]
    d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
    l = problem.l
    v = l * (l + 1) / (2 * r * r) - ld(problem.A) / r + ld(problem.B) / (r * r)
    return float(-(2 / lam**2) * (-d2 / 2 + (v - ld(E)) * f[2]))


def j_bracket(spec: BasisSpec, n: int, problem: RadialProblem, E: float, r: float,
              drop_mu_over_x: bool = False) -> float:
    """x^mu e^(-x/2) [L'' + (2mu/x - 1) L' + ((mu(mu-1) - l(l+1))/x^2 - mu/x
    + 1/4 - 2V/lam^2 + 2E/lam^2) L] at x = lam r.

    ``drop_mu_over_x`` removes the -mu/x term (mutation check only).
    """
    lam, mu, nu, l = spec.lambda_scale, spec.mu, spec.nu, problem.l
    x = lam * r
    L = laguerre_eval(n, nu, x)
    dL = laguerre_derivative(n, nu, x, 1)
    d2L = laguerre_derivative(n, nu, x, 2)
    coef = (mu * (mu - 1) - l * (l + 1)) / x**2 + 0.25 \
        - 2 * problem.potential(r) / lam**2 + 2 * E / lam**2
    if not drop_mu_over_x:
        coef -= mu / x
    return x**mu * math.exp(-x / 2) * (d2L + (2 * mu / x - 1) * dL + coef * L)


def j_identity_residual(spec: BasisSpec, n: int, problem: RadialProblem, E: float, r: float,
                        drop_mu_over_x: bool = False) -> float:
    """Relative mismatch between the finite-difference -(2/lam^2) J phi_n and the bracket form."""
    if r <= 0:
        raise DomainError("J identity requires r > 0")
    lhs = _hamiltonian_apply_fd(spec, n, problem, E, r)
    rhs = j_bracket(spec, n, problem, E, r, drop_mu_over_x)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)


def build_galerkin(spec: BasisSpec, problem: RadialProblem,
                   quadrature_order: int | None = None) -> GalerkinSystem:
    """Overlap and weak-form Hamiltonian matrices in the scaled-Laguerre basis.

    With x = lam r every integrand is x^(2mu-2) e^-x times a polynomial of
    degree <= 2 N_b, so the quadrature is exact for order >= N_b + 1.
    """
    problem.require_regular()
    nb, lam, mu, nu = spec.size, spec.lambda_scale, spec.mu, spec.nu
    order = quadrature_order or 2 * nb + 8
    x, w = gauss_laguerre(order, 2 * mu - 2)
    L = laguerre_table(nb - 1, nu, x)
    dL = np.zeros_like(L)
    if nb > 1:
        dL[1:] = -laguerre_table(nb - 2, nu + 1, x)
    # d/dx [x^mu e^(-x/2) L] = x^(mu-1) e^(-x/2) (mu L - x L/2 + x L')
    Pk = mu * L - 0.5 * x * L + x * dL
    c = 0.5 * problem.l * (problem.l + 1) + problem.B
    S = (L * (w * x**2)) @ L.T / lam
    T = 0.5 * lam * (Pk * w) @ Pk.T
    V = (L * (w * (lam * c - problem.A * x))) @ L.T
    H = T + V
    return GalerkinSystem(H=0.5 * (H + H.T), S=0.5 * (S + S.T), spec=spec, quadrature_order=order)


def _reduce(system: GalerkinSystem) -> np.ndarray:
    # diagonal scaling first; it leaves the pencil's eigenvalues unchanged
    dinv = 1.0 / np.sqrt(np.diag(system.S))
    S = system.S * np.outer(dinv, dinv)
    H = system.H * np.outer(dinv, dinv)
    try:
        Lc = np.linalg.cholesky(S)
    except np.linalg.LinAlgError as exc:
        raise DomainError(
            "overlap matrix is not positive definite; reduce the basis size or change nu"
        ) from exc
    tmp = solve_triangular(Lc, H, lower=True)
    C = solve_triangular(Lc, tmp.T, lower=True).T
    return 0.5 * (C + C.T)


def galerkin_spectrum(system: GalerkinSystem, count: int | None = None) -> np.ndarray:
    """Lowest ``count`` generalized eigenvalues of H c = E S c, ascending."""
    count = system.spec.size if count is None else count
    if not 0 < count <= system.spec.size:
        raise DomainError(f"count must lie in 1..{system.spec.size}, got {count}")
    C = _reduce(system)
    if C.shape[0] == 1:
        return np.array([C[0, 0]])
    T = hessenberg(C)
    d = np.diag(T).copy()
    e = 0.5 * (np.diag(T, 1) + np.diag(T, -1))
    return tridiagonal_eigenvalues(d, e, count)


def galerkin_energy(problem: RadialProblem, n: int, spec: BasisSpec | None = None,
                    size: int = DEFAULT_SIZE, lambda_factor: float = 1.0) -> float:
    """Level-n Rayleigh-Ritz energy; the default spec is matched to level n."""
    spec = spec or BasisSpec.matched(problem, n, size, lambda_factor)
    return float(galerkin_spectrum(build_galerkin(spec, problem), n + 1)[n])


def band_profile(system: GalerkinSystem, E: float) -> np.ndarray:
    """max |(H - E S)_ij| over |i - j| = k, for k = 0..N_b-1, scaled by the overall max."""
    M = system.H - E * system.S
    nb = M.shape[0]
    prof = np.array([np.max(np.abs(np.diag(M, k))) for k in range(nb)])
    return prof / max(prof.max(), 1e-300)
