"""Frobenius power-series solution of the Kratzer-Fues radial equation.

The bound state is written phi(r) = r**s exp(-decay_alpha r) u(r) with
u(r) = sum_j c_j r**j.  The indicial equation fixes s, the exponential
tail fixes decay_alpha = sqrt(-2E), and square integrability forces the
series to terminate, which happens only for decay_alpha = A/(n + s).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .model import DomainError, RadialProblem

SERIES_REL_TOL = 1e-15
SERIES_MAX_TERMS = 100_000


@dataclass(frozen=True)
class FrobeniusSolution:
    s: float
    decay_alpha: float
    n: int
    energy: float
    coeffs: np.ndarray

    def u(self, r):
        return P.polyval(r, self.coeffs)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return r**self.s * np.exp(-self.decay_alpha * r) * self.u(r)


def _check_level(n) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"level index n must be a non-negative integer, got {n}")
    return int(n)


def indicial_exponent(problem: RadialProblem) -> float:
    """Regular root s = (sqrt(8B + 4l^2 + 4l + 1) + 1)/2 of the indicial equation.

    The other root, (1 - sqrt(...))/2, gives a solution irregular at the
    origin and is never returned.
    """
    problem.require_regular()
    return 0.5 * (math.sqrt(problem.indicial_discriminant) + 1.0)


def decay_rate(problem: RadialProblem, n: int) -> float:
    """Quantized decay rate A/(n + s) that terminates the series at degree n."""
    n = _check_level(n)
    return problem.A / (n + indicial_exponent(problem))


def recurrence_step(j: int, s: float, decay_alpha: float, A: float) -> float:
    """Ratio c_{j+1}/c_j = 2(decay_alpha (j+s) - A) / ((j+1)(j+2s))."""
    if s <= 0:
        raise DomainError(f"recurrence needs s > 0 (denominator (j+1)(j+2s)), got s={s}")
    return 2.0 * (decay_alpha * (j + s) - A) / ((j + 1) * (j + 2 * s))


def closed_form_energy(problem: RadialProblem, n: int) -> float:
    """E_{n,l} = -A^2 / (2 (n + s)^2), evaluated as
    -A^2 / (2 [n + 1/2 + sqrt(2B + (l + 1/2)^2)]^2)."""
    n = _check_level(n)
    problem.require_regular()
    root = 0.5 * math.sqrt(problem.indicial_discriminant)
    return -problem.A**2 / (2.0 * (n + 0.5 + root) ** 2)


def polynomial_coefficients(problem: RadialProblem, n: int) -> np.ndarray:
    """Coefficients c_0..c_n of the terminated series, with c_0 = 1."""
    n = _check_level(n)
    s = indicial_exponent(problem)
    alpha = problem.A / (n + s)
    c = np.empty(n + 1)
    c[0] = 1.0
    for j in range(n):
        c[j + 1] = c[j] * recurrence_step(j, s, alpha, problem.A)
    return c


def termination_coefficient(problem: RadialProblem, n: int) -> float:
    """c_{n+1} from the recurrence at the quantized rate; zero up to roundoff."""
    c = polynomial_coefficients(problem, n)
    s = indicial_exponent(problem)
    return c[-1] * recurrence_step(n, s, problem.A / (n + s), problem.A)


def solve(problem: RadialProblem, n: int) -> FrobeniusSolution:
    s = indicial_exponent(problem)
    alpha = problem.A / (_check_level(n) + s)
    return FrobeniusSolution(
        s=s,
        decay_alpha=alpha,
        n=int(n),
        energy=closed_form_energy(problem, n),
        coeffs=polynomial_coefficients(problem, n),
    )


def wavefunction(problem: RadialProblem, n: int, r):
    """Unnormalized phi(r) = r^s exp(-alpha r) u(r) for level n."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise DomainError("wavefunction requires r > 0")
    out = solve(problem, n)(r_arr)
    return float(out) if out.ndim == 0 else out


def series_coefficients(s: float, decay_alpha: float, A: float, n_terms: int) -> np.ndarray:
    """First n_terms coefficients of u for an arbitrary (not necessarily quantized) rate."""
    c = np.empty(n_terms)
    c[0] = 1.0
    for j in range(n_terms - 1):
        c[j + 1] = c[j] * recurrence_step(j, s, decay_alpha, A)
    return c


def series_value(s: float, decay_alpha: float, A: float, r: float,
                 max_terms: int = SERIES_MAX_TERMS) -> float:
    """Sum u(r) = sum c_j r^j until three consecutive terms fall below
    SERIES_REL_TOL of the running sum (hard cap max_terms)."""
    total = term = 1.0
    small = 0
    for j in range(max_terms - 1):
        term *= recurrence_step(j, s, decay_alpha, A) * r
        total += term
        if abs(term) < SERIES_REL_TOL * abs(total):
            small += 1
            if small == 3:
                return total
        else:
            small = 0
    return total


def ode_terms(problem: RadialProblem, s: float, decay_alpha: float, coeffs, r,
              energy: float | None = None) -> np.ndarray:
    """The five terms of the unreduced equation for u, stacked on axis 0.

    Order: -u''/2, (alpha - s/r) u', (alpha s - A) u / r,
    [2B + l(l+1) - s(s-1)] u / (2 r^2), -(alpha^2 + 2E) u / 2.
    ``energy`` defaults to -alpha^2/2, which cancels the last term.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("ODE residual requires r > 0")
    if energy is None:
        energy = -0.5 * decay_alpha**2
    c = np.asarray(coeffs, dtype=float)
    u = P.polyval(r, c)
    du = P.polyval(r, P.polyder(c)) if c.size > 1 else np.zeros_like(r)
    d2u = P.polyval(r, P.polyder(c, 2)) if c.size > 2 else np.zeros_like(r)
    A, B, l = problem.A, problem.B, problem.l
    return np.stack([
        -0.5 * d2u,
        (decay_alpha - s / r) * du,
        (decay_alpha * s - A) * u / r,
        (2 * B + l * (l + 1) - s * (s - 1)) * u / (2 * r**2),
        -(decay_alpha**2 + 2 * energy) * u / 2,
    ])


def ode_residual_scale(problem: RadialProblem, s: float, decay_alpha: float, coeffs, r,
                       energy: float | None = None):
    """Largest single monomial contribution to the residual sum at r.

    Each c_j r^j feeds the residual through the products listed in
    ode_terms; the largest of their magnitudes bounds what roundoff can
    leave behind, so residuals are judged relative to it.
    """
    r = np.asarray(r, dtype=float)
    if energy is None:
        energy = -0.5 * decay_alpha**2
    c = np.abs(np.asarray(coeffs, dtype=float))
    A, B, l = problem.A, problem.B, problem.l
    j = np.arange(c.size)[:, None]
    mono = c[:, None] * r ** j
    pieces = [
        0.5 * j * (j - 1) / r**2,
        decay_alpha * j / r,
        s * j / r**2,
        decay_alpha * s / r,
        A / r,
        np.abs(2 * B + l * (l + 1) - s * (s - 1)) / (2 * r**2),
        np.abs(decay_alpha**2 + 2 * energy) / 2 + 0 * r,
    ]
    out = np.max([np.max(mono * p, axis=0) for p in pieces], axis=0)
    return float(out) if out.ndim == 0 else out


def ode_residual_full(problem: RadialProblem, s: float, decay_alpha: float, coeffs, r,
                      energy: float | None = None):
    """Left side of the unreduced ODE for u at radius r."""
    out = ode_terms(problem, s, decay_alpha, coeffs, r, energy).sum(axis=0)
    return float(out) if out.ndim == 0 else out


def ode_residual_reduced(problem: RadialProblem, s: float, decay_alpha: float, coeffs, r):
    """-u''/2 + (alpha - s/r) u' + (alpha s - A) u / r."""
    out = ode_terms(problem, s, decay_alpha, coeffs, r)[:3].sum(axis=0)
    return float(out) if out.ndim == 0 else out


def sturm_chain(coeffs) -> list[np.ndarray]:
    """Sturm sequence p, p', -rem(p, p'), ... (ascending-order coefficients)."""
    p0 = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    chain = [p0]
    if p0.size < 2:
        return chain
    chain.append(P.polyder(p0))
    scale = np.max(np.abs(p0))
    while chain[-1].size > 1:
        _, rem = P.polydiv(chain[-2], chain[-1])
        rem = np.trim_zeros(-rem, "b")
        if rem.size == 0 or np.max(np.abs(rem)) <= 1e-13 * scale:
            break
        chain.append(rem)
    return chain


def _sign_changes(values) -> int:
    signs = [np.sign(v) for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def positive_root_count(coeffs) -> int:
    """Number of distinct real roots in (0, inf) by Sturm's theorem."""
    chain = sturm_chain(coeffs)
    at_zero = [p[0] for p in chain]
    at_inf = [p[-1] for p in chain]
    return _sign_changes(at_zero) - _sign_changes(at_inf)


def node_positions(problem: RadialProblem, n: int) -> np.ndarray:
    """Sorted positive radii where the level-n wavefunction vanishes."""
    roots = P.polyroots(polynomial_coefficients(problem, n))
    real = roots.real[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots.real))]
    return np.sort(real[real > 0])
