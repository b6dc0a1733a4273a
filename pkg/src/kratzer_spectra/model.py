"""Radial problem for the Kratzer-Fues potential V(r) = -A/r + B/r**2.

Quantities are pure numbers in the rescaled convention where the
Schrodinger equation has been multiplied through by m/hbar**2, so the
radial operator reads H = -1/2 d2/dr2 + l(l+1)/(2 r**2) + V(r).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Raised when an input lies outside the domain of an operation."""

    def __init__(self, message: str, boundary: float | None = None):
        super().__init__(message)
        self.boundary = boundary


@dataclass(frozen=True)
class KratzerFuesPotential:
    A: float
    B: float

    def __call__(self, r):
        return -self.A / r + self.B / r**2

    @property
    def physical(self) -> bool:
        """True in the repulsive-core regime B > 0."""
        return self.B > 0


def regularity_boundary(l: int) -> float:
    """Smallest B for which the solution is regular at the origin: -(2l+1)**2/8."""
    return -((2 * l + 1) ** 2) / 8.0


@dataclass(frozen=True)
class RadialProblem:
    potential: KratzerFuesPotential
    l: int = 0

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 0:
            raise DomainError(f"angular momentum l must be a non-negative integer, got {self.l}")
        object.__setattr__(self, "l", int(self.l))

    @classmethod
    def from_params(cls, A: float, B: float, l: int = 0) -> "RadialProblem":
        return cls(KratzerFuesPotential(float(A), float(B)), l)

    @property
    def A(self) -> float:
        return self.potential.A

    @property
    def B(self) -> float:
        return self.potential.B

    @property
    def indicial_discriminant(self) -> float:
        """8B + 4l**2 + 4l + 1; non-negative iff the problem is regular."""
        # 4 (2B + (l + 1/2)^2): same value, but sqrt of it halves exactly
        return 4.0 * (2.0 * self.B + (self.l + 0.5) ** 2)

    def require_regular(self) -> None:
        """Raise DomainError unless A > 0 and B >= -(2l+1)**2/8."""
        if not self.A > 0:
            raise DomainError(f"coulomb strength A must be > 0, got A={self.A!r}")
        if self.indicial_discriminant < 0:
            bound = regularity_boundary(self.l)
            raise DomainError(
                f"regularity violated: need B >= {bound!r} for l={self.l}, got B={self.B!r}",
                boundary=bound,
            )


@dataclass(frozen=True)
class ValidityReport:
    regular: bool
    attractive: bool
    physical_regime: bool
    boundary: float
    on_boundary: bool

    @property
    def valid(self) -> bool:
        return self.regular and self.attractive

    def violations(self) -> list[str]:
        out = []
        if not self.regular:
            out.append(f"regularity: B >= {self.boundary!r}")
        if not self.attractive:
            out.append("A > 0")
        return out


def effective_potential(problem: RadialProblem, r):
    """l(l+1)/(2 r**2) - A/r + B/r**2; accepts scalars or arrays."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise DomainError("effective potential requires r > 0")
    l = problem.l
    out = 0.5 * l * (l + 1) / r_arr**2 + problem.potential(r_arr)
    return float(out) if out.ndim == 0 else out


def validate(problem: RadialProblem) -> ValidityReport:
    boundary = regularity_boundary(problem.l)
    return ValidityReport(
        regular=problem.indicial_discriminant >= 0,
        attractive=problem.A > 0,
        physical_regime=problem.B > 0,
        boundary=boundary,
        on_boundary=problem.indicial_discriminant == 0,
    )
