"""Bound-state spectrum of the radial Schrodinger equation with the Kratzer-Fues potential."""

__version__ = "0.1.0"

from .model import DomainError, KratzerFuesPotential, RadialProblem, effective_potential, validate
from .frobenius import (
    FrobeniusSolution,
    closed_form_energy,
    indicial_exponent,
    polynomial_coefficients,
    recurrence_step,
    wavefunction,
)

__all__ = [
    "DomainError", "KratzerFuesPotential", "RadialProblem", "effective_potential", "validate",
    "FrobeniusSolution", "closed_form_energy", "indicial_exponent", "polynomial_coefficients",
    "recurrence_step", "wavefunction",
]
