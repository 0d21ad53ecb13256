#!/usr/bin/env python3
"""
Exception types shared by the bound-state modules.

Physics verdicts (invalid couplings, forbidden parities, gamma poles) derive
from PhysicsParameterError, numerical failures from NumericalError. The CLI
maps the first family to exit code 2.
"""

from typing import Optional


class BoundStateError(Exception):
    """Base class for all errors raised by this package."""


class PhysicsParameterError(BoundStateError, ValueError):
    """Parameters outside the domain where the problem is well posed."""


class SupercriticalCouplingError(PhysicsParameterError):
    """Inverse-square coupling at or below the critical value alpha_c."""

    def __init__(self, g: float, critical: float = -0.125):
        self.g = g
        self.critical = critical
        super().__init__(
            f"inverse-square coupling g2={g!r} is not above the critical coupling "
            f"alpha_c (g2c={critical}); the potential falls to the center and no "
            f"Hermitian bound-state problem exists"
        )


class DegenerateProblemError(PhysicsParameterError):
    """Closed-form formula requested outside its hypotheses (e.g. g1 = 0)."""


class ParityNotAllowedError(PhysicsParameterError):
    """Parity extension forbidden by the connection conditions at the origin."""


class GammaPoleError(PhysicsParameterError):
    """Gamma function evaluated at a pole z in {0, -1, -2, ...}."""

    def __init__(self, z: float):
        self.z = z
        super().__init__(f"gamma function has a pole at z={z!r}")


class NumericalError(BoundStateError, RuntimeError):
    """A numerical procedure failed to deliver the requested accuracy."""


class SeriesConvergenceError(NumericalError):
    """Power series did not meet its stopping tolerance within the cap."""

    def __init__(self, iterations: int, last_term: Optional[float] = None):
        self.iterations = iterations
        self.last_term = last_term
        super().__init__(
            f"series did not converge within {iterations} terms (last term {last_term!r})"
        )


class QuadratureError(NumericalError):
    """Normalization quadrature failed or disagreed with its refinement."""


class EigensolverError(NumericalError):
    """Tridiagonal eigensolver failed."""


class GridMismatchError(NumericalError):
    """Grid vectors that must share a grid do not."""
