#!/usr/bin/env python3
"""
Origin analysis for potentials with a dominant singularity alpha/|x|^beta.

Indicial exponents, the critical inverse-square coupling, the behaviour of
psi and psi' at the origin, and the parity extensions to the whole line with
the degeneracy they imply. All quantities are dimensionless (lengths in
Compton wavelengths, energies in mc^2).
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from src.errors import ParityNotAllowedError, SupercriticalCouplingError

logger = logging.getLogger(__name__)

CRITICAL_COUPLING = -0.125


class Parity(IntEnum):
    EVEN = 1
    ODD = -1

    @property
    def label(self) -> str:
        return self.name.lower()


class OriginValue(str, Enum):
    ZERO = "zero"
    FINITE = "finite"


class OriginDerivative(str, Enum):
    ZERO = "zero"
    FINITE = "finite"
    INFINITE = "infinite"


class Degeneracy(str, Enum):
    NONDEGENERATE = "nondegenerate"
    DOUBLE = "double"


@dataclass(frozen=True)
class PotentialSpec:
    """
    Dimensionless potential V(zeta) = g / zeta^beta (+ g1 / zeta).

    Attributes:
        beta: Singularity exponent, 0 < beta <= 2.
        g: Dominant coupling; the inverse-square coupling g2 when beta = 2.
        g1: Optional Coulomb coupling for Kratzer-type composites. Only allowed
            for 1 < beta <= 2, where it stays subdominant at the origin.
    """
    beta: float
    g: float
    g1: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.beta <= 2:
            raise ValueError(f"singularity exponent must satisfy 0 < beta <= 2, got {self.beta}")
        if self.beta == 2 and self.g == 0:
            raise ValueError("beta=2 needs a non-zero inverse-square coupling; use beta=1 for a pure 1/zeta term")
        if self.g1 is not None and self.beta <= 1:
            raise ValueError(f"a Coulomb term would dominate 1/zeta^{self.beta}; g1 needs beta > 1")

    @property
    def coulomb_coupling(self) -> float:
        """Coefficient of the 1/zeta term (0 when absent)."""
        if self.beta == 1:
            return self.g
        return self.g1 or 0.0

    def value(self, zeta: np.ndarray) -> np.ndarray:
        """V evaluated at zeta > 0."""
        z = np.asarray(zeta, dtype=float)
        v = self.g * z ** (-self.beta)
        if self.g1:
            v = v + self.g1 / z
        return v


@dataclass(frozen=True)
class IndicialSolution:
    """Roots of the indicial equation and the exponents that survive Hermiticity."""
    s_plus: float
    s_minus: float
    admissible_s: Tuple[float, ...]


@dataclass(frozen=True)
class BoundaryClassification:
    """One row of the origin-behaviour table together with its parity extensions."""
    s: float
    psi_at_origin: OriginValue
    dpsi_at_origin: OriginDerivative
    allowed_parities: FrozenSet[Parity]
    degeneracy: Degeneracy
    table_row: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            'table_row': self.table_row,
            's': self.s,
            'psi_at_origin': self.psi_at_origin.value,
            'dpsi_at_origin': self.dpsi_at_origin.value,
            'allowed_parities': [p.label for p in sorted(self.allowed_parities, reverse=True)],
            'degeneracy': self.degeneracy.value,
        }


@dataclass
class SampledFunction:
    """Function samples on an increasing zeta grid."""
    zeta: np.ndarray
    values: np.ndarray = field(repr=False)


def critical_coupling() -> float:
    """Critical inverse-square coupling g2c = -1/8 (alpha_c = -hbar^2/(8m))."""
    return CRITICAL_COUPLING


def is_subcritical(g: float) -> bool:
    return g > CRITICAL_COUPLING


def hermiticity_admissible(s: float) -> bool:
    """Potential-energy operator stays Hermitian only for Re s > 1/2."""
    return s > 0.5


def wronskian_integrable(s: float) -> bool:
    """psi'' terms near the origin behave as s(s-1)|x|^(2s-2): integrable for s = 0 or s > 1/2."""
    return s == 0 or s > 0.5


def indicial_roots(spec: PotentialSpec, impenetrable_wall: bool = False) -> IndicialSolution:
    """
    Solve the indicial equation at the origin and keep the admissible exponents.

    Args:
        spec: Potential whose dominant singularity is analysed.
        impenetrable_wall: Half-line bounded by an infinite barrier on the
            complementary half-line; continuity then bans the s = 0 branch.

    Returns:
        IndicialSolution with s+ and s- and the retained exponents.

    Raises:
        SupercriticalCouplingError: beta = 2 and g <= -1/8 (double or complex root).
    """
    if spec.beta == 2:
        discriminant = 1.0 + 8.0 * spec.g
        if discriminant <= 0.0:
            raise SupercriticalCouplingError(spec.g, CRITICAL_COUPLING)
        root = math.sqrt(discriminant)
        s_plus = 0.5 * (1.0 + root)
        s_minus = 0.5 * (1.0 - root)
        admissible = tuple(s for s in (s_plus, s_minus) if hermiticity_admissible(s))
        return IndicialSolution(s_plus, s_minus, admissible)

    admissible = (1.0,) if spec.beta >= 1 else (0.0, 1.0)
    if impenetrable_wall:
        admissible = tuple(s for s in admissible if s != 0.0)
    return IndicialSolution(1.0, 0.0, admissible)


def origin_behavior(s: float) -> Tuple[OriginValue, OriginDerivative]:
    """psi(0+) and psi'(0+) for psi ~ zeta^s."""
    if s == 0:
        # finite value; the derivative is tabulated as vanishing
        return OriginValue.FINITE, OriginDerivative.ZERO
    if s > 1:
        return OriginValue.ZERO, OriginDerivative.ZERO
    if s == 1:
        return OriginValue.ZERO, OriginDerivative.FINITE
    return OriginValue.ZERO, OriginDerivative.INFINITE


def required_derivative_jump(spec: PotentialSpec) -> OriginDerivative:
    """
    Jump psi'(0+) - psi'(0-) demanded by integrating the equation across the
    origin (principal value) for an even eigenfunction.
    """
    if spec.beta == 2 and spec.g < 0:
        return OriginDerivative.INFINITE
    return OriginDerivative.ZERO


def extension_allowed(psi_at_origin: OriginValue, dpsi_at_origin: OriginDerivative,
                      parity: Parity, required_jump: OriginDerivative) -> bool:
    """
    Whether a half-line solution admits the given mirror extension.

    Odd mirrors need continuity (psi(0+) = 0) and always have a continuous
    derivative. Even mirrors are continuous and jump by 2 psi'(0+), which must
    equal the jump the connection condition requires.
    """
    if parity is Parity.ODD:
        return psi_at_origin is OriginValue.ZERO
    return dpsi_at_origin is required_jump


def _table_row(spec: PotentialSpec, s: float) -> str:
    if spec.beta == 2:
        return "beta=2, g>0" if spec.g > 0 else "beta=2, g<0"
    if spec.beta >= 1:
        return "1<=beta<2"
    return f"beta<1, s={int(s)}"


def classify_boundary(spec: PotentialSpec, s: Optional[float] = None) -> BoundaryClassification:
    """
    Classify the origin behaviour and the allowed whole-line extensions.

    Args:
        spec: Potential specification.
        s: Origin exponent branch. Required for beta < 1 (0 or 1); otherwise the
           single admissible exponent is used.

    Returns:
        BoundaryClassification reproducing one row of each table.

    Raises:
        SupercriticalCouplingError: beta = 2 with g <= -1/8.
        ValueError: missing or non-admissible branch.
    """
    solution = indicial_roots(spec)
    if s is None:
        if len(solution.admissible_s) > 1:
            raise ValueError(f"beta={spec.beta} admits branches s={list(solution.admissible_s)}; pass s explicitly")
        s = solution.admissible_s[0]
    elif s not in solution.admissible_s:
        raise ValueError(f"s={s} is not admissible for beta={spec.beta}; admissible: {list(solution.admissible_s)}")

    # odd needs psi(0) = 0, even needs psi'(0+) to match the required jump
    psi0, dpsi0 = origin_behavior(s)
    jump = required_derivative_jump(spec)
    parities = frozenset(p for p in Parity if extension_allowed(psi0, dpsi0, p, jump))
    degeneracy = Degeneracy.DOUBLE if len(parities) == 2 else Degeneracy.NONDEGENERATE
    logger.debug(f"beta={spec.beta}, g={spec.g}, s={s}: parities {sorted(p.label for p in parities)}")

    return BoundaryClassification(
        s=s,
        psi_at_origin=psi0,
        dpsi_at_origin=dpsi0,
        allowed_parities=parities,
        degeneracy=degeneracy,
        table_row=_table_row(spec, s),
    )


def classify_all(spec: PotentialSpec) -> List[BoundaryClassification]:
    """One classification per admissible origin exponent."""
    return [classify_boundary(spec, s) for s in indicial_roots(spec).admissible_s]


def extend_to_full_line(halfline: SampledFunction, parity: int,
                        classification: Optional[BoundaryClassification] = None,
                        rel_tol: float = 1e-12) -> SampledFunction:
    """
    Mirror half-line samples to the whole line: psi_p(x) = [theta(x) + p theta(-x)] psi(|x|).

    Args:
        halfline: Samples on zeta >= 0, starting at zeta = 0.
        parity: +1 (even) or -1 (odd).
        classification: When given, the parity must be one it allows.
        rel_tol: |psi(0)| above rel_tol * max|psi| counts as non-zero.

    Returns:
        SampledFunction on [-zeta_max, zeta_max]; an odd extension is exactly 0
        at the origin.

    Raises:
        ParityNotAllowedError: parity forbidden by the classification, or an odd
            extension of a function that does not vanish at the origin.
    """
    parity = Parity(parity)
    zeta = np.asarray(halfline.zeta, dtype=float)
    values = np.asarray(halfline.values, dtype=float)
    if zeta.shape != values.shape or zeta.ndim != 1:
        raise ValueError("zeta and values must be 1-D arrays of equal length")
    if zeta[0] != 0.0 or np.any(np.diff(zeta) <= 0):
        raise ValueError("half-line samples must start at zeta=0 and increase")

    if classification is not None and parity not in classification.allowed_parities:
        raise ParityNotAllowedError(
            f"{parity.label} extension is not allowed for {classification.table_row}"
        )

    scale = np.max(np.abs(values))
    if parity is Parity.ODD and abs(values[0]) > rel_tol * scale:
        raise ParityNotAllowedError(
            f"odd extension of a function with psi(0)={values[0]!r} is discontinuous at the origin"
        )

    # mirror without repeating zeta = 0
    full_zeta = np.concatenate([-zeta[:0:-1], zeta])
    full_values = np.concatenate([int(parity) * values[:0:-1], values])
    if parity is Parity.ODD:
        full_values[len(zeta) - 1] = 0.0
    return SampledFunction(full_zeta, full_values)


def effective_coupling_3d(g2: float, l: int) -> float:
    """Inverse-square coupling of the radial problem u = r R(r): g2 + l(l+1)/2."""
    if int(l) != l or l < 0:
        raise ValueError(f"orbital quantum number must be a nonnegative integer, got {l}")
    return g2 + l * (l + 1) / 2
