#!/usr/bin/env python3
"""
Special-function kernel for the bound-state analysis.
Log-gamma with sign tracking, the Kummer function M(a, b, y) by direct series
summation, and generalized Laguerre polynomials by the three-term recurrence.
"""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np
from scipy.special import gammaln, gammasgn

from src.errors import GammaPoleError, SeriesConvergenceError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Stopping rule for the Kummer series: |term| < SERIES_RTOL * |sum| on
# SERIES_STREAK consecutive terms, at most SERIES_MAX_TERMS terms.
SERIES_RTOL = 1e-16
SERIES_STREAK = 3
SERIES_MAX_TERMS = 10_000
# log_abs_laguerre rescales the recurrence pair past this magnitude.
LOG_RESCALE_THRESHOLD = 1e150


class LogGamma(NamedTuple):
    """ln|Gamma(z)| together with the sign of Gamma(z)."""
    value: float
    sign: int


def is_nonpositive_integer(z: float) -> bool:
    return z <= 0 and float(z).is_integer()


@dataclass(frozen=True)
class KummerParams:
    """Arguments of M(a, b, y)."""
    a: float
    b: float
    y: float

    def __post_init__(self):
        if is_nonpositive_integer(self.b):
            raise GammaPoleError(self.b)
        if self.y < 0:
            raise ValueError(f"Kummer argument must be nonnegative, got y={self.y}")


@dataclass(frozen=True, eq=False)
class LaguerreParams:
    """Degree, superscript and argument(s) of L_n^(alpha)(y)."""
    n: int
    alpha: float
    y: ArrayLike

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"Laguerre degree must be a nonnegative integer, got n={self.n}")
        if self.alpha <= -1:
            raise ValueError(f"Laguerre parameter must satisfy alpha > -1, got alpha={self.alpha}")
        if np.any(np.asarray(self.y) < 0):
            raise ValueError("Laguerre argument must be nonnegative")


def log_gamma(z: float) -> LogGamma:
    """
    Logarithm of |Gamma(z)| with the sign of Gamma(z).

    Args:
        z: Real argument; negative non-integers are handled by reflection
           inside scipy's gammaln.

    Returns:
        LogGamma(value, sign)

    Raises:
        GammaPoleError: if z is 0 or a negative integer.
    """
    if is_nonpositive_integer(z):
        raise GammaPoleError(z)
    return LogGamma(float(gammaln(z)), int(gammasgn(z)))


def binomial(x: float, n: int) -> float:
    """Generalized binomial coefficient C(x, n) for integer n >= 0."""
    return math.prod((x - n + k) / k for k in range(1, n + 1))


def kummer_m(p: KummerParams) -> float:
    """
    Confluent hypergeometric function M(a, b, y) by direct summation.

    Terms follow t_{j+1} = t_j (a + j) / (b + j) * y / (j + 1). For a = -n the
    series has exactly n + 1 terms and no tolerance is involved.

    Args:
        p: Series parameters.

    Returns:
        M(a, b, y)

    Raises:
        SeriesConvergenceError: if the stopping rule is not met within
            SERIES_MAX_TERMS terms.
    """
    a, b, y = p.a, p.b, p.y
    total = 1.0
    term = 1.0

    # a = -n: polynomial, exactly n + 1 terms
    if is_nonpositive_integer(a):
        for j in range(int(-a)):
            term *= (a + j) / (b + j) * y / (j + 1)
            total += term
        return total

    streak = 0
    for j in range(SERIES_MAX_TERMS):
        term *= (a + j) / (b + j) * y / (j + 1)
        total += term
        if abs(term) < SERIES_RTOL * abs(total):
            streak += 1
            if streak == SERIES_STREAK:
                return total
        else:
            streak = 0

    logger.warning(f"Kummer series for a={a}, b={b}, y={y} hit the iteration cap")
    raise SeriesConvergenceError(SERIES_MAX_TERMS, term)


def laguerre(p: LaguerreParams) -> ArrayLike:
    """
    Generalized Laguerre polynomial L_n^(alpha)(y) by upward recurrence in n.

    Args:
        p: Degree, parameter and argument; y may be a numpy array.

    Returns:
        A float for scalar y, otherwise an array shaped like y.
    """
    y = np.asarray(p.y, dtype=float)
    prev = np.ones_like(y)
    if p.n == 0:
        return prev.item() if prev.ndim == 0 else prev

    curr = 1.0 + p.alpha - y
    for k in range(1, p.n):
        prev, curr = curr, ((2 * k + 1 + p.alpha - y) * curr - (k + p.alpha) * prev) / (k + 1)
    return curr.item() if curr.ndim == 0 else curr


def log_abs_laguerre(p: LaguerreParams) -> np.ndarray:
    """
    ln|L_n^(alpha)(y)| by the same recurrence, rescaled so that high degrees
    at large y do not overflow. Zeros of the polynomial give -inf.
    """
    y = np.atleast_1d(np.asarray(p.y, dtype=float))
    log_scale = np.zeros_like(y)
    prev = np.ones_like(y)
    if p.n == 0:
        return log_scale

    curr = 1.0 + p.alpha - y
    for k in range(1, p.n):
        prev, curr = curr, ((2 * k + 1 + p.alpha - y) * curr - (k + p.alpha) * prev) / (k + 1)
        big = np.abs(curr) > LOG_RESCALE_THRESHOLD
        if np.any(big):
            # both terms of the pair share the factor
            prev = np.where(big, prev / LOG_RESCALE_THRESHOLD, prev)
            curr = np.where(big, curr / LOG_RESCALE_THRESHOLD, curr)
            log_scale = log_scale + np.where(big, math.log(LOG_RESCALE_THRESHOLD), 0.0)

    with np.errstate(divide='ignore'):
        return np.log(np.abs(curr)) + log_scale


def kummer_asymptotic_dominant(p: KummerParams, terms: int = 1) -> float:
    """
    Growing branch of the large-y expansion of M(a, b, y):
    Gamma(b)/Gamma(a) e^y y^(a-b) * sum_k (1-a)_k (b-a)_k / (k! y^k).

    With terms=1 only the dominant term is returned. The magnitude is formed
    in the log domain so that e^y does not overflow before the gamma ratio.

    Raises:
        GammaPoleError: for a in {0, -1, -2, ...}, where M is a polynomial and
            the growing branch is absent.
    """
    if terms < 1:
        raise ValueError(f"terms must be at least 1, got {terms}")
    a, b, y = p.a, p.b, p.y
    if is_nonpositive_integer(a):
        raise GammaPoleError(a)
    if y <= 0:
        raise ValueError("asymptotic form needs y > 0")

    lg_a = log_gamma(a)
    lg_b = log_gamma(b)
    log_magnitude = lg_b.value - lg_a.value + y + (a - b) * math.log(y)

    series = 0.0
    coeff = 1.0
    for k in range(terms):
        series += coeff
        coeff *= (1 - a + k) * (b - a + k) / ((k + 1) * y)

    return lg_a.sign * lg_b.sign * math.exp(log_magnitude) * series


def count_sign_changes(values: np.ndarray, rel_tol: float = 1e-10) -> int:
    """Number of sign changes, skipping samples below rel_tol * max|values|."""
    v = np.asarray(values, dtype=float)
    scale = np.max(np.abs(v)) if v.size else 0.0
    if scale == 0.0:
        return 0
    significant = v[np.abs(v) > rel_tol * scale]
    return int(np.count_nonzero(np.signbit(significant[1:]) != np.signbit(significant[:-1])))
