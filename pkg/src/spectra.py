#!/usr/bin/env python3
"""
Closed-form bound states for V = g1/zeta (1D hydrogen) and
V = g1/zeta + g2/zeta^2 (Kratzer), plus the no-bound-state verdicts.

Energies are in units of mc^2 and lengths in Compton wavelengths, so the
radial equation reads psi'' - (kappa^2 + 2 g1/zeta + 2 g2/zeta^2) psi = 0.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.integrate import simpson
from scipy.special import logsumexp, roots_genlaguerre

from src.analysis import (
    Parity,
    PotentialSpec,
    classify_boundary,
    effective_coupling_3d,
    indicial_roots,
    is_subcritical,
)
from src.errors import DegenerateProblemError, QuadratureError, SupercriticalCouplingError
from src.specfun import LaguerreParams, laguerre, log_abs_laguerre, log_gamma

logger = logging.getLogger(__name__)

GAUSS_LAGUERRE_NODES = 200
# Agreement required between the full and half-size quadrature rules.
QUADRATURE_RTOL = 1e-11
# Outer end of the truncated domain, in units of 1/kappa.
TRUNCATION_DECAY_LENGTHS = 40.0

ArrayLike = Union[float, np.ndarray]


class NormalizationDomain(str, Enum):
    HALF_LINE = "half_line"
    FULL_LINE = "full_line"


class Verdict(str, Enum):
    BOUND_STATES = "bound states"
    NO_BOUND_STATES = "no bound states"


@dataclass(frozen=True)
class BoundState:
    """
    One bound level of the half-line (or parity-extended) problem.

    Attributes:
        n: Quantum number, equal to the number of interior nodes.
        s: Origin exponent, psi ~ zeta^s.
        energy: E_n = -kappa^2 / 2 < 0.
        kappa: Decay rate |g1| / (n + s).
        norm_const: N_n; None until normalize() fills it.
        parity: +1/-1 for whole-line states, None on the half-line.
        domain: Domain on which norm_const normalizes psi.
    """
    n: int
    s: float
    energy: float
    kappa: float
    norm_const: Optional[float] = None
    parity: Optional[Parity] = None
    domain: NormalizationDomain = NormalizationDomain.HALF_LINE

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'energy': self.energy,
            's': self.s,
            'kappa': self.kappa,
            'norm_const': self.norm_const,
            'parity': self.parity.label if self.parity is not None else None,
            'domain': self.domain.value,
        }


@dataclass
class SpectrumRequest:
    """Couplings and level range for a spectrum computation."""
    g1: float
    g2: float = 0.0
    n_max: int = 0
    normalization_domain: NormalizationDomain = NormalizationDomain.HALF_LINE

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise ValueError(f"n_max must be a nonnegative integer, got {self.n_max}")
        self.normalization_domain = NormalizationDomain(self.normalization_domain)


@dataclass(frozen=True)
class SpectrumVerdict:
    verdict: Verdict
    reason: str


@dataclass
class SpectrumResult:
    """States returned for a request, with the verdict that explains an empty list."""
    request: SpectrumRequest
    states: List[BoundState] = field(default_factory=list)
    verdict: SpectrumVerdict = SpectrumVerdict(Verdict.BOUND_STATES, "")

    def to_frame(self) -> pd.DataFrame:
        """Table with columns n, energy, s, kappa."""
        rows = [(st.n, st.energy, st.s, st.kappa) for st in self.states]
        frame = pd.DataFrame(rows, columns=['n', 'energy', 's', 'kappa'])
        return frame.astype({'n': 'int64', 'energy': 'float64', 's': 'float64', 'kappa': 'float64'})


def origin_exponent(g2: float) -> float:
    """
    Admissible origin exponent s for the Kratzer family.

    Raises:
        SupercriticalCouplingError: g2 <= -1/8.
    """
    if g2 == 0:
        return 1.0
    return indicial_roots(PotentialSpec(beta=2.0, g=g2)).s_plus


def dominant_potential(g1: float, g2: float) -> PotentialSpec:
    """PotentialSpec whose dominant singularity governs the origin (beta=2 if g2 != 0)."""
    if g2 != 0:
        return PotentialSpec(beta=2.0, g=g2, g1=g1 if g1 != 0 else None)
    return PotentialSpec(beta=1.0, g=g1)


def _levels(g1: float, s: float, n_max: int) -> List[BoundState]:
    states = []
    for n in range(n_max + 1):
        kappa = abs(g1) / (n + s)
        energy = -g1 ** 2 / (2 * (n + s) ** 2)
        states.append(BoundState(n=n, s=s, energy=energy, kappa=kappa))
    return states


def _validate_n_max(n_max: int) -> None:
    if int(n_max) != n_max or n_max < 0:
        raise ValueError(f"n_max must be a nonnegative integer, got {n_max}")


def hydrogen_spectrum(g1: float, n_max: int,
                      domain: NormalizationDomain = NormalizationDomain.HALF_LINE) -> List[BoundState]:
    """
    Levels of V = g1/zeta: E_n = -g1^2 / (2 (n+1)^2), s = 1.

    Args:
        g1: Coulomb coupling; only g1 < 0 binds.
        n_max: Highest quantum number returned.
        domain: Normalization domain of the returned states.

    Returns:
        Normalized states n = 0..n_max, or [] when g1 >= 0.
    """
    _validate_n_max(n_max)
    if g1 >= 0:
        logger.info(f"g1={g1} is not attractive: no bound states")
        return []
    return [normalize(st, g1, 0.0, domain) for st in _levels(g1, 1.0, n_max)]


def kratzer_spectrum(g1: float, g2: float, n_max: int,
                     domain: NormalizationDomain = NormalizationDomain.HALF_LINE) -> List[BoundState]:
    """
    Levels of V = g1/zeta + g2/zeta^2: E_n = -g1^2 / (2 (n+s)^2) with
    s = (1 + sqrt(1 + 8 g2)) / 2.

    Args:
        g1: Coulomb coupling, non-zero; only g1 < 0 binds.
        g2: Inverse-square coupling, g2 > -1/8.
        n_max: Highest quantum number returned.
        domain: Normalization domain of the returned states.

    Returns:
        Normalized states, or [] when g1 > 0. At g2 = 0 the result equals
        hydrogen_spectrum exactly.

    Raises:
        SupercriticalCouplingError: g2 <= -1/8.
        DegenerateProblemError: g1 = 0 (see pure_inverse_square_verdict).
    """
    _validate_n_max(n_max)
    if g1 == 0:
        raise DegenerateProblemError(
            "g1=0 leaves a pure inverse-square potential; use pure_inverse_square_verdict"
        )
    s = origin_exponent(g2)
    if g1 > 0:
        logger.info(f"g1={g1} is repulsive: no bound states")
        return []
    return [normalize(st, g1, g2, domain) for st in _levels(g1, s, n_max)]


def pure_inverse_square_verdict(g2: float) -> SpectrumVerdict:
    """V = g2/zeta^2 never binds: s > 1/2 cannot equal -n, and g2 <= -1/8 is excluded."""
    if is_subcritical(g2):
        reason = f"quantization condition -n = s has no solution for s > 1/2 (g2={g2})"
    else:
        reason = f"g2={g2} is at or below the critical coupling; excluded by Hermiticity"
    return SpectrumVerdict(Verdict.NO_BOUND_STATES, reason)


def _check_state(state: BoundState, g1: float, g2: float) -> None:
    s = origin_exponent(g2)
    kappa = abs(g1) / (state.n + s)
    if not (math.isclose(state.s, s, rel_tol=1e-12) and math.isclose(state.kappa, kappa, rel_tol=1e-12)):
        raise ValueError(
            f"state (n={state.n}, s={state.s}, kappa={state.kappa}) does not belong to g1={g1}, g2={g2}"
        )


def eigenfunction(state: BoundState, g1: float, g2: float, zeta: ArrayLike) -> ArrayLike:
    """
    psi_n(zeta) = N_n zeta^s exp(-kappa zeta) L_n^(2s-1)(2 kappa zeta).

    Negative zeta is accepted for parity-extended states only. An
    unnormalized state is evaluated with N_n = 1.
    """
    _check_state(state, g1, g2)
    z = np.asarray(zeta, dtype=float)
    if state.parity is None and np.any(z < 0):
        raise ValueError("negative zeta needs a parity-extended state")

    r = np.abs(z)
    norm = state.norm_const if state.norm_const is not None else 1.0
    poly = laguerre(LaguerreParams(state.n, 2 * state.s - 1, 2 * state.kappa * r))
    psi = norm * r ** state.s * np.exp(-state.kappa * r) * poly
    # odd states flip sign on the negative half-line
    if state.parity is not None:
        psi = np.where(z < 0, int(state.parity) * psi, psi)
    return psi.item() if np.ndim(psi) == 0 else psi


def density(state: BoundState, g1: float, g2: float, zeta: ArrayLike) -> ArrayLike:
    """Probability density rho = |psi|^2."""
    return np.square(eigenfunction(state, g1, g2, zeta))


@lru_cache(maxsize=64)
def _gauss_laguerre_log_rule(nodes: int, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and log-weights of the rule for u^alpha e^(-u).

    The largest nodes carry weights below the smallest double once N is a
    few hundred, so the weights are rebuilt in the log domain from
    w_i = Gamma(N+alpha+1) u_i / (N! (N+1)^2 L_{N+1}(u_i)^2).
    """
    u, _ = roots_genlaguerre(nodes, alpha)
    log_w = (log_gamma(nodes + alpha + 1).value - log_gamma(nodes + 1).value
             - 2.0 * math.log(nodes + 1) + np.log(u)
             - 2.0 * log_abs_laguerre(LaguerreParams(nodes + 1, alpha, u)))
    # weights sum to Gamma(alpha + 1)
    log_w += log_gamma(alpha + 1).value - logsumexp(log_w)
    return u, log_w


def _weighted_laguerre_integral(n: int, s: float, nodes: int) -> float:
    # integral of u^(2s) e^(-u) [L_n^(2s-1)(u)]^2 du
    u, log_w = _gauss_laguerre_log_rule(nodes, 2 * s)
    log_terms = log_w + 2.0 * log_abs_laguerre(LaguerreParams(n, 2 * s - 1, u))
    return float(np.exp(logsumexp(log_terms)))


def _domain_factor(domain: NormalizationDomain) -> float:
    return 2.0 if NormalizationDomain(domain) is NormalizationDomain.FULL_LINE else 1.0


def normalize(state: BoundState, g1: float, g2: float,
              domain: NormalizationDomain = NormalizationDomain.HALF_LINE,
              nodes: Optional[int] = None) -> BoundState:
    """
    Fill norm_const so that the integral of |psi|^2 over the domain is 1.

    With u = 2 kappa zeta the integrand is u^(2s) e^(-u) times a squared
    polynomial of degree 2n, so Gauss-Laguerre with the generalized weight is
    exact once nodes > n. The result is compared with a half-size rule.

    Args:
        state: State to normalize (any previous norm_const is ignored).
        g1, g2: Couplings the state belongs to.
        domain: half_line (integral over zeta >= 0) or full_line (both halves).
        nodes: Quadrature order; defaults to 200, or 2(n+1) for higher levels.

    Returns:
        A copy of the state with norm_const and domain set.

    Raises:
        QuadratureError: order too low for the degree, or the two rules disagree.
    """
    _check_state(state, g1, g2)
    domain = NormalizationDomain(domain)
    if nodes is None:
        nodes = max(GAUSS_LAGUERRE_NODES, 2 * (state.n + 1))
    if nodes <= state.n:
        raise QuadratureError(f"{nodes} nodes cannot integrate degree {2 * state.n} exactly")

    # both rules are exact for degree 2n, so they agree up to rounding
    integral = _weighted_laguerre_integral(state.n, state.s, nodes)
    check = _weighted_laguerre_integral(state.n, state.s, max(state.n + 1, nodes // 2))
    if not np.isfinite(integral) or integral <= 0:
        raise QuadratureError(f"normalization integral is not positive: {integral!r}")
    if abs(integral - check) > QUADRATURE_RTOL * integral:
        raise QuadratureError(f"quadrature not converged: {integral!r} vs {check!r}")

    # undo u = 2 kappa zeta
    total = _domain_factor(domain) * integral / (2 * state.kappa) ** (2 * state.s + 1)
    return replace(state, norm_const=1.0 / math.sqrt(total), domain=domain)


def analytic_norm_const(state: BoundState,
                        domain: NormalizationDomain = NormalizationDomain.HALF_LINE) -> float:
    """Closed-form N_n from the integral Gamma(n+2s)(2n+2s)/n! of the weighted Laguerre square."""
    n, s = state.n, state.s
    integral = math.exp(log_gamma(n + 2 * s).value - log_gamma(n + 1).value) * (2 * n + 2 * s)
    total = _domain_factor(domain) * integral / (2 * state.kappa) ** (2 * s + 1)
    return 1.0 / math.sqrt(total)


def simpson_norm(state: BoundState, g1: float, g2: float, num_points: int = 100_001) -> float:
    """Composite Simpson value of the integral of |psi|^2 over [0, 40/kappa]."""
    zeta = np.linspace(0.0, TRUNCATION_DECAY_LENGTHS / state.kappa, num_points)
    return float(simpson(density(state, g1, g2, zeta), x=zeta))


def schrodinger_residual(state: BoundState, g1: float, g2: float, zeta: ArrayLike,
                         step: Optional[float] = None) -> np.ndarray:
    """psi'' - (kappa^2 + 2 g1/zeta + 2 g2/zeta^2) psi with a central-difference psi''."""
    z = np.asarray(zeta, dtype=float)
    h = step if step is not None else 1e-4 / state.kappa
    if np.any(z <= h):
        raise ValueError("residual samples must lie farther than one step from the origin")
    psi = eigenfunction(state, g1, g2, z)
    psi_pp = (eigenfunction(state, g1, g2, z + h) - 2 * psi + eigenfunction(state, g1, g2, z - h)) / h ** 2
    return psi_pp - (state.kappa ** 2 + 2 * g1 / z + 2 * g2 / z ** 2) * psi


def full_line_states(states: List[BoundState], g1: float, g2: float) -> List[BoundState]:
    """
    Parity extensions allowed at the origin, normalized on the whole line.

    Two states share each energy when the inverse-square term dominates
    (g2 != 0); with g2 = 0 only the odd extension survives.
    """
    classification = classify_boundary(dominant_potential(g1, g2))
    parities = sorted(classification.allowed_parities, reverse=True)
    extended = []
    for st in states:
        for parity in parities:
            st_p = normalize(replace(st, parity=parity), g1, g2, NormalizationDomain.FULL_LINE)
            extended.append(st_p)
    return extended


def spectrum(request: SpectrumRequest) -> SpectrumResult:
    """
    Route a request to the matching closed form.

    g1 = 0 goes to pure_inverse_square_verdict, g2 = 0 to hydrogen_spectrum,
    anything else to kratzer_spectrum.

    Raises:
        SupercriticalCouplingError: g2 <= -1/8.
    """
    g1, g2 = request.g1, request.g2
    # supercritical wins over the no-bound-state verdict
    if g2 != 0 and not is_subcritical(g2):
        raise SupercriticalCouplingError(g2)

    if g1 == 0:
        return SpectrumResult(request, [], pure_inverse_square_verdict(g2))

    if g2 == 0:
        states = hydrogen_spectrum(g1, request.n_max, request.normalization_domain)
    else:
        states = kratzer_spectrum(g1, g2, request.n_max, request.normalization_domain)

    if not states:
        return SpectrumResult(request, [], SpectrumVerdict(Verdict.NO_BOUND_STATES,
                                                           f"Coulomb term g1={g1} is repulsive"))
    return SpectrumResult(request, states, SpectrumVerdict(Verdict.BOUND_STATES,
                                                           f"{len(states)} levels, s={states[0].s}"))


def radial_spectrum_3d(g1: float, g2: float, l: int, n_max: int) -> List[BoundState]:
    """
    Radial levels of the three-dimensional problem for u(r) = r R(r).

    The centrifugal term adds l(l+1)/2 to the inverse-square coupling; with
    g2 = 0 the levels are -g1^2 / (2 (n + l + 1)^2).
    """
    g_eff = effective_coupling_3d(g2, l)
    if g1 == 0:
        return []
    if g_eff == 0:
        return hydrogen_spectrum(g1, n_max)
    return kratzer_spectrum(g1, g_eff, n_max)
