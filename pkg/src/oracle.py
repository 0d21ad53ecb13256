#!/usr/bin/env python3
"""
Finite-difference oracle for the half-line bound-state problem.

Discretizes H = -1/2 d^2/dzeta^2 + V(zeta) on a uniform grid between an inner
cutoff zeta_min and an outer cutoff zeta_max and extracts the lowest
eigenpairs of the resulting symmetric tridiagonal matrix by Sturm-sequence
bisection plus inverse iteration.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from scipy.linalg import LinAlgError, eigh_tridiagonal

from src.analysis import PotentialSpec, indicial_roots, is_subcritical
from src.errors import EigensolverError, GridMismatchError
from src.specfun import count_sign_changes

logger = logging.getLogger(__name__)

DEFAULT_NUM_POINTS = 20_000
FALL_TO_CENTER_RTOL = 1e-3
MIN_EIGENVALUE_GAP = 1e-10


class InnerBoundary(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


@dataclass
class GridConfig:
    """
    Uniform grid and solver options.

    Attributes:
        zeta_min: Inner cutoff (> 0).
        zeta_max: Outer cutoff; Dirichlet is always imposed there.
        num_points: Grid nodes including both cutoffs (>= 100).
        num_eigenvalues: How many of the lowest eigenpairs to extract.
        inner_boundary: Dirichlet psi=0 at zeta_min, or the Neumann variant
            psi'=0 for the s=0 branch of weak singularities.
        exact_inverse_square: For subcritical beta=2 couplings, discretize the
            inverse-square term so that (zeta - zeta_min)^s is an exact zero
            mode of the stencil.
        check_inner_cutoff: Re-solve with zeta_min and h halved and flag a
            relative shift of the ground energy above 1e-3.
    """
    zeta_min: float
    zeta_max: float
    num_points: int = DEFAULT_NUM_POINTS
    num_eigenvalues: int = 1
    inner_boundary: InnerBoundary = InnerBoundary.DIRICHLET
    exact_inverse_square: bool = True
    check_inner_cutoff: bool = True

    def __post_init__(self):
        if not 0 < self.zeta_min < self.zeta_max:
            raise ValueError(f"need 0 < zeta_min < zeta_max, got {self.zeta_min}, {self.zeta_max}")
        if int(self.num_points) != self.num_points or self.num_points < 100:
            raise ValueError(f"num_points must be an integer >= 100, got {self.num_points}")
        if int(self.num_eigenvalues) != self.num_eigenvalues or self.num_eigenvalues < 1:
            raise ValueError(f"num_eigenvalues must be a positive integer, got {self.num_eigenvalues}")
        if self.num_eigenvalues > self.num_points - 2:
            raise ValueError(f"cannot extract {self.num_eigenvalues} eigenvalues from {self.num_points - 2} unknowns")
        self.inner_boundary = InnerBoundary(self.inner_boundary)

    @property
    def spacing(self) -> float:
        return (self.zeta_max - self.zeta_min) / (self.num_points - 1)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.zeta_min, self.zeta_max, self.num_points)

    def refined(self, halve_cutoff: bool = False) -> 'GridConfig':
        """Same domain with h halved; optionally zeta_min halved as well."""
        zeta_min = self.zeta_min / 2 if halve_cutoff else self.zeta_min
        return replace(self, zeta_min=zeta_min, num_points=2 * (self.num_points - 1) + 1)


@dataclass
class GridSpectrum:
    """
    Lowest eigenpairs of the discretized Hamiltonian.

    vectors has shape (num_eigenvalues, num_points); boundary entries are the
    imposed values and each row has unit trapezoidal norm.
    """
    energies: np.ndarray
    vectors: np.ndarray = field(repr=False)
    zeta: np.ndarray = field(repr=False)
    config: GridConfig
    fall_to_center: bool = False
    cutoff_shift: Optional[float] = None


@dataclass
class ConvergenceStudy:
    table: pd.DataFrame
    extrapolated_energy: float
    observed_order: float
    converged: bool


@dataclass
class CutoffStudy:
    table: pd.DataFrame
    falls_to_center: bool


def _kappa_estimates(potential: PotentialSpec, num_eigenvalues: int):
    c = potential.coulomb_coupling
    if c < 0:
        if potential.beta == 2 and not is_subcritical(potential.g):
            s = 0.5
        else:
            s = indicial_roots(potential).s_plus
        return abs(c) / s, abs(c) / (num_eigenvalues - 1 + s)
    if potential.beta < 2 and potential.g != 0:
        kappa = abs(potential.g) ** (1.0 / (2.0 - potential.beta))
        return kappa, kappa
    return 1.0, 1.0


def default_grid_config(potential: PotentialSpec, num_eigenvalues: int = 1, **overrides) -> GridConfig:
    """
    Grid sized from decay-rate estimates of the requested levels.

    zeta_min = 1e-6 / kappa_0 and zeta_max = 40 / kappa_shallow, where the
    kappas come from the Coulomb levels |c|/(n+s) when the 1/zeta term binds
    and from the scale |g|^(1/(2-beta)) otherwise.
    """
    kappa_0, kappa_shallow = _kappa_estimates(potential, num_eigenvalues)
    params = dict(
        zeta_min=1e-6 / kappa_0,
        zeta_max=40.0 / kappa_shallow,
        num_points=DEFAULT_NUM_POINTS,
        num_eigenvalues=num_eigenvalues,
    )
    params.update(overrides)
    return GridConfig(**params)


def _uses_exact_inverse_square(potential: PotentialSpec, config: GridConfig) -> bool:
    return (config.exact_inverse_square
            and config.inner_boundary is InnerBoundary.DIRICHLET
            and potential.beta == 2
            and is_subcritical(potential.g))


def _potential_on_nodes(potential: PotentialSpec, config: GridConfig, nodes: np.ndarray) -> np.ndarray:
    zeta = config.zeta_min + nodes * config.spacing
    if not _uses_exact_inverse_square(potential, config):
        return potential.value(zeta)

    s = indicial_roots(potential).s_plus
    j = nodes.astype(float)
    inverse_square = 0.5 * (((j + 1) / j) ** s + ((j - 1) / j) ** s - 2.0) / config.spacing ** 2
    coulomb = potential.g1 / zeta if potential.g1 else 0.0
    return inverse_square + coulomb


def _solve(potential: PotentialSpec, config: GridConfig) -> GridSpectrum:
    h = config.spacing
    n = config.num_points
    # unknowns: interior nodes, plus node 0 for the Neumann variant
    first = 0 if config.inner_boundary is InnerBoundary.NEUMANN else 1
    nodes = np.arange(first, n - 1)

    diag = 1.0 / h ** 2 + _potential_on_nodes(potential, config, nodes)
    if config.inner_boundary is InnerBoundary.NEUMANN:
        # ghost node psi_{-1} = psi_0
        diag[0] -= 0.5 / h ** 2
    off = np.full(len(nodes) - 1, -0.5 / h ** 2)

    k = config.num_eigenvalues
    try:
        energies, interior = eigh_tridiagonal(
            diag, off, select='i', select_range=(0, k - 1), lapack_driver='stebz'
        )
    except LinAlgError as e:
        raise EigensolverError(f"tridiagonal eigensolver failed on {n} points: {e}") from e

    # pad back to the full grid with zeros at the Dirichlet ends
    zeta = config.grid
    vectors = np.zeros((k, n))
    vectors[:, first:n - 1] = interior.T
    for row in vectors:
        row /= math.sqrt(trapezoid(row ** 2, x=zeta))
        # sign convention: first significant value positive
        scale = np.max(np.abs(row))
        first_significant = row[np.argmax(np.abs(row) > 1e-8 * scale)]
        if first_significant < 0:
            row *= -1.0

    return GridSpectrum(energies=np.asarray(energies), vectors=vectors, zeta=zeta, config=config)


def solve_grid(potential: PotentialSpec, config: GridConfig) -> GridSpectrum:
    """
    Lowest eigenpairs of -1/2 D2 + diag(V) with Dirichlet at zeta_max.

    Args:
        potential: Potential evaluated on the grid nodes.
        config: Grid and solver options.

    Returns:
        GridSpectrum with ascending energies; fall_to_center is set when the
        ground energy moves by more than 1e-3 relative under halving zeta_min
        and h.

    Raises:
        EigensolverError: LAPACK failure.
    """
    result = _solve(potential, config)
    if not config.check_inner_cutoff:
        return result

    # re-solve with zeta_min and h halved
    e0 = result.energies[0]
    finer = _solve(potential, replace(config.refined(halve_cutoff=True), num_eigenvalues=1,
                                      check_inner_cutoff=False))
    shift = abs(finer.energies[0] - e0) / max(abs(e0), np.finfo(float).tiny)
    result.cutoff_shift = float(shift)
    if shift > FALL_TO_CENTER_RTOL:
        result.fall_to_center = True
        logger.warning(
            f"ground energy moved from {e0:.6g} to {finer.energies[0]:.6g} when halving zeta_min; "
            f"possible fall to the center (beta={potential.beta}, g={potential.g})"
        )
    return result


def wronskian(psi1: np.ndarray, psi2: np.ndarray, config: GridConfig) -> np.ndarray:
    """W = psi1 psi2' - psi2 psi1' with central differences on the config grid."""
    psi1 = np.asarray(psi1, dtype=float)
    psi2 = np.asarray(psi2, dtype=float)
    if psi1.shape != (config.num_points,) or psi2.shape != (config.num_points,):
        raise GridMismatchError(
            f"vectors of shape {psi1.shape} and {psi2.shape} are not on a {config.num_points}-point grid"
        )
    h = config.spacing
    return psi1 * np.gradient(psi2, h) - psi2 * np.gradient(psi1, h)


def count_nodes(spectrum: GridSpectrum, j: int) -> int:
    """Interior sign changes of eigenvector j."""
    return count_sign_changes(spectrum.vectors[j])


def sturm_check(spectrum: GridSpectrum) -> bool:
    """True when eigenvector j has exactly j nodes for every computed j."""
    return all(count_nodes(spectrum, j) == j for j in range(len(spectrum.energies)))


def is_nondegenerate(spectrum: GridSpectrum, min_gap: float = MIN_EIGENVALUE_GAP) -> bool:
    return bool(np.all(np.diff(spectrum.energies) > min_gap))


def _observed_order(energies: List[float]) -> float:
    if len(energies) < 3:
        return float('nan')
    d1 = energies[-3] - energies[-2]
    d2 = energies[-2] - energies[-1]
    if d2 == 0 or d1 / d2 <= 0:
        return float('nan')
    return math.log2(d1 / d2)


def convergence_study(potential: PotentialSpec, base_config: GridConfig, levels: int = 3) -> ConvergenceStudy:
    """
    Ground energy under repeated halving of h at fixed zeta_min.

    Args:
        potential: Potential to solve.
        base_config: Coarsest grid.
        levels: Number of grids, at least 2.

    Returns:
        ConvergenceStudy with the (h, energy) table, the Richardson-extrapolated
        energy, the observed order (nan with fewer than three grids) and a
        converged flag that is False when successive changes grow.
    """
    if levels < 2:
        raise ValueError(f"a convergence study needs at least 2 levels, got {levels}")

    config = replace(base_config, num_eigenvalues=1, check_inner_cutoff=False)
    rows = []
    for level in range(levels):
        e0 = float(_solve(potential, config).energies[0])
        logger.info(f"level {level}: h={config.spacing:.3e}, E0={e0:.12g}")
        rows.append((config.spacing, e0))
        config = config.refined()

    table = pd.DataFrame(rows, columns=['h', 'energy'])
    energies = table['energy'].tolist()
    # Richardson step with the observed order, or 2 when it is undefined
    order = _observed_order(energies)
    p = order if np.isfinite(order) and order > 0 else 2.0
    extrapolated = energies[-1] + (energies[-1] - energies[-2]) / (2.0 ** p - 1.0)

    changes = np.abs(np.diff(energies))
    converged = bool(np.all(changes[1:] < changes[:-1]))
    if not converged:
        logger.warning(f"no convergence under refinement: changes {changes.tolist()}")
    return ConvergenceStudy(table, float(extrapolated), order, converged)


def inner_cutoff_study(potential: PotentialSpec, base_config: GridConfig, levels: int = 4) -> CutoffStudy:
    """
    Ground energy as zeta_min and h are halved together.

    A ground energy that keeps decreasing, with the last step above 1e-3
    relative, is reported as a fall to the center.
    """
    if levels < 1:
        raise ValueError(f"levels must be positive, got {levels}")

    config = replace(base_config, num_eigenvalues=1, check_inner_cutoff=False)
    rows = []
    for level in range(levels + 1):
        e0 = float(_solve(potential, config).energies[0])
        logger.info(f"cutoff level {level}: zeta_min={config.zeta_min:.3e}, E0={e0:.12g}")
        rows.append((config.zeta_min, config.spacing, e0))
        config = config.refined(halve_cutoff=True)

    table = pd.DataFrame(rows, columns=['zeta_min', 'h', 'energy'])
    energies = table['energy'].to_numpy()
    decreasing = bool(np.all(np.diff(energies) < 0))
    last_shift = abs(energies[-1] - energies[-2]) / max(abs(energies[-2]), np.finfo(float).tiny)
    return CutoffStudy(table, decreasing and last_shift > FALL_TO_CENTER_RTOL)


def compare_with_analytic(analytic_energies: List[float], spectrum: GridSpectrum) -> pd.DataFrame:
    """
    Side-by-side table n, energy_analytic, energy_grid, relative_error.

    Grid levels without an analytic counterpart get NaN in the analytic columns.
    """
    grid = np.asarray(spectrum.energies, dtype=float)
    exact = np.full(len(grid), np.nan)
    k = min(len(analytic_energies), len(grid))
    exact[:k] = analytic_energies[:k]
    return pd.DataFrame({
        'n': np.arange(len(grid), dtype='int64'),
        'energy_analytic': exact,
        'energy_grid': grid,
        'relative_error': np.abs(grid - exact) / np.abs(exact),
    })
