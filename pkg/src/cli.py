#!/usr/bin/env python3
"""
Command-line surface: boundary classification reports, spectrum tables,
wavefunction samples, finite-difference cross-checks and the ground-state
figure datasets.

Exit codes: 0 success, 1 I/O or numerical failure, 2 invalid physics parameters.
"""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.analysis import (
    CRITICAL_COUPLING,
    Degeneracy,
    Parity,
    PotentialSpec,
    classify_all,
    classify_boundary,
    indicial_roots,
)
from src.errors import NumericalError, ParityNotAllowedError, PhysicsParameterError
from src.oracle import compare_with_analytic, default_grid_config, solve_grid
from src.outputUtils.output_utils import OutputConfig, OutputFormat, table_to_csv, write_json, write_table
from src.spectra import (
    NormalizationDomain,
    SpectrumRequest,
    Verdict,
    dominant_potential,
    eigenfunction,
    normalize,
    spectrum,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
EXIT_OK = 0
EXIT_IO = 1
EXIT_PHYSICS = 2


class Command(str, Enum):
    CLASSIFY = "classify"
    SPECTRUM = "spectrum"
    WAVEFUNCTION = "wavefunction"
    ORACLE = "oracle"
    FIGURES = "figures"


@dataclass(frozen=True)
class FigureSpec:
    """A named set of (g1, g2) ground states sampled on a common zeta grid."""
    name: str
    parameter_sets: Tuple[Tuple[float, float], ...]


FIGURE_SPECS = (
    FigureSpec('fig1', tuple((-10.0, g2) for g2 in (-0.124999, -0.1, 0.0, 0.1, 0.3))),
    FigureSpec('fig2', tuple((g1, -0.124999) for g1 in (-10.0, -5.0))),
)


@dataclass
class RunConfig:
    """
    Parameters of one CLI invocation.

    Attributes:
        command: Subcommand to run.
        g1: Coulomb coupling (spectrum, wavefunction, oracle; optional for classify).
        g2: Inverse-square coupling.
        beta: Singularity exponent (classify).
        g: Dominant coupling for classify; defaults to g2 when beta = 2.
        branch: Origin exponent branch for beta < 1.
        n_max: Highest quantum number.
        n: Quantum number of the sampled wavefunction.
        zeta_min, zeta_max, num_samples: Sampling range for wavefunctions and figures.
        domain: Normalization domain.
        parity: Parity extension for whole-line wavefunctions.
        num_points: Oracle grid size (None for the default).
        levels: Oracle refinement levels.
        output: Format and destination of the result.
        output_dir: Directory for the figure datasets.
    """
    command: Command
    g1: Optional[float] = None
    g2: float = 0.0
    beta: Optional[float] = None
    g: Optional[float] = None
    branch: Optional[int] = None
    n_max: int = 0
    n: int = 0
    zeta_min: float = 0.0
    zeta_max: float = 1.2
    num_samples: int = 600
    domain: NormalizationDomain = NormalizationDomain.HALF_LINE
    parity: Optional[Parity] = None
    num_points: Optional[int] = None
    levels: int = 0
    output: OutputConfig = field(default_factory=OutputConfig)
    output_dir: Path = Path('.')

    def __post_init__(self):
        self.command = Command(self.command)
        self.domain = NormalizationDomain(self.domain)
        if self.parity is not None:
            self.parity = Parity(self.parity)
        self.output_dir = Path(self.output_dir)

    def validate(self) -> None:
        """Check that the parameters the command needs are present."""
        if self.command is Command.CLASSIFY:
            if self.beta is None:
                raise ValueError("classify needs --beta")
            if self.beta == 2 and self.g is None and self.g2 == 0:
                raise ValueError("classify with beta=2 needs a non-zero --g2")
        elif self.command in (Command.SPECTRUM, Command.WAVEFUNCTION, Command.ORACLE):
            if self.g1 is None:
                raise ValueError(f"{self.command.value} needs --g1")
        if self.n_max < 0 or self.n < 0:
            raise ValueError("quantum numbers must be nonnegative")
        if self.num_samples < 2 or self.zeta_max <= self.zeta_min:
            raise ValueError("need at least 2 samples on an increasing zeta range")
        if self.levels < 0:
            raise ValueError("--levels must be nonnegative")


def _classify_potential(cfg: RunConfig) -> PotentialSpec:
    if cfg.beta == 2:
        g = cfg.g if cfg.g is not None else cfg.g2
    else:
        # the origin classification for beta < 2 does not depend on g
        g = cfg.g if cfg.g is not None else -1.0
    g1 = cfg.g1 if cfg.g1 and cfg.beta > 1 else None
    return PotentialSpec(beta=cfg.beta, g=g, g1=g1)


def cmd_classify(cfg: RunConfig) -> Dict[str, Any]:
    """Indicial roots, admissible exponents, origin behaviour, parities and degeneracy."""
    spec = _classify_potential(cfg)
    roots = indicial_roots(spec)
    if cfg.branch is not None:
        branches = [classify_boundary(spec, float(cfg.branch))]
    else:
        branches = classify_all(spec)

    parities = set()
    for b in branches:
        parities |= b.allowed_parities
    degenerate = any(b.degeneracy is Degeneracy.DOUBLE for b in branches)

    report = {
        'beta': spec.beta,
        'g': spec.g,
        'indicial_roots': {'s_plus': roots.s_plus, 's_minus': roots.s_minus},
        'admissible_s': list(roots.admissible_s),
        'branches': [b.to_dict() for b in branches],
        'allowed_parities': [p.label for p in sorted(parities, reverse=True)],
        'degeneracy': (Degeneracy.DOUBLE if degenerate else Degeneracy.NONDEGENERATE).value,
    }
    if spec.beta == 2:
        report['critical_coupling'] = CRITICAL_COUPLING
    return report


def cmd_spectrum(cfg: RunConfig) -> Tuple[pd.DataFrame, Dict[str, Any]]:
    """Table (n, energy, s, kappa) and the verdict that accompanies it."""
    request = SpectrumRequest(cfg.g1, cfg.g2, cfg.n_max, cfg.domain)
    result = spectrum(request)
    if result.verdict.verdict is Verdict.NO_BOUND_STATES:
        logger.info(f"{result.verdict.verdict.value}: {result.verdict.reason}")
    extra = {
        'g1': cfg.g1,
        'g2': cfg.g2,
        'verdict': result.verdict.verdict.value,
        'reason': result.verdict.reason,
    }
    return result.to_frame(), extra


def cmd_wavefunction(cfg: RunConfig) -> pd.DataFrame:
    """Samples (zeta, psi, rho) of the normalized state n."""
    result = spectrum(SpectrumRequest(cfg.g1, cfg.g2, cfg.n, cfg.domain))
    if not result.states:
        raise PhysicsParameterError(f"no bound state for g1={cfg.g1}, g2={cfg.g2}: {result.verdict.reason}")
    state = result.states[cfg.n]

    # whole-line samples need a parity the connection conditions allow
    if cfg.parity is not None:
        classification = classify_boundary(dominant_potential(cfg.g1, cfg.g2))
        if cfg.parity not in classification.allowed_parities:
            raise ParityNotAllowedError(
                f"{cfg.parity.label} extension is not allowed for {classification.table_row}"
            )
        state = normalize(replace(state, parity=cfg.parity), cfg.g1, cfg.g2, NormalizationDomain.FULL_LINE)
    elif cfg.zeta_min < 0:
        raise ValueError("negative zeta samples need --parity")

    zeta = np.linspace(cfg.zeta_min, cfg.zeta_max, cfg.num_samples)
    psi = eigenfunction(state, cfg.g1, cfg.g2, zeta)
    return pd.DataFrame({'zeta': zeta, 'psi': psi, 'rho': psi ** 2})


def cmd_oracle(cfg: RunConfig) -> pd.DataFrame:
    """Analytic levels next to the finite-difference eigenvalues."""
    result = spectrum(SpectrumRequest(cfg.g1, cfg.g2, cfg.n_max))
    potential = dominant_potential(cfg.g1, cfg.g2)

    # one refinement per --levels
    overrides = {} if cfg.num_points is None else {'num_points': cfg.num_points}
    config = default_grid_config(potential, cfg.n_max + 1, **overrides)
    for _ in range(cfg.levels):
        config = config.refined()
    logger.info(f"Solving on {config.num_points} points, h={config.spacing:.3e}")

    grid = solve_grid(potential, config)
    return compare_with_analytic([st.energy for st in result.states], grid)


def figure_curve(g1: float, g2: float, zeta: np.ndarray) -> pd.DataFrame:
    """Normalized half-line ground state for one parameter set, long format."""
    state = spectrum(SpectrumRequest(g1, g2, 0)).states[0]
    psi = eigenfunction(state, g1, g2, zeta)
    return pd.DataFrame({'g1': g1, 'g2': g2, 'zeta': zeta, 'psi': psi})


def figure_dataset(spec: FigureSpec, zeta: np.ndarray, max_workers: int = 4) -> pd.DataFrame:
    """Evaluate every parameter set of a figure concurrently and stack the curves."""
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        curves = list(pool.map(lambda p: figure_curve(p[0], p[1], zeta), spec.parameter_sets))
    return pd.concat(curves, ignore_index=True)


def peak_positions(dataset: pd.DataFrame) -> pd.DataFrame:
    """Abscissa and height of the maximum of each curve, in input order."""
    rows = []
    for (g1, g2), curve in dataset.groupby(['g1', 'g2'], sort=False):
        i = curve['psi'].to_numpy().argmax()
        rows.append((g1, g2, curve['zeta'].iloc[i], curve['psi'].iloc[i]))
    return pd.DataFrame(rows, columns=['g1', 'g2', 'zeta_peak', 'psi_peak'])


def cmd_figures(cfg: RunConfig) -> Dict[str, Path]:
    """Write fig1.csv and fig2.csv into cfg.output_dir."""
    zeta = np.linspace(cfg.zeta_min, cfg.zeta_max, cfg.num_samples)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    for spec in FIGURE_SPECS:
        dataset = figure_dataset(spec, zeta)
        path = cfg.output_dir / f"{spec.name}.csv"
        path.write_text(table_to_csv(dataset, cfg.output.float_format), encoding='utf-8')
        logger.info(f"{spec.name}: {len(spec.parameter_sets)} curves written to {path}")
        paths[spec.name] = path
    return paths


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='boundstates',
        description='Bound states of singular 1/|x| and 1/x^2 potentials (dimensionless units).',
    )
    parser.add_argument('--verbose', '-v', action='store_true', help='Log at DEBUG level.')
    parser.add_argument('--log-file', type=Path, default=None, help='Also write the log to this file.')
    sub = parser.add_subparsers(dest='command', required=True)

    def add_output(p: argparse.ArgumentParser) -> None:
        p.add_argument('--format', choices=[f.value for f in OutputFormat], default=None,
                       help='Output format (default: json for classify, csv otherwise).')
        p.add_argument('--output', '-o', type=Path, default=None, help='Output file (default: stdout).')

    def add_couplings(p: argparse.ArgumentParser, g1_required: bool = True) -> None:
        p.add_argument('--g1', type=float, required=g1_required, default=None, help='Coulomb coupling.')
        p.add_argument('--g2', type=float, default=0.0, help='Inverse-square coupling (default: 0).')

    p = sub.add_parser('classify', help='Origin behaviour, parities and degeneracy.')
    p.add_argument('--beta', type=float, required=True, help='Singularity exponent, 0 < beta <= 2.')
    p.add_argument('--g', type=float, default=None, help='Dominant coupling (default: --g2 for beta=2).')
    p.add_argument('--branch', type=int, choices=[0, 1], default=None, help='Origin exponent for beta < 1.')
    add_couplings(p, g1_required=False)
    add_output(p)

    p = sub.add_parser('spectrum', help='Closed-form levels.')
    add_couplings(p)
    p.add_argument('--nmax', '--n-max', dest='n_max', type=int, default=0, help='Highest quantum number.')
    p.add_argument('--domain', choices=[d.value for d in NormalizationDomain], default='half_line')
    add_output(p)

    p = sub.add_parser('wavefunction', help='Normalized eigenfunction samples.')
    add_couplings(p)
    p.add_argument('--n', type=int, default=0, help='Quantum number.')
    p.add_argument('--zeta-min', type=float, default=0.0)
    p.add_argument('--zeta-max', type=float, default=1.2)
    p.add_argument('--samples', dest='num_samples', type=int, default=600)
    p.add_argument('--domain', choices=[d.value for d in NormalizationDomain], default='half_line')
    p.add_argument('--parity', choices=['even', 'odd'], default=None, help='Whole-line parity extension.')
    add_output(p)

    p = sub.add_parser('oracle', help='Compare closed-form levels with the finite-difference solver.')
    add_couplings(p)
    p.add_argument('--nmax', '--n-max', dest='n_max', type=int, default=0)
    p.add_argument('--points', dest='num_points', type=int, default=None, help='Grid points (default: 20000).')
    p.add_argument('--levels', type=int, default=0, help='Number of grid refinements (h halved each time).')
    add_output(p)

    p = sub.add_parser('figures', help='Write the ground-state figure datasets.')
    p.add_argument('--output-dir', type=Path, default=Path('.'))
    p.add_argument('--zeta-max', type=float, default=1.2)
    p.add_argument('--samples', dest='num_samples', type=int, default=600)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    command = Command(args.command)
    fmt = getattr(args, 'format', None)
    if fmt is None:
        fmt = OutputFormat.JSON if command is Command.CLASSIFY else OutputFormat.CSV
    parity = getattr(args, 'parity', None)
    if parity is not None:
        parity = Parity.EVEN if parity == 'even' else Parity.ODD

    kwargs = {
        name: getattr(args, name)
        for name in ('g1', 'g2', 'beta', 'g', 'branch', 'n_max', 'n', 'zeta_min', 'zeta_max',
                     'num_samples', 'domain', 'num_points', 'levels', 'output_dir')
        if getattr(args, name, None) is not None
    }
    return RunConfig(
        command=command,
        parity=parity,
        output=OutputConfig(fmt, getattr(args, 'output', None)),
        **kwargs,
    )


def run(cfg: RunConfig) -> int:
    """Execute one command and map failures to the exit-code contract."""
    try:
        cfg.validate()
        # dispatch on the subcommand
        if cfg.command is Command.CLASSIFY:
            report = cmd_classify(cfg)
            if cfg.output.output_format is OutputFormat.JSON:
                write_json(report, cfg.output)
            else:
                write_table(pd.DataFrame(report['branches']), cfg.output)
        elif cfg.command is Command.SPECTRUM:
            frame, extra = cmd_spectrum(cfg)
            write_table(frame, cfg.output, extra)
        elif cfg.command is Command.WAVEFUNCTION:
            write_table(cmd_wavefunction(cfg), cfg.output)
        elif cfg.command is Command.ORACLE:
            write_table(cmd_oracle(cfg), cfg.output)
        else:
            cmd_figures(cfg)
    except ValueError as e:
        # PhysicsParameterError is a ValueError
        logger.error(f"Invalid parameters: {e}")
        return EXIT_PHYSICS
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_IO
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_IO
    return EXIT_OK


def configure_logging(verbose: bool = False, log_file: Optional[Path] = None) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file is not None:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, configure logging and run the command."""
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.verbose, args.log_file)
    except OSError as e:
        print(f"Cannot open log file: {e}", file=sys.stderr)
        return EXIT_IO
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
