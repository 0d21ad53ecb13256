"""
Tests for the command-line surface and its exit-code contract.
"""

import io
import json

import pandas as pd
import pytest

from src.cli import FIGURE_SPECS, RunConfig, main, peak_positions, run
from src.outputUtils.output_utils import OutputConfig, table_to_csv
from src.spectra import kratzer_spectrum


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestClassify:

    def test_inverse_square_is_double(self, capsys):
        code, out = run_cli(capsys, 'classify', '--beta', '2', '--g2', '0.3')
        report = json.loads(out)
        assert code == 0
        assert report['degeneracy'] == 'double'
        assert report['allowed_parities'] == ['even', 'odd']
        assert report['critical_coupling'] == -0.125

    def test_intermediate_singularity(self, capsys):
        code, out = run_cli(capsys, 'classify', '--beta', '1.5')
        assert code == 0
        assert json.loads(out)['allowed_parities'] == ['odd']

    def test_supercritical_exit_code(self, capsys):
        code, _ = run_cli(capsys, 'classify', '--beta', '2', '--g2', '-0.2')
        assert code == 2

    def test_weak_singularity_reports_both_branches(self, capsys):
        _, out = run_cli(capsys, 'classify', '--beta', '0.5')
        report = json.loads(out)
        assert [b['table_row'] for b in report['branches']] == ['beta<1, s=0', 'beta<1, s=1']
        assert report['degeneracy'] == 'nondegenerate'

    def test_single_branch(self, capsys):
        _, out = run_cli(capsys, 'classify', '--beta', '0.5', '--branch', '0')
        report = json.loads(out)
        assert report['allowed_parities'] == ['even']

    def test_csv_output(self, capsys):
        code, out = run_cli(capsys, 'classify', '--beta', '1', '--format', 'csv')
        assert code == 0
        assert out.splitlines()[0].startswith('table_row,s,')


class TestSpectrum:

    def test_hydrogen_table(self, capsys):
        code, out = run_cli(capsys, 'spectrum', '--g1', '-10', '--g2', '0', '--nmax', '2')
        assert code == 0
        assert out.splitlines()[0] == 'n,energy,s,kappa'
        frame = pd.read_csv(io.StringIO(out))
        assert frame['energy'].tolist() == pytest.approx([-50.0, -12.5, -50.0 / 9], rel=1e-15)

    def test_no_bound_states(self, capsys):
        code, out = run_cli(capsys, 'spectrum', '--g1', '0', '--g2', '0.3')
        assert code == 0
        assert out == 'n,energy,s,kappa\n'

    def test_no_bound_states_json(self, capsys):
        _, out = run_cli(capsys, 'spectrum', '--g1', '0', '--g2', '0.3', '--format', 'json')
        payload = json.loads(out)
        assert payload['verdict'] == 'no bound states'
        assert payload['rows'] == []

    def test_json_round_trip_is_exact(self, capsys):
        _, out = run_cli(capsys, 'spectrum', '--g1', '-10', '--g2', '0.3', '--nmax', '3', '--format', 'json')
        rows = json.loads(out)['rows']
        assert [r['energy'] for r in rows] == [st.energy for st in kratzer_spectrum(-10.0, 0.3, 3)]

    def test_csv_is_deterministic(self, capsys):
        _, first = run_cli(capsys, 'spectrum', '--g1', '-10', '--g2', '-0.1', '--nmax', '4')
        _, second = run_cli(capsys, 'spectrum', '--g1', '-10', '--g2', '-0.1', '--nmax', '4')
        assert first == second

    def test_csv_round_trip_is_exact(self, capsys):
        _, out = run_cli(capsys, 'spectrum', '--g1', '-10', '--g2', '0.1', '--nmax', '2')
        energies = pd.read_csv(io.StringIO(out), float_precision='round_trip')['energy'].tolist()
        assert energies == [st.energy for st in kratzer_spectrum(-10.0, 0.1, 2)]

    def test_supercritical(self, capsys):
        code, _ = run_cli(capsys, 'spectrum', '--g1', '-10', '--g2', '-0.2')
        assert code == 2

    def test_missing_coupling(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(['spectrum', '--g2', '0.3'])
        assert excinfo.value.code == 2

    def test_writes_file(self, tmp_path, capsys):
        path = tmp_path / 'out' / 'spectrum.csv'
        code, out = run_cli(capsys, 'spectrum', '--g1', '-10', '--nmax', '1', '-o', str(path))
        assert code == 0
        assert out == ''
        assert path.read_text().startswith('n,energy,s,kappa\n')

    def test_io_failure_exit_code(self, tmp_path, capsys):
        code, _ = run_cli(capsys, 'spectrum', '--g1', '-10', '-o', str(tmp_path))
        assert code == 1


class TestWavefunction:

    def test_columns_and_origin(self, capsys):
        code, out = run_cli(capsys, 'wavefunction', '--g1', '-10', '--g2', '0.3', '--n', '1')
        frame = pd.read_csv(io.StringIO(out))
        assert code == 0
        assert list(frame.columns) == ['zeta', 'psi', 'rho']
        assert len(frame) == 600
        assert frame['psi'].iloc[0] == 0.0
        assert frame['rho'].to_numpy() == pytest.approx(frame['psi'].to_numpy() ** 2)

    def test_forbidden_parity(self, capsys):
        code, _ = run_cli(capsys, 'wavefunction', '--g1', '-10', '--g2', '0', '--parity', 'even')
        assert code == 2

    def test_whole_line_samples(self, capsys):
        code, out = run_cli(capsys, 'wavefunction', '--g1', '-10', '--g2', '0.3', '--parity', 'even',
                            '--zeta-min', '-1', '--zeta-max', '1', '--samples', '201')
        frame = pd.read_csv(io.StringIO(out))
        assert code == 0
        assert frame['psi'].to_numpy() == pytest.approx(frame['psi'].to_numpy()[::-1])

    def test_no_bound_state(self, capsys):
        code, _ = run_cli(capsys, 'wavefunction', '--g1', '0', '--g2', '0.3')
        assert code == 2


class TestOracle:

    def test_kratzer_agreement(self, capsys):
        code, out = run_cli(capsys, 'oracle', '--g1', '-10', '--g2', '0.3')
        frame = pd.read_csv(io.StringIO(out))
        assert code == 0
        assert list(frame.columns) == ['n', 'energy_analytic', 'energy_grid', 'relative_error']
        assert (frame['relative_error'] < 5e-3).all()

    def test_refinement_levels(self, capsys):
        _, coarse = run_cli(capsys, 'oracle', '--g1', '-10', '--points', '2000')
        _, fine = run_cli(capsys, 'oracle', '--g1', '-10', '--points', '2000', '--levels', '1')
        err_coarse = pd.read_csv(io.StringIO(coarse))['relative_error'].iloc[0]
        err_fine = pd.read_csv(io.StringIO(fine))['relative_error'].iloc[0]
        assert err_fine < err_coarse


class TestFigures:

    def test_writes_both_datasets(self, tmp_path, capsys):
        code, _ = run_cli(capsys, 'figures', '--output-dir', str(tmp_path))
        assert code == 0
        fig1 = pd.read_csv(tmp_path / 'fig1.csv')
        fig2 = pd.read_csv(tmp_path / 'fig2.csv')
        assert list(fig1.columns) == ['g1', 'g2', 'zeta', 'psi']
        assert fig1.groupby(['g1', 'g2']).ngroups == 5
        assert fig2.groupby(['g1', 'g2']).ngroups == 2
        assert len(fig1) == 5 * 600

    def test_peaks_move_out_with_g2(self, tmp_path, capsys):
        run_cli(capsys, 'figures', '--output-dir', str(tmp_path))
        peaks = peak_positions(pd.read_csv(tmp_path / 'fig1.csv', float_precision='round_trip'))
        assert peaks['g2'].tolist() == [g2 for _, g2 in FIGURE_SPECS[0].parameter_sets]
        assert peaks['zeta_peak'].is_monotonic_increasing
        assert peaks['zeta_peak'].nunique() == 5


class TestRunConfig:

    def test_validation_maps_to_exit_code(self):
        cfg = RunConfig(command='spectrum', output=OutputConfig())
        assert run(cfg) == 2

    def test_csv_formatting(self):
        frame = pd.DataFrame({'x': [0.1, -50.0]})
        assert table_to_csv(frame) == 'x\n0.10000000000000001\n-50\n'


class TestLogging:

    def test_log_file(self, tmp_path, capsys):
        log = tmp_path / 'run.log'
        code = main(['--log-file', str(log), 'spectrum', '--g1', '0', '--g2', '0.3'])
        capsys.readouterr()
        assert code == 0
        assert 'no bound states' in log.read_text()
