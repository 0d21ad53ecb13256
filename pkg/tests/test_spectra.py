"""
Tests for the closed-form spectra, eigenfunctions and normalization.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from src.analysis import Parity
from src.errors import DegenerateProblemError, QuadratureError, SupercriticalCouplingError
from src.specfun import count_sign_changes
from src.spectra import (
    BoundState,
    NormalizationDomain,
    SpectrumRequest,
    Verdict,
    analytic_norm_const,
    density,
    dominant_potential,
    eigenfunction,
    full_line_states,
    hydrogen_spectrum,
    kratzer_spectrum,
    normalize,
    origin_exponent,
    pure_inverse_square_verdict,
    radial_spectrum_3d,
    schrodinger_residual,
    simpson_norm,
    spectrum,
)

G1 = -10.0


def s_of(g2):
    return (1 + math.sqrt(1 + 8 * g2)) / 2


class TestHydrogenSpectrum:

    def test_levels(self):
        energies = [st.energy for st in hydrogen_spectrum(G1, 4)]
        expected = [-100 / (2 * (n + 1) ** 2) for n in range(5)]
        assert energies == pytest.approx(expected, rel=1e-15)
        assert energies[:3] == pytest.approx([-50.0, -12.5, -50.0 / 9])

    def test_repulsive_coupling_has_no_levels(self):
        assert hydrogen_spectrum(10.0, 3) == []

    def test_ground_state_norm(self):
        """N_0 = 2 kappa^(3/2) since the integral of zeta^2 e^(-2 kappa zeta) is 1/(4 kappa^3)."""
        ground = hydrogen_spectrum(G1, 0)[0]
        assert ground.kappa == 10.0
        assert ground.norm_const == pytest.approx(2 * 10.0 ** 1.5, rel=1e-12)

    def test_rejects_negative_n_max(self):
        with pytest.raises(ValueError):
            hydrogen_spectrum(G1, -1)


class TestKratzerSpectrum:

    @pytest.mark.parametrize("g2", [-0.124999, -0.1, 0.1, 0.3])
    def test_ground_energy(self, g2):
        ground = kratzer_spectrum(G1, g2, 0)[0]
        assert ground.s == pytest.approx(s_of(g2), rel=1e-14)
        assert ground.energy == pytest.approx(-50.0 / s_of(g2) ** 2, rel=1e-14)

    def test_levels_ascend_and_stay_negative(self):
        energies = [st.energy for st in kratzer_spectrum(G1, 0.3, 6)]
        assert all(e < 0 for e in energies)
        assert all(a < b for a, b in zip(energies, energies[1:]))

    def test_zero_inverse_square_equals_hydrogen(self):
        assert kratzer_spectrum(G1, 0.0, 3) == hydrogen_spectrum(G1, 3)

    def test_continuity_across_zero(self):
        above = kratzer_spectrum(G1, 1e-6, 0)[0].energy
        below = kratzer_spectrum(G1, -1e-6, 0)[0].energy
        assert abs(above - below) / abs(above) < 1e-5

    def test_supercritical(self):
        with pytest.raises(SupercriticalCouplingError):
            kratzer_spectrum(G1, -0.2, 0)

    def test_vanishing_coulomb_term(self):
        with pytest.raises(DegenerateProblemError):
            kratzer_spectrum(0.0, 0.3, 0)

    def test_repulsive_coulomb_term(self):
        assert kratzer_spectrum(10.0, 0.3, 2) == []


class TestVerdicts:

    @pytest.mark.parametrize("g2", [0.3, -0.1, -0.2])
    def test_pure_inverse_square_never_binds(self, g2):
        assert pure_inverse_square_verdict(g2).verdict is Verdict.NO_BOUND_STATES

    def test_dispatch_pure_inverse_square(self):
        result = spectrum(SpectrumRequest(g1=0.0, g2=0.3, n_max=3))
        assert result.states == []
        assert result.verdict.verdict is Verdict.NO_BOUND_STATES
        frame = result.to_frame()
        assert list(frame.columns) == ['n', 'energy', 's', 'kappa']
        assert frame.empty

    def test_dispatch_hydrogen(self):
        result = spectrum(SpectrumRequest(g1=G1, g2=0.0, n_max=2))
        assert result.verdict.verdict is Verdict.BOUND_STATES
        assert result.to_frame()['energy'].tolist() == pytest.approx([-50.0, -12.5, -50.0 / 9])

    def test_dispatch_supercritical(self):
        with pytest.raises(SupercriticalCouplingError):
            spectrum(SpectrumRequest(g1=0.0, g2=-0.2))

    def test_dispatch_repulsive(self):
        result = spectrum(SpectrumRequest(g1=5.0, g2=0.1, n_max=1))
        assert result.verdict.verdict is Verdict.NO_BOUND_STATES

    def test_request_validation(self):
        with pytest.raises(ValueError):
            SpectrumRequest(g1=G1, n_max=-1)


class TestNormalization:

    @pytest.mark.parametrize("g2", [-0.124999, -0.1, 0.0, 0.3, 2.0])
    @pytest.mark.parametrize("n", [0, 1, 5])
    def test_quadrature_matches_closed_form(self, g2, n):
        state = kratzer_spectrum(G1, g2, n)[n]
        assert state.norm_const == pytest.approx(analytic_norm_const(state), rel=1e-10)

    @pytest.mark.parametrize("n", [60, 150, 199, 250])
    def test_high_levels_match_closed_form(self, n):
        state = normalize(BoundState(n=n, s=s_of(0.3), energy=-50.0 / (n + s_of(0.3)) ** 2,
                                     kappa=10.0 / (n + s_of(0.3))), G1, 0.3)
        assert np.isfinite(state.norm_const)
        assert state.norm_const == pytest.approx(analytic_norm_const(state), rel=1e-9)

    def test_deep_spectrum(self):
        states = kratzer_spectrum(G1, 0.3, 250)
        assert len(states) == 251
        assert states[-1].norm_const == pytest.approx(analytic_norm_const(states[-1]), rel=1e-9)

    def test_explicit_order_too_low(self):
        state = kratzer_spectrum(G1, 0.3, 5)[5]
        with pytest.raises(QuadratureError):
            normalize(state, G1, 0.3, nodes=5)

    @pytest.mark.parametrize("n", [0, 3])
    def test_unit_norm(self, n):
        g2 = 0.3
        state = kratzer_spectrum(G1, g2, n)[n]
        total, _ = quad(lambda z: density(state, G1, g2, z), 0.0, 40.0 / state.kappa,
                        limit=400, epsabs=1e-13, epsrel=1e-12)
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_idempotent(self):
        state = hydrogen_spectrum(G1, 2)[2]
        again = normalize(state, G1, 0.0)
        assert again.norm_const == state.norm_const

    def test_full_line_domain_halves_the_density(self):
        half = kratzer_spectrum(G1, 0.3, 0)[0]
        full = normalize(half, G1, 0.3, NormalizationDomain.FULL_LINE)
        assert full.norm_const == pytest.approx(half.norm_const / math.sqrt(2), rel=1e-13)
        assert full.domain is NormalizationDomain.FULL_LINE

    def test_truncated_domain(self):
        """The tail beyond 40/kappa is below 1e-12."""
        state = hydrogen_spectrum(G1, 0)[0]
        assert simpson_norm(state, G1, 0.0) == pytest.approx(1.0, abs=1e-10)

    def test_mismatched_couplings(self):
        state = hydrogen_spectrum(G1, 0)[0]
        with pytest.raises(ValueError):
            normalize(state, G1, 0.3)


class TestEigenfunctions:

    def test_orthonormal(self):
        g2 = 0.3
        states = kratzer_spectrum(G1, g2, 5)
        upper = 40.0 / states[-1].kappa
        for i, a in enumerate(states):
            for b in states[i:]:
                overlap, _ = quad(lambda z: eigenfunction(a, G1, g2, z) * eigenfunction(b, G1, g2, z),
                                  0.0, upper, limit=500, epsabs=1e-12, epsrel=1e-12)
                assert abs(overlap - (1.0 if a.n == b.n else 0.0)) <= 1e-8, (a.n, b.n)

    @pytest.mark.parametrize("g2", [-0.1, 0.0, 0.3])
    def test_node_count(self, g2):
        for state in kratzer_spectrum(G1, g2, 5):
            zeta = np.linspace(1e-9, 40.0 / state.kappa, 20001)
            assert count_sign_changes(eigenfunction(state, G1, g2, zeta)) == state.n

    def test_vanishes_at_origin(self):
        state = kratzer_spectrum(G1, -0.124999, 0)[0]
        assert eigenfunction(state, G1, -0.124999, 0.0) == 0.0

    def test_peak_at_s_squared_over_g1(self):
        """The ground state zeta^s e^(-kappa zeta) peaks at s/kappa = s^2/|g1|."""
        g2 = 0.1
        state = kratzer_spectrum(G1, g2, 0)[0]
        zeta = np.linspace(0.0, 1.2, 120001)
        peak = zeta[np.argmax(eigenfunction(state, G1, g2, zeta))]
        assert peak == pytest.approx(state.s ** 2 / abs(G1), abs=2e-5)

    def test_density_is_square(self):
        state = hydrogen_spectrum(G1, 1)[1]
        zeta = np.linspace(0.0, 2.0, 11)
        np.testing.assert_allclose(density(state, G1, 0.0, zeta), eigenfunction(state, G1, 0.0, zeta) ** 2)

    def test_unnormalized_state_uses_unit_constant(self):
        state = BoundState(n=0, s=1.0, energy=-50.0, kappa=10.0)
        assert eigenfunction(state, G1, 0.0, 0.1) == pytest.approx(0.1 * math.exp(-1.0))

    def test_negative_zeta_needs_parity(self):
        state = hydrogen_spectrum(G1, 0)[0]
        with pytest.raises(ValueError):
            eigenfunction(state, G1, 0.0, -0.1)

    @pytest.mark.parametrize("g2", [-0.1, 0.0, 0.3])
    def test_schrodinger_residual(self, g2):
        for state in kratzer_spectrum(G1, g2, 3):
            zeta = np.linspace(0.05 / state.kappa, 20.0 / state.kappa, 2001)
            residual = schrodinger_residual(state, G1, g2, zeta)
            psi = eigenfunction(state, G1, g2, zeta)
            scale = np.max(np.abs((state.kappa ** 2 + 2 * G1 / zeta + 2 * g2 / zeta ** 2) * psi))
            assert np.max(np.abs(residual)) <= 1e-5 * scale


class TestFullLineStates:

    def test_coulomb_keeps_odd_states_only(self):
        states = hydrogen_spectrum(G1, 2)
        extended = full_line_states(states, G1, 0.0)
        assert [st.parity for st in extended] == [Parity.ODD] * 3

    def test_inverse_square_doubles_every_level(self):
        g2 = 0.3
        states = kratzer_spectrum(G1, g2, 1)
        extended = full_line_states(states, G1, g2)
        assert len(extended) == 4
        assert [st.parity for st in extended] == [Parity.EVEN, Parity.ODD, Parity.EVEN, Parity.ODD]
        assert extended[0].energy == extended[1].energy
        for st in extended:
            assert st.norm_const == pytest.approx(analytic_norm_const(st, NormalizationDomain.FULL_LINE), rel=1e-10)

    def test_parity_of_samples(self):
        g2 = -0.1
        odd = [st for st in full_line_states(kratzer_spectrum(G1, g2, 0), G1, g2) if st.parity is Parity.ODD][0]
        zeta = np.linspace(0.01, 1.0, 50)
        np.testing.assert_allclose(eigenfunction(odd, G1, g2, -zeta), -eigenfunction(odd, G1, g2, zeta))

    def test_whole_line_norm(self):
        g2 = 0.3
        even = full_line_states(kratzer_spectrum(G1, g2, 0), G1, g2)[0]
        total, _ = quad(lambda z: density(even, G1, g2, z), -4.0, 4.0, points=[0.0], limit=400)
        assert total == pytest.approx(1.0, abs=1e-10)


class TestHelpers:

    def test_origin_exponent(self):
        assert origin_exponent(0.0) == 1.0
        assert origin_exponent(0.3) == pytest.approx(s_of(0.3))

    def test_dominant_potential(self):
        assert dominant_potential(G1, 0.0).beta == 1.0
        spec = dominant_potential(G1, 0.3)
        assert (spec.beta, spec.g, spec.g1) == (2.0, 0.3, G1)
        assert dominant_potential(0.0, 0.3).g1 is None

    def test_to_dict(self):
        d = hydrogen_spectrum(G1, 0)[0].to_dict()
        assert d['n'] == 0
        assert d['energy'] == -50.0
        assert d['domain'] == 'half_line'
        assert d['parity'] is None


class TestRadialSpectrum3D:

    def test_coulomb_levels_shift_with_l(self):
        """E = -g1^2 / (2 (n + l + 1)^2)."""
        for l in (0, 1, 2):
            energies = [st.energy for st in radial_spectrum_3d(G1, 0.0, l, 3)]
            expected = [-100 / (2 * (n + l + 1) ** 2) for n in range(4)]
            assert energies == pytest.approx(expected, rel=1e-12)

    def test_no_coulomb_term(self):
        assert radial_spectrum_3d(0.0, 0.3, 1, 2) == []
