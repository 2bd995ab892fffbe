"""
Closed-form amplitudes: worked points, interference identities and
conservation properties.
"""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from waveguide.closed_form import (
    amplitudes_eigen,
    amplitudes_full,
    amplitudes_matched,
    collective_params,
    degeneracy_coupling,
    evaluate_eigen,
    evaluate_full,
    evaluate_regular,
    matched_failures,
    resonant_dissipation_probabilities,
)
from waveguide.errors import KappaUnsupportedError, NearPoleError, PreconditionViolatedError
from waveguide.model import TwoAtomParams

PI = math.pi
GRID = np.linspace(-10.0, 10.0, 201)

angles = st.floats(min_value=0.0, max_value=2 * PI, allow_nan=False)
couplings = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
detunings = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


def _probabilities(theta, phi, j=0.0, kappa=0.0, detuning=0.0, gamma=1.0):
    t_r1, r_l1, t_r2, r_l2, _ = evaluate_full(theta, phi, gamma, j, kappa, detuning)
    return np.abs(t_r1) ** 2, np.abs(r_l1) ** 2, np.abs(t_r2) ** 2, np.abs(r_l2) ** 2


class TestFullAmplitudes:

    def test_equal_split(self):
        probabilities = amplitudes_full(TwoAtomParams(theta=PI, phi=PI)).probabilities()
        for value in (probabilities.t, probabilities.r, probabilities.t_f, probabilities.t_b):
            assert value == pytest.approx(0.25, abs=1e-12)

    def test_no_transfer_when_phi_is_two_pi(self):
        T, R, T_f, T_b = _probabilities(PI, 2 * PI, detuning=GRID)
        assert np.max(T_f) < 1e-12
        assert np.max(T_b) < 1e-12

    def test_channel_drop_at_resonance(self):
        a = amplitudes_full(TwoAtomParams(theta=PI / 2, phi=PI / 2, j=-2.0))
        assert abs(a.t_r1) < 1e-12
        assert abs(a.r_l1) < 1e-12
        assert abs(a.r_l2) < 1e-12
        assert abs(a.t_r2) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_channel_drop_lorentzian(self):
        T, R, T_f, T_b = _probabilities(PI / 2, PI / 2, j=-2.0, detuning=np.array([-2.0, 0.0, 2.0]))
        assert T_f[1] == pytest.approx(1.0, abs=1e-12)
        assert T_f[0] == pytest.approx(0.5, abs=1e-10)
        assert T_f[2] == pytest.approx(0.5, abs=1e-10)
        _, R, _, T_b = _probabilities(PI / 2, PI / 2, j=-2.0, detuning=GRID)
        assert np.max(R) < 1e-12
        assert np.max(T_b) < 1e-12

    def test_backward_routing(self):
        t_r1, r_l1, t_r2, r_l2, _ = evaluate_full(PI / 2, 3 * PI / 2, 1.0, 0.0, 0.0, GRID)
        assert np.max(np.abs(r_l1 - t_r2)) < 1e-12
        assert np.max(np.abs(t_r1 - 1.0 - r_l2)) < 1e-12
        a = amplitudes_full(TwoAtomParams(theta=PI / 2, phi=3 * PI / 2))
        assert abs(a.r_l2) ** 2 == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("kappa", [0.01, 0.1, 0.5, 1.0])
    def test_resonant_dissipation(self, kappa):
        p = TwoAtomParams(theta=PI / 2, phi=PI / 2, j=degeneracy_coupling(PI / 2, PI / 2, 1.0), kappa=kappa)
        probabilities = amplitudes_full(p).probabilities()
        expected = resonant_dissipation_probabilities(1.0, kappa)
        assert probabilities.t == pytest.approx(expected["T"], abs=1e-12)
        assert probabilities.t_f == pytest.approx(expected["T_f"], abs=1e-12)
        assert probabilities.r == pytest.approx(0.0, abs=1e-12)
        assert probabilities.t_b == pytest.approx(0.0, abs=1e-12)

    def test_resonant_dissipation_values(self):
        expected = resonant_dissipation_probabilities(1.0, 0.1)
        assert expected["T"] == pytest.approx(5.9488e-4, rel=1e-4)
        assert expected["T_f"] == pytest.approx(0.95181, rel=1e-5)

    def test_far_detuned_photon_passes(self):
        a = amplitudes_full(TwoAtomParams(theta=1.1, phi=2.3, j=0.4, detuning=1e8))
        assert abs(a.t_r1 - 1) < 1e-7
        assert max(abs(a.r_l1), abs(a.t_r2), abs(a.r_l2)) < 1e-7

    def test_dark_state_on_resonance(self):
        # θ = φ = 0, J = 0: |−⟩ is dark and sits exactly at Δ = 0
        *_, denominator = evaluate_full(0.0, 0.0, 1.0, 0.0, 0.0, 0.0)
        assert denominator == 0
        a = amplitudes_full(TwoAtomParams(theta=0.0, phi=0.0))
        assert a.t_r1 == pytest.approx(0.5, abs=1e-15)
        for value in (a.r_l1, a.t_r2, a.r_l2):
            assert value == pytest.approx(-0.5, abs=1e-15)

    def test_pole_guard_raises(self):
        with pytest.raises(NearPoleError):
            amplitudes_full(TwoAtomParams(theta=PI / 2, phi=PI / 2, j=-2.0), pole_guard=10.0)

    def test_regular_kernel_fills_dark_rows(self):
        theta = np.array([0.0, PI, 2 * PI, 1.0])
        j = degeneracy_coupling(theta, theta, 1.0)
        t_r1, r_l1, t_r2, r_l2, _, pole = evaluate_regular(theta, theta, 1.0, j, 0.0, 0.0)
        assert not pole.any()
        for amplitudes in (t_r1, r_l1, t_r2, r_l2):
            assert np.all(np.isfinite(amplitudes))
        total = sum(np.abs(a) ** 2 for a in (t_r1, r_l1, t_r2, r_l2))
        assert np.max(np.abs(total - 1.0)) < 1e-12
        assert (np.abs(r_l1[:3]) ** 2).tolist() == pytest.approx([0.25] * 3, abs=1e-12)

    def test_dark_state_reduction(self):
        t_r1, r_l1, t_r2, r_l2, _, pole = evaluate_regular(PI, PI, 1.0, 0.0, 0.0, GRID)
        assert not pole.any()
        assert np.max(np.abs(r_l1 - t_r2)) < 1e-12
        assert np.max(np.abs(t_r2 - r_l2)) < 1e-12

    def test_vectorized_conservation(self):
        rng = np.random.default_rng(7)
        n = 100_000
        theta = rng.uniform(0, 2 * PI, n)
        phi = rng.uniform(0, 2 * PI, n)
        j = rng.uniform(-3, 3, n)
        detuning = rng.uniform(-10, 10, n)
        total = sum(_probabilities(theta, phi, j=j, detuning=detuning))
        assert np.max(np.abs(total - 1.0)) < 1e-12

        kappa = rng.uniform(0.01, 2.0, n)
        lossy = sum(_probabilities(theta, phi, j=j, kappa=kappa, detuning=detuning))
        assert np.all(lossy < 1.0)

    @settings(max_examples=300, deadline=None)
    @given(theta=angles, phi=angles, j=couplings, detuning=detunings)
    def test_conservation_property(self, theta, phi, j, detuning):
        *_, denominator = evaluate_full(theta, phi, 1.0, j, 0.0, detuning)
        assume(abs(denominator) > 1e-2)
        total = sum(_probabilities(theta, phi, j=j, detuning=detuning))
        assert abs(total - 1.0) < 1e-9

    @settings(max_examples=200, deadline=None)
    @given(theta=angles, phi=angles, j=couplings, detuning=detunings,
           kappa=st.floats(min_value=0.01, max_value=2.0))
    def test_dissipation_only_removes_flux(self, theta, phi, j, detuning, kappa):
        total = sum(_probabilities(theta, phi, j=j, kappa=kappa, detuning=detuning))
        assert total < 1.0


class TestCollectiveParams:

    def test_dark_plus_state(self):
        c = collective_params(TwoAtomParams(theta=PI, phi=PI, j=0.3))
        assert c.gamma1_plus == pytest.approx(0.0, abs=1e-15)
        assert c.gamma2_plus == pytest.approx(0.0, abs=1e-15)
        assert c.gamma1_minus == pytest.approx(2.0)
        assert c.gamma2_minus == pytest.approx(2.0)
        assert c.j_sigma == pytest.approx(0.3, abs=1e-15)

    def test_fully_degenerate(self):
        c = collective_params(TwoAtomParams(theta=PI / 2, phi=PI / 2, j=-2.0))
        assert c.j_sigma == pytest.approx(0.0, abs=1e-15)
        for rate in (c.gamma1_plus, c.gamma1_minus, c.gamma2_plus, c.gamma2_minus):
            assert rate == pytest.approx(1.0, abs=1e-15)
        assert c.lambda_plus == pytest.approx(-2j, abs=1e-15)
        assert c.lambda_minus == pytest.approx(-2j, abs=1e-15)

    def test_zero_phase(self):
        c = collective_params(TwoAtomParams(theta=0.0, phi=0.0))
        assert c.j_sigma == 0.0
        assert c.gamma1_plus == 2.0
        assert c.gamma1_minus == 0.0

    @given(theta=angles, phi=angles, j=couplings)
    def test_rate_bounds(self, theta, phi, j):
        c = collective_params(TwoAtomParams(theta=theta, phi=phi, j=j))
        for rate in (c.gamma1_plus, c.gamma1_minus, c.gamma2_plus, c.gamma2_minus):
            assert -1e-15 <= rate <= 2.0 + 1e-15
        assert c.lambda_plus.imag <= 0
        assert c.lambda_minus.imag <= 0
        assert c.lambda_plus.real == pytest.approx(c.j_sigma)
        assert c.lambda_minus.real == pytest.approx(-c.j_sigma)


class TestEigenAmplitudes:

    def test_matches_full_on_random_draws(self):
        rng = np.random.default_rng(11)
        n = 10_000
        theta = rng.uniform(0, 2 * PI, n)
        phi = rng.uniform(0, 2 * PI, n)
        j = rng.uniform(-3, 3, n)
        detuning = rng.uniform(-10, 10, n)
        full = evaluate_full(theta, phi, 1.0, j, 0.0, detuning)
        eigen = evaluate_eigen(theta, phi, 1.0, j, detuning)
        for f, e in zip(full[:4], eigen[:4]):
            assert np.max(np.abs(f - e)) < 1e-12

    def test_scalar_wrapper_matches_full(self):
        p = TwoAtomParams(theta=0.4, phi=2.9, j=1.3, detuning=-0.7)
        full, eigen = amplitudes_full(p), amplitudes_eigen(p)
        assert eigen.t_r1 == pytest.approx(full.t_r1, abs=1e-12)
        assert eigen.r_l2 == pytest.approx(full.r_l2, abs=1e-12)

    def test_rejects_dissipation(self):
        with pytest.raises(KappaUnsupportedError):
            amplitudes_eigen(TwoAtomParams(theta=1.0, phi=1.0, kappa=0.1))

    @pytest.mark.parametrize("detuning", [-6.0, -4.0, 0.0, 1.5, 4.0])
    def test_single_pole_when_plus_is_dark(self, detuning):
        # θ = φ = π, J_Σ = 0: only |−⟩ scatters, a Lorentzian of half-width 2Γ₁₋ = 4γ
        a = amplitudes_eigen(TwoAtomParams(theta=PI, phi=PI, detuning=detuning))
        lorentzian = 2 / (1j * detuning - 4)
        assert a.t_r2 == pytest.approx(lorentzian, abs=1e-12)
        assert a.r_l1 == pytest.approx(lorentzian, abs=1e-12)
        assert a.r_l2 == pytest.approx(lorentzian, abs=1e-12)
        assert a.t_r1 == pytest.approx(1 + lorentzian, abs=1e-12)
        assert abs(a.t_r2) ** 2 == pytest.approx(4 / (detuning ** 2 + 16), abs=1e-12)


class TestMatchedAmplitudes:

    def test_resonant_transfer(self):
        a = amplitudes_matched(TwoAtomParams(theta=PI / 2, phi=PI / 2, j=-2.0))
        assert a.t_r2 == pytest.approx(-1.0, abs=1e-15)
        assert a.t_r1 == pytest.approx(0.0, abs=1e-15)
        assert a.r_l1 == pytest.approx(0.0, abs=1e-15)
        assert a.r_l2 == pytest.approx(0.0, abs=1e-15)

    def test_half_width_point(self):
        a = amplitudes_matched(TwoAtomParams(theta=PI / 2, phi=PI / 2, j=-2.0, detuning=2.0))
        assert abs(a.t_r2) ** 2 == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("detuning", [-7.5, -1.0, 0.0, 0.3, 4.0])
    def test_agrees_with_full(self, detuning):
        theta = PI / 4
        p = TwoAtomParams(theta=theta, phi=theta, j=float(degeneracy_coupling(theta, theta, 1.0)),
                          detuning=detuning)
        matched, full = amplitudes_matched(p), amplitudes_full(p)
        for name in ("t_r1", "r_l1", "t_r2", "r_l2"):
            assert getattr(matched, name) == pytest.approx(getattr(full, name), abs=1e-12)

    def test_identities_hold(self):
        a = amplitudes_matched(TwoAtomParams(theta=1.0, phi=1.0, j=-2 * math.sin(1.0), detuning=0.8))
        assert a.r_l1 == a.r_l2
        assert a.t_r1 == pytest.approx(1 + a.t_r2, abs=1e-15)

    def test_precondition_lists_every_failure(self):
        p = TwoAtomParams(theta=PI / 2, phi=PI / 3, j=0.0, kappa=0.1)
        with pytest.raises(PreconditionViolatedError) as excinfo:
            amplitudes_matched(p)
        assert set(excinfo.value.failed) == {
            "phi must equal theta", "kappa must be zero", "j must equal -2*gamma*sin(theta)"}

    def test_theta_pi_is_excluded(self):
        assert "theta must differ from pi" in matched_failures(TwoAtomParams(theta=PI, phi=PI))

    def test_dark_minus_state_is_skipped(self):
        p = TwoAtomParams(theta=0.0, phi=0.0, j=0.0)
        matched, full = amplitudes_matched(p), amplitudes_full(p)
        for name in ("t_r1", "r_l1", "t_r2", "r_l2"):
            assert getattr(matched, name) == pytest.approx(getattr(full, name), abs=1e-15)


class TestDegeneracyCoupling:

    @pytest.mark.parametrize("theta, phi, expected", [
        (PI / 2, PI / 2, -2.0),
        (PI / 2, 3 * PI / 2, 0.0),
        (PI, PI, 0.0),
    ])
    def test_values(self, theta, phi, expected):
        assert degeneracy_coupling(theta, phi, 1.0) == pytest.approx(expected, abs=1e-15)

    @given(theta=angles, phi=angles)
    def test_cancels_exchange(self, theta, phi):
        j = float(degeneracy_coupling(theta, phi, 1.0))
        assert collective_params(TwoAtomParams(theta=theta, phi=phi, j=j)).j_sigma == pytest.approx(0.0, abs=1e-12)
