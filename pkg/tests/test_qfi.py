import math

import numpy as np
import pytest

from nhsense.errors import DomainError
from nhsense.evolution import HamiltonianFamily, propagate
from nhsense.operators import SIGMA_X, SIGMA_Z, variance
from nhsense.pseudo_hermitian import PseudoHermitianParams, hamiltonian_family, probe_state
from nhsense.pt_ep import PtEpParams
from nhsense.qfi import (
    cramer_rao, channel_bound_uncertainty, qfi_fidelity_oracle, qfi_pure, qfi_series,
)

from conftest import KET0, KET_PLUS, random_family, random_hermitian, random_state

# dilated sensor at eps=0.1, omega=1, lam=0, t=tau: closed form
# 4 b^2 tau^2 / Omega^2 + 4 c^2 / Omega^4 with sin(Omega tau) = 1
F_EXAMPLE = 13.167023258332254
TAU_EXAMPLE = 2.368064562748707


class TestQfiPure:
    def test_zero_generator(self):
        assert qfi_pure(np.zeros((2, 2)), KET0) == 0.0

    def test_multiplicative_sigma_x(self):
        for t in (0.5, 1.0, 2.0):
            assert qfi_pure(t * SIGMA_X, KET0) == pytest.approx(4 * t**2, rel=1e-14)

    def test_example_value_from_propagation(self):
        fam = hamiltonian_family(0.1, 1.0)
        rec = propagate(fam, 0.0, np.array([0.0, TAU_EXAMPLE]), tol=1e-11)
        got = qfi_pure(rec.h[-1], probe_state(0.1))
        assert got == pytest.approx(F_EXAMPLE, rel=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            qfi_pure(SIGMA_X, np.array([1, 0, 0, 0], dtype=complex))


class TestFidelityOracle:
    def test_zero_encoding(self, rng):
        h = random_hermitian(rng, 2)
        fam = HamiltonianFamily(dim=2, evaluate=lambda lam, t: h,
                                evaluate_dlambda=lambda lam, t: np.zeros((2, 2)))
        assert abs(qfi_fidelity_oracle(fam, 0.0, KET0, 1.0)) < 1e-8

    def test_commuting_closed_form(self):
        # H = lam sigma_z on |+>: F = 4 t^2 Var(sigma_z) = 4
        fam = HamiltonianFamily(dim=2, evaluate=lambda lam, t: lam * SIGMA_Z,
                                evaluate_dlambda=lambda lam, t: SIGMA_Z)
        got = qfi_fidelity_oracle(fam, 0.3, KET_PLUS, 1.0)
        assert got == pytest.approx(4.0, abs=1e-4)

    def test_example_grid_point(self):
        fam = hamiltonian_family(0.1, 1.0)
        got = qfi_fidelity_oracle(fam, 0.0, probe_state(0.1), TAU_EXAMPLE)
        assert got == pytest.approx(F_EXAMPLE, rel=1e-4)

    def test_agrees_with_generator_route(self, rng):
        # the second difference amplifies integration noise, so the step is
        # kept large enough that the 10 d^2 truncation budget dominates
        for dim in (2, 4):
            fam = random_family(rng, dim)
            psi0 = random_state(rng, dim)
            rec = propagate(fam, 0.2, np.array([0.0, 1.2]), tol=1e-12)
            f_gen = qfi_pure(rec.h[-1], psi0)
            for dlam in (3e-3, 1e-2):
                f_fid = qfi_fidelity_oracle(fam, 0.2, psi0, 1.2, dlam=dlam)
                assert abs(f_gen - f_fid) <= max(1e-6, 10 * dlam**2)


class TestQfiSeries:
    def test_constant_sigma_x_channel_bound(self, rng):
        # H = lam sigma_x + sigma_z: sqrt(F) <= 2t, equality only for optimal probes
        fam = HamiltonianFamily(dim=2, evaluate=lambda lam, t: lam * SIGMA_X + SIGMA_Z,
                                evaluate_dlambda=lambda lam, t: SIGMA_X)
        times = np.linspace(0.0, 2.0, 6)
        for _ in range(5):
            psi0 = random_state(rng, 2)
            series = qfi_series(propagate(fam, 0.1, times), psi0, fam)
            assert np.all(np.sqrt(series.qfi) <= 2 * times + 1e-8)
            assert np.allclose(np.sqrt(series.channel_bound), 2 * times, atol=1e-9)

    def test_example_rate_everywhere_in_band(self):
        fam = hamiltonian_family(0.1, 1.0)
        times = np.linspace(0.0, 2 * TAU_EXAMPLE, 12)
        series = qfi_series(propagate(fam, 0.0, times, tol=1e-11), probe_state(0.1), fam)
        assert np.all(np.abs(series.sqrt_qfi_rate) <= 2.0 + 1e-6)
        assert np.allclose(series.rate_bound, 2.0, atol=1e-12)

    def test_example_rate_matches_closed_form(self):
        from nhsense.pseudo_hermitian import qfi_rate_closed
        p = PseudoHermitianParams(0.1, 1.0, 0.0)
        fam = hamiltonian_family(0.1, 1.0)
        times = np.array([0.0, TAU_EXAMPLE / 2, TAU_EXAMPLE])
        series = qfi_series(propagate(fam, 0.0, times, tol=1e-11), probe_state(0.1), fam)
        for k in (1, 2):
            assert series.sqrt_qfi_rate[k] == pytest.approx(qfi_rate_closed(p, times[k]), abs=1e-6)

    def test_qfi_zero_at_start_and_nonnegative(self, rng):
        fam = random_family(rng, 4)
        series = qfi_series(propagate(fam, 0.0, np.linspace(0.0, 1.5, 6)), random_state(rng, 4), fam)
        assert series.qfi[0] == pytest.approx(0.0, abs=1e-10)
        assert np.all(series.qfi >= -1e-10)
        assert series.rate_by_difference[0]

    def test_channel_bound_monotone(self, rng):
        fam = random_family(rng, 2)
        series = qfi_series(propagate(fam, 0.3, np.linspace(0.0, 2.0, 8)), random_state(rng, 2), fam)
        assert np.all(np.diff(series.channel_bound) >= -1e-12)

    def test_commuting_family_closed_form(self, rng):
        # [H0, H1] = 0: F = 4 t^2 Var(H1) exactly
        h0 = random_hermitian(rng, 3)
        h1 = 0.7 * h0 - 0.2 * h0 @ h0
        fam = HamiltonianFamily(dim=3, evaluate=lambda lam, t: lam * h1 + h0,
                                evaluate_dlambda=lambda lam, t: h1)
        psi0 = random_state(rng, 3)
        times = np.linspace(0.0, 2.0, 5)
        series = qfi_series(propagate(fam, 0.4, times, tol=1e-11), psi0, fam)
        expected = 4 * times**2 * variance(h1, psi0)
        assert np.allclose(series.qfi, expected, rtol=1e-8, atol=1e-10)


class TestCramerRao:
    def test_simple(self):
        assert cramer_rao(4.0, 1) == pytest.approx(0.5, rel=1e-15)

    def test_zero_information(self):
        assert cramer_rao(0.0, 10) == math.inf

    def test_example_arithmetic(self):
        assert cramer_rao(F_EXAMPLE, 100) == pytest.approx(0.027558539550262964, rel=1e-12)

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            cramer_rao(-1.0, 1)
        with pytest.raises(DomainError):
            cramer_rao(1.0, 0)


class TestChannelBoundUncertainty:
    def test_constant_sigma_x(self):
        fam = HamiltonianFamily(dim=2, evaluate=lambda lam, t: lam * SIGMA_X,
                                evaluate_dlambda=lambda lam, t: SIGMA_X)
        t_final = TAU_EXAMPLE
        assert channel_bound_uncertainty(fam, 0.0, t_final, 1) == pytest.approx(
            1.0 / (2 * t_final), rel=1e-10)
        assert channel_bound_uncertainty(fam, 0.0, t_final, 4) == pytest.approx(
            1.0 / (4 * t_final), rel=1e-10)

    def test_zero_encoding_infinite(self):
        fam = HamiltonianFamily(dim=2, evaluate=lambda lam, t: SIGMA_Z,
                                evaluate_dlambda=lambda lam, t: np.zeros((2, 2)))
        assert channel_bound_uncertainty(fam, 0.0, 1.0, 1) == math.inf

    def test_ep_drive_analytic_integral(self):
        # width of the drive derivative is delta s |sin(wd s)|; for wd T <= pi
        # the integral is delta [sin(wd T) - wd T cos(wd T)] / wd^2
        p = PtEpParams(J=1.0, Gamma=0.3, omega=4.0, delta=0.05, omega_delta=0.8)

        def ev(lam, t):
            return 0.5 * p.delta * math.cos(lam * t) * (np.eye(2) - SIGMA_Z)

        def dev(lam, t):
            return -0.5 * p.delta * t * math.sin(lam * t) * (np.eye(2) - SIGMA_Z)

        fam = HamiltonianFamily(dim=2, evaluate=ev, evaluate_dlambda=dev)
        wd_t = p.omega_delta * p.T
        assert wd_t <= math.pi
        integral = p.delta * (math.sin(wd_t) - wd_t * math.cos(wd_t)) / p.omega_delta**2
        assert channel_bound_uncertainty(fam, p.omega_delta, p.T, 1) == pytest.approx(
            1.0 / integral, rel=1e-9)
