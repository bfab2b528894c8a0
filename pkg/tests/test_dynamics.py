"""Nonlinear acceleration, quadratic source and frozen-coefficient linearization."""

import numpy as np
import pytest

from blackstock import (
    Grid,
    MediumParams,
    SimState,
    assemble_f,
    linearized_acceleration,
    nonlinear_acceleration,
    padded_field_values,
    to_physical,
)

from .helpers import sine_projection_oracle


@pytest.fixture
def g16():
    return Grid(extents=(np.pi,), modes=(16,))


def random_state(grid, seed):
    rng = np.random.default_rng(seed)
    return SimState(
        psi=grid.field(rng.standard_normal(grid.modes)),
        v=grid.field(rng.standard_normal(grid.modes)),
    )


class TestMediumParams:
    def test_defaults_valid(self):
        p = MediumParams()
        assert p.c == 1.0 and p.b == 1.0

    def test_negative_diffusivity_rejected(self):
        with pytest.raises(ValueError, match="sound diffusivity must be positive"):
            MediumParams(b=0.0)

    def test_negative_speed_rejected(self):
        with pytest.raises(ValueError, match="sound speed must be positive"):
            MediumParams(c=-1.0)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            MediumParams(k=np.nan)


class TestNonlinearAcceleration:
    def test_zero_state(self, g16):
        p = MediumParams(c=1, b=1, k=1, sigma=1)
        state = SimState(psi=g16.zeros(), v=g16.zeros())
        assert np.all(nonlinear_acceleration(state, p).coeffs == 0.0)

    @pytest.mark.parametrize("b,k,sigma", [(1.0, 0.0, 0.0), (2.5, 3.0, -1.0)])
    def test_eigenfunction_with_zero_velocity(self, g16, b, k, sigma):
        # v = 0 kills every quadratic term; acceleration is c^2 Delta psi = -sin x.
        p = MediumParams(c=1.0, b=b, k=k, sigma=sigma)
        state = SimState(psi=g16.basis_field((1,)), v=g16.zeros())
        acc = nonlinear_acceleration(state, p)
        expected = np.zeros(16)
        expected[0] = -1.0
        assert np.allclose(acc.coeffs, expected, atol=1e-12)

    def test_pointwise_value_at_center(self):
        # psi = v = sin x, c = b = k = sigma = 1: the continuum acceleration is
        # -2 sin x - 2 cos 2x, which vanishes at x = pi/2.  The sigma term has a
        # nonzero boundary trace, so its sine projection converges pointwise at
        # O(1/N); check the oracle match exactly and the symbolic limit by rate.
        p = MediumParams(c=1, b=1, k=1, sigma=1)
        center_values = {}
        for N in (63, 127):
            g = Grid(extents=(np.pi,), modes=(N,))
            e1 = g.basis_field((1,))
            acc = nonlinear_acceleration(SimState(psi=e1, v=e1), p)
            values = to_physical(acc)
            center = np.argmin(np.abs(g.nodes[0] - np.pi / 2))
            assert g.nodes[0][center] == pytest.approx(np.pi / 2, abs=1e-14)
            center_values[N] = values[center]
            oracle = sine_projection_oracle(
                np.pi, lambda x: -2 * np.sin(x) - 2 * np.cos(2 * x), N
            )
            assert np.allclose(acc.coeffs, oracle, atol=1e-9)
        assert abs(center_values[63]) < 0.05
        assert abs(center_values[127]) < 0.6 * abs(center_values[63])

    def test_linear_in_state_when_quadratics_off(self, g16):
        p = MediumParams(c=1.3, b=0.7)
        s1 = random_state(g16, 1)
        s2 = random_state(g16, 2)
        combo = SimState(
            psi=s1.psi + 2.0 * s2.psi,
            v=s1.v + 2.0 * s2.v,
        )
        acc = nonlinear_acceleration(combo, p).coeffs
        parts = (
            nonlinear_acceleration(s1, p).coeffs
            + 2.0 * nonlinear_acceleration(s2, p).coeffs
        )
        assert np.allclose(acc, parts, atol=1e-12)


class TestAssembleF:
    def test_vanishes_without_nonlinearity(self, g16):
        p = MediumParams(c=2.0, b=0.5)
        state = random_state(g16, 3)
        assert np.all(assemble_f(state, p).coeffs == 0.0)

    def test_k_term_against_quadrature(self, g16):
        # psi = v = sin x, c = k = 1, sigma = 0: f = -2 sin x (-sin x) = 2 sin^2 x
        p = MediumParams(c=1, b=1, k=1, sigma=0)
        e1 = g16.basis_field((1,))
        f = assemble_f(SimState(psi=e1, v=e1), p)
        oracle = sine_projection_oracle(np.pi, lambda x: 2 * np.sin(x) ** 2, 16)
        assert np.allclose(f.coeffs, oracle, atol=1e-10)

    def test_sigma_term_against_quadrature(self, g16):
        # psi = v = sin x, k = 0, sigma = 1: f = -2 cos^2 x
        p = MediumParams(c=1, b=1, k=0, sigma=1)
        e1 = g16.basis_field((1,))
        f = assemble_f(SimState(psi=e1, v=e1), p)
        oracle = sine_projection_oracle(np.pi, lambda x: -2 * np.cos(x) ** 2, 16)
        assert np.allclose(f.coeffs, oracle, atol=1e-10)

    def test_decomposition_identity(self, g16):
        # acceleration = c^2 Delta psi + b Delta v + f, modewise, on random states
        p = MediumParams(c=1.7, b=0.9, k=0.8, sigma=-1.2)
        lam = g16.laplacian_eigenvalues
        for seed in range(100):
            state = random_state(g16, seed)
            acc = nonlinear_acceleration(state, p).coeffs
            linear = lam * (p.c**2 * state.psi.coeffs + p.b * state.v.coeffs)
            f = assemble_f(state, p).coeffs
            assert np.allclose(acc, linear + f, atol=1e-11)

    def test_2d_source(self):
        g = Grid(extents=(np.pi, np.pi), modes=(8, 8))
        p = MediumParams(c=1, b=1, k=1, sigma=0)
        e = g.basis_field((1, 1))
        f = assemble_f(SimState(psi=e, v=e), p)
        # f = -2 v Delta psi = 4 sin^2 x sin^2 y; separable oracle
        o1 = sine_projection_oracle(np.pi, lambda x: np.sin(x) ** 2, 8)
        assert np.allclose(f.coeffs, 4.0 * np.outer(o1, o1), atol=1e-10)


class TestLinearizedAcceleration:
    def test_zero_alpha_is_linear_operator(self, g16):
        p = MediumParams(c=1.2, b=0.8, k=5.0, sigma=3.0)
        state = random_state(g16, 4)
        acc = linearized_acceleration(state, g16.zeros(), None, p).coeffs
        lam = g16.laplacian_eigenvalues
        expected = lam * (p.c**2 * state.psi.coeffs + p.b * state.v.coeffs)
        assert np.allclose(acc, expected, atol=1e-12)

    def test_alpha_equals_v_recovers_nonlinear(self, g16):
        p = MediumParams(c=1, b=1, k=1, sigma=1)
        for seed in range(10):
            state = random_state(g16, seed + 50)
            lin = linearized_acceleration(state, state.v, None, p).coeffs
            non = nonlinear_acceleration(state, p).coeffs
            assert np.allclose(lin, non, atol=1e-12)

    def test_forcing_enters_additively(self, g16):
        p = MediumParams(c=1, b=1, k=1, sigma=1)
        state = random_state(g16, 60)
        alpha = random_state(g16, 61).v
        ftilde = random_state(g16, 62).psi
        without = linearized_acceleration(state, alpha, None, p).coeffs
        with_f = linearized_acceleration(state, alpha, ftilde, p).coeffs
        assert np.allclose(with_f - without, ftilde.coeffs, atol=1e-13)

    def test_frozen_coefficient_term_against_quadrature(self, g16):
        # psi = sin x, v = 0, alpha = sin x, c = k = 1, sigma = 0:
        # output = c^2 Delta psi + 2 sin^2 x projected
        p = MediumParams(c=1, b=1, k=1, sigma=0)
        e1 = g16.basis_field((1,))
        state = SimState(psi=e1, v=g16.zeros())
        acc = linearized_acceleration(state, e1, None, p).coeffs
        source = sine_projection_oracle(np.pi, lambda x: 2 * np.sin(x) ** 2, 16)
        expected = source.copy()
        expected[0] -= 1.0
        assert np.allclose(acc, expected, atol=1e-10)

    def test_grid_mismatch(self, g16):
        other = Grid(extents=(np.pi,), modes=(8,))
        p = MediumParams()
        state = random_state(g16, 70)
        with pytest.raises(ValueError, match="different grid"):
            linearized_acceleration(state, other.zeros(), None, p)


class TestBoundaryPreservation:
    def test_outputs_vanish_on_boundary(self, g16):
        p = MediumParams(c=1, b=1, k=2, sigma=-1)
        state = random_state(g16, 80)
        acc = nonlinear_acceleration(state, p)
        vals = padded_field_values(acc)
        assert vals[0] == 0.0 and vals[-1] == 0.0
