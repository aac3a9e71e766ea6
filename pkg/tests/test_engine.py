"""Tests for the filter engine: evolution, generator, edge channel, oracles."""

import math

import numpy as np
import pytest

import oracles
from crossdiff.engine import (
    FieldPair,
    FilterConfig,
    InitialKind,
    apply_generator,
    complex_diffusion_oracle,
    edge_map,
    evolve,
    initial_distribution,
    scale_to_time,
    small_theta_oracle,
    smoothing_oracle,
)
from crossdiff.errors import ZeroCouplingError
from crossdiff.grids import Field, Grid
from crossdiff.matrices import validate_matrix
from crossdiff.sigio import make_test_pattern


def _random_pair(rng, grid, scale=1.0):
    return FieldPair(
        Field(grid, scale * rng.normal(size=grid.shape)),
        Field(grid, scale * rng.normal(size=grid.shape)),
    )


def _random_config(rng, grid):
    d = validate_matrix(*oracles.random_valid_entries(rng))
    p = rng.uniform(0.5, 4.0)
    return FilterConfig(d, p, InitialKind.PLAIN, grid)


class TestInitialDistribution:
    def test_plain(self, rng):
        g = Grid.line(4.0, 16)
        f = Field(g, rng.normal(size=16))
        pair = initial_distribution(f, 0)
        assert pair.u is f
        assert np.all(pair.v.values == 0.0)

    def test_gradient_of_constant(self):
        g = Grid.square(4.0, 16)
        pair = initial_distribution(Field(g, np.full(g.shape, 3.0)), 1)
        assert np.abs(pair.v.values).max() < 1e-12

    def test_gradient_laplacian_mode(self):
        g = Grid.line(math.pi, 128)
        x = g.coordinates(0)
        k = 2.0
        pair = initial_distribution(Field(g, np.sin(k * x)), 2)
        want = k * k * np.abs(k * np.cos(k * x)) * np.sin(k * x)
        assert np.abs(pair.v.values - want).max() < 1e-8

    def test_rejects_unknown_kind(self):
        g = Grid.line(4.0, 16)
        with pytest.raises(ValueError):
            initial_distribution(Field(g, np.zeros(16)), 7)


class TestEvolve:
    def test_constant_pair_is_fixed(self, rng):
        g = Grid.square(8.0, 32)
        pair = FieldPair(Field(g, np.full(g.shape, 3.0)), Field(g, np.full(g.shape, -1.5)))
        cfg = _random_config(rng, g)
        out = evolve(pair, cfg, 4.2)
        assert np.abs(out.u.values - 3.0).max() < 1e-12
        assert np.abs(out.v.values + 1.5).max() < 1e-12

    def test_zero_time_round_trip(self, rng):
        g = Grid.square(8.0, 32)
        pair = _random_pair(rng, g)
        out = evolve(pair, _random_config(rng, g), 0.0)
        assert np.abs(out.u.values - pair.u.values).max() < 1e-12

    def test_diagonal_pure_mode(self):
        g = Grid.line(math.pi, 64)
        x = g.coordinates(0)
        k, t, p = 3.0, 0.7, 2.0
        d = validate_matrix(2, 0, 0, 1)  # lambda_plus = d11 = 2
        pair = initial_distribution(Field(g, np.sin(k * x)), 0)
        out = evolve(pair, FilterConfig(d, p, 0, g), t)
        want = math.exp(-t * k**p * 2.0) * np.sin(k * x)
        assert np.abs(out.u.values - want).max() < 1e-12
        assert np.abs(out.v.values).max() < 1e-14

    def test_matches_complex_diffusion(self, rng):
        g = Grid.square(6.0, 48)
        f = Field(g, rng.normal(size=g.shape))
        nu, mu, t = 1.0, 0.5, 1.3
        d = validate_matrix(nu, -mu, mu, nu)
        out = evolve(initial_distribution(f, 0), FilterConfig(d, 2.0, 0, g), t)
        want = complex_diffusion_oracle(f, nu, mu, t)
        assert oracles.rel_err(out.u.values, want.u.values) < 1e-10
        assert oracles.rel_err(out.v.values, want.v.values) < 1e-10

    def test_semigroup(self, rng):
        g = Grid.square(5.0, 32)
        for _ in range(5):
            pair = _random_pair(rng, g)
            cfg = _random_config(rng, g)
            t1, t2 = rng.uniform(0.0, 2.0, size=2)
            two_step = evolve(evolve(pair, cfg, t1), cfg, t2)
            one_step = evolve(pair, cfg, t1 + t2)
            assert oracles.rel_err(two_step.u.values, one_step.u.values) < 1e-10
            assert oracles.rel_err(two_step.v.values, one_step.v.values) < 1e-10

    def test_grey_shift_invariance(self, rng):
        g = Grid.square(5.0, 32)
        pair = _random_pair(rng, g)
        cfg = _random_config(rng, g)
        shifted = FieldPair(
            Field(g, pair.u.values + 12.0), Field(g, pair.v.values - 3.0)
        )
        out = evolve(pair, cfg, 1.7)
        out_shifted = evolve(shifted, cfg, 1.7)
        assert np.abs(out_shifted.u.values - out.u.values - 12.0).max() < 1e-10
        assert np.abs(out_shifted.v.values - out.v.values + 3.0).max() < 1e-10

    def test_mean_preservation(self, rng):
        g = Grid.square(5.0, 32)
        pair = _random_pair(rng, g, scale=100.0)
        cfg = _random_config(rng, g)
        for t in (0.1, 1.0, 10.0):
            out = evolve(pair, cfg, t)
            for before, after in ((pair.u, out.u), (pair.v, out.v)):
                assert abs(after.values.mean() - before.values.mean()) < 1e-10 * max(
                    1.0, abs(before.values.mean())
                )

    def test_rotational_invariance(self, rng):
        g = Grid.square(5.0, 32)
        pair = _random_pair(rng, g)
        cfg = _random_config(rng, g)
        rotated = FieldPair(
            Field(g, np.rot90(pair.u.values).copy()),
            Field(g, np.rot90(pair.v.values).copy()),
        )
        a = evolve(rotated, cfg, 0.9)
        b = evolve(pair, cfg, 0.9)
        assert oracles.rel_err(a.u.values, np.rot90(b.u.values)) < 1e-10
        assert oracles.rel_err(a.v.values, np.rot90(b.v.values)) < 1e-10

    def test_flat_kernel_decay(self, rng):
        g = Grid.line(math.pi, 64)  # xi_min = 1
        values = rng.normal(size=64)
        values -= values.mean()
        pair = FieldPair(Field(g, values), Field(g, np.zeros(64)))
        d = validate_matrix(1, 0.1, 1, 1.1)
        lam_minus = d.eigenvalues[1].real
        t = 40.0 / lam_minus
        out = evolve(pair, FilterConfig(d, 2.0, 0, g), t)
        bound = 1e-8 * np.abs(values).max()
        assert np.abs(out.u.values).max() < bound
        assert np.abs(out.v.values).max() < bound

    def test_generator_consistency_first_order(self):
        g = Grid.square(math.pi, 32)
        x = g.coordinates(0)[:, None]
        y = g.coordinates(1)[None, :]
        pair = FieldPair(
            Field(g, np.sin(2 * x) * np.cos(y)), Field(g, np.cos(x) + np.sin(y))
        )
        d = validate_matrix(1, 0.3, 0.5, 1.2)
        cfg = FilterConfig(d, 2.0, 0, g)
        gen = apply_generator(pair, d, 2.0)

        def difference_error(h):
            out = evolve(pair, cfg, h)
            du = (out.u.values - pair.u.values) / h - gen.u.values
            dv = (out.v.values - pair.v.values) / h - gen.v.values
            return max(np.abs(du).max(), np.abs(dv).max())

        ratio = difference_error(2e-3) / difference_error(1e-3)
        assert 1.8 < ratio < 2.2

    def test_non_square_grid(self, rng):
        grid = Grid((4.0, 9.0), (32, 48))
        pair = _random_pair(rng, grid)
        cfg = FilterConfig(validate_matrix(1, 0.9, 1, 1), 2.0, 0, grid)
        two_step = evolve(evolve(pair, cfg, 0.4), cfg, 0.6)
        one_step = evolve(pair, cfg, 1.0)
        assert oracles.rel_err(two_step.u.values, one_step.u.values) < 1e-10
        assert abs(one_step.u.values.mean() - pair.u.values.mean()) < 1e-10

    def test_time_validation(self, rng):
        g = Grid.line(4.0, 16)
        pair = _random_pair(rng, g)
        cfg = _random_config(rng, g)
        with pytest.raises(ValueError):
            evolve(pair, cfg, -1.0)
        with pytest.raises(ValueError):
            evolve(pair, cfg, math.inf)

    def test_grid_mismatch(self, rng):
        pair = _random_pair(rng, Grid.line(4.0, 16))
        cfg = _random_config(rng, Grid.line(4.0, 32))
        with pytest.raises(ValueError):
            evolve(pair, cfg, 1.0)


class TestApplyGenerator:
    def test_constant_pair_maps_to_zero(self):
        g = Grid.square(4.0, 16)
        pair = FieldPair(Field(g, np.full(g.shape, 2.0)), Field(g, np.full(g.shape, 5.0)))
        out = apply_generator(pair, validate_matrix(1, 0.5, 0.25, 1), 2.0)
        assert np.abs(out.u.values).max() < 1e-12
        assert np.abs(out.v.values).max() < 1e-12

    @pytest.mark.parametrize("p", [2.0, 3.0])
    def test_pure_mode_mixing(self, p):
        g = Grid.line(math.pi, 64)
        x = g.coordinates(0)
        k = 2.0
        d = validate_matrix(1, 0.25, 0.75, 1)
        pair = initial_distribution(Field(g, np.sin(k * x)), 0)
        out = apply_generator(pair, d, p)
        assert np.abs(out.u.values + k**p * d.d11 * np.sin(k * x)).max() < 1e-10
        assert np.abs(out.v.values + k**p * d.d21 * np.sin(k * x)).max() < 1e-10

    def test_matches_finite_differences_second_order(self):
        d = validate_matrix(1, 0.4, 0.6, 1.3)

        def fd_gap(n):
            g = Grid.square(math.pi, n)
            x = g.coordinates(0)[:, None]
            y = g.coordinates(1)[None, :]
            u = np.sin(2 * x) * np.cos(y)
            v = np.cos(x) * np.sin(y)
            pair = FieldPair(Field(g, u), Field(g, v))
            got = apply_generator(pair, d, 2.0)
            lap_u = oracles.laplacian_5point(u, g.spacings)
            lap_v = oracles.laplacian_5point(v, g.spacings)
            want_u = d.d11 * lap_u + d.d12 * lap_v
            want_v = d.d21 * lap_u + d.d22 * lap_v
            return max(
                np.abs(got.u.values - want_u).max(), np.abs(got.v.values - want_v).max()
            )

        ratio = fd_gap(32) / fd_gap(64)
        assert 3.5 < ratio < 4.5


class TestEdgeMap:
    def test_constant_input_is_flat(self):
        g = Grid.square(6.0, 32)
        cfg = FilterConfig(validate_matrix(1, 0.1, 1.99, 1.1), 2.0, 0, g)
        out = edge_map(Field(g, np.full(g.shape, 9.0)), cfg, 0.5)
        assert np.abs(out.values).max() < 1e-12

    def test_exact_identity_for_defective_matrix(self):
        # d = [[1, 0], [c, 1]] makes the channel exactly t*A of the smoothed input
        g = Grid.square(8.0, 48)
        f = Field(g, make_test_pattern("gaussian", g).values)
        cfg = FilterConfig(validate_matrix(1, 0, 1.99, 1), 2.0, 0, g)
        got = edge_map(f, cfg, 0.4)
        want = small_theta_oracle(f, 2.0, 2.0, 0.4)
        assert oracles.rel_err(got.values, want.values) < 1e-10

    def test_small_coupling_error_scales_linearly(self):
        g = Grid.square(16.0, 64)
        f = Field(g, make_test_pattern("gaussian", g).values)
        t = 0.1
        want = small_theta_oracle(f, 2.0, 2.0, t)
        errors = []
        for eps in (1e-2, 2.5e-3):
            cfg = FilterConfig(validate_matrix(1, eps, 1.99, 1), 2.0, 0, g)
            got = edge_map(f, cfg, t)
            errors.append(oracles.rel_err(got.values, want.values))
        assert 3.0 < errors[0] / errors[1] < 5.0

    def test_zero_coupling_raises(self):
        g = Grid.line(4.0, 16)
        cfg = FilterConfig(validate_matrix(1, 0.5, 0, 1), 2.0, 0, g)
        with pytest.raises(ZeroCouplingError):
            edge_map(Field(g, np.zeros(16)), cfg, 0.5)

    def test_requires_plain_kind(self):
        g = Grid.line(4.0, 16)
        cfg = FilterConfig(validate_matrix(1, 0.5, 1, 1), 2.0, 1, g)
        with pytest.raises(ValueError):
            edge_map(Field(g, np.zeros(16)), cfg, 0.5)


class TestScalarOracles:
    def test_smoothing_zero_time(self, rng):
        g = Grid.line(4.0, 32)
        f = Field(g, rng.normal(size=32))
        out = smoothing_oracle(f, 2.0, 2.0, 0.0)
        assert np.abs(out.values - f.values).max() < 1e-12

    def test_smoothing_heat_mode(self):
        g = Grid.line(math.pi, 64)
        x = g.coordinates(0)
        k, t = 3.0, 0.2
        out = smoothing_oracle(Field(g, np.sin(k * x)), 2.0, 2.0, t)
        assert np.abs(out.values - math.exp(-t * k * k) * np.sin(k * x)).max() < 1e-12

    def test_smoothing_fractional_mode(self):
        g = Grid.line(math.pi, 64)
        x = g.coordinates(0)
        out = smoothing_oracle(Field(g, np.sin(2.0 * x)), 1.0, 3.0, 1.0)
        assert np.abs(out.values - math.exp(-4.0) * np.sin(2.0 * x)).max() < 1e-12

    def test_small_theta_zero_cases(self, rng):
        g = Grid.line(4.0, 32)
        constant = Field(g, np.full(32, 5.0))
        assert np.abs(small_theta_oracle(constant, 2.0, 2.0, 1.0).values).max() < 1e-12
        f = Field(g, rng.normal(size=32))
        assert np.abs(small_theta_oracle(f, 2.0, 2.0, 0.0).values).max() < 1e-12

    def test_small_theta_mode(self):
        g = Grid.line(math.pi, 64)
        x = g.coordinates(0)
        k, q, p, t = 2.0, 1.5, 3.0, 0.3
        out = small_theta_oracle(Field(g, np.sin(k * x)), q, p, t)
        scale = -t * k**p * math.exp(-0.5 * q * t * k**p)
        assert np.abs(out.values - scale * np.sin(k * x)).max() < 1e-12


class TestComplexDiffusionOracle:
    def test_zero_time(self, rng):
        g = Grid.square(4.0, 16)
        f = Field(g, rng.normal(size=g.shape))
        out = complex_diffusion_oracle(f, 1.0, 0.5, 0.0)
        assert np.abs(out.u.values - f.values).max() < 1e-12
        assert np.abs(out.v.values).max() < 1e-12

    def test_vanishing_rotation_limit(self, rng):
        g = Grid.square(4.0, 32)
        f = Field(g, rng.normal(size=g.shape))
        out = complex_diffusion_oracle(f, 1.0, 1e-12, 0.7)
        heat = smoothing_oracle(f, 2.0, 2.0, 0.7)
        assert np.abs(out.v.values).max() < 1e-9
        assert oracles.rel_err(out.u.values, heat.values) < 1e-9

    def test_matches_spatial_quadrature(self):
        g = Grid.square(32.0, 64)  # spacing 1
        f = make_test_pattern("gaussian", g)
        nu, mu, t = 1.0, 0.5, 8.0
        sigma = math.sqrt(2.0 * t * (nu * nu + mu * mu) / nu)
        assert sigma >= 4.0 * g.spacings[0]
        got = complex_diffusion_oracle(f, nu, mu, t)
        quad = oracles.complex_kernel_quadrature(
            f.values, g.coordinates(0), g.spacings[0], nu, mu, t
        )
        assert oracles.rel_err(got.u.values, quad.real) < 1e-6
        assert oracles.rel_err(got.v.values, quad.imag) < 1e-6

    def test_rejects_bad_nu(self):
        g = Grid.line(4.0, 16)
        with pytest.raises(ValueError):
            complex_diffusion_oracle(Field(g, np.zeros(16)), 0.0, 0.5, 1.0)


class TestScaleToTime:
    def test_values(self):
        assert scale_to_time(0.0, 2.0) == 0.0
        assert scale_to_time(2.0, 2.0) == 4.0
        assert scale_to_time(2.0, 3.0) == 8.0

    def test_validation(self):
        with pytest.raises(ValueError):
            scale_to_time(-1.0, 2.0)
        with pytest.raises(ValueError):
            scale_to_time(1.0, 0.0)
