import numpy as np
import pytest

from qnls import spectral
from qnls.spectral import (Field, FieldError, Grid, ProjectorSpec, SpectralError,
                           bump, forward_transform, free_propagate, inverse_transform,
                           make_grid, project, projector_multiplier, translate)


def l2(f):
    return np.sqrt(np.sum(np.abs(f.samples) ** 2) * f.grid.dx)


def random_field(grid, seed=0, band=None):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n)
    if band is not None:
        c[np.abs(grid.xi) > band] = 0.0
    c[grid.nyquist_index] = 0.0
    return Field(grid, np.fft.ifft(c))


class TestGrid:
    def test_small_grid_lattice(self):
        g = make_grid(8, 2 * np.pi)
        assert g.dx == pytest.approx(np.pi / 4)
        assert sorted(g.xi) == pytest.approx([-4, -3, -2, -1, 0, 1, 2, 3])

    def test_reference_grid_resolution(self):
        g = make_grid(1024, 64 * np.pi)
        assert g.dxi == pytest.approx(1.0 / 32.0)
        assert g.dx * g.n == pytest.approx(g.length)

    @pytest.mark.parametrize("n,length", [(12, 1.0), (0, 1.0), (4, 1.0), (1024, -2.0)])
    def test_invalid_grids(self, n, length):
        with pytest.raises(SpectralError):
            make_grid(n, length)

    @pytest.mark.parametrize("n,length", [(64, 16 * np.pi), (256, 40.0),
                                          (1024, 64 * np.pi), (2048, 10.0)])
    def test_parseval(self, n, length):
        g = make_grid(n, length)
        f = random_field(g, seed=2)
        phys = np.sum(np.abs(f.samples) ** 2) * g.dx
        spec_side = np.sum(np.abs(g.dx * np.fft.fft(f.samples)) ** 2) * g.dxi / (2 * np.pi)
        assert abs(phys - spec_side) <= 1e-12 * phys


class TestField:
    def test_wrong_length_rejected(self):
        g = make_grid(64, 10.0)
        with pytest.raises(FieldError):
            Field(g, np.zeros(32))

    def test_nonfinite_rejected(self):
        g = make_grid(64, 10.0)
        bad = np.zeros(64, dtype=complex)
        bad[3] = np.nan
        with pytest.raises(FieldError):
            Field(g, bad)

    def test_samples_frozen(self):
        g = make_grid(64, 10.0)
        f = Field(g, np.ones(64))
        with pytest.raises(ValueError):
            f.samples[0] = 2.0


class TestTransforms:
    def test_constant_field_single_mode(self):
        g = make_grid(128, 20.0)
        c = forward_transform(Field(g, np.ones(g.n)))
        assert abs(c[0] - g.n) <= 1e-12 * g.n
        assert np.max(np.abs(c[1:])) <= 1e-12 * g.n

    def test_pure_tone(self):
        g = make_grid(128, 20.0)
        m = 5
        c = forward_transform(Field(g, np.exp(1j * (2 * np.pi / g.length) * m * g.x)))
        assert abs(c[m]) == pytest.approx(g.n, rel=1e-12)
        c[m] = 0.0
        assert np.max(np.abs(c)) <= 1e-10 * g.n

    def test_round_trip(self):
        g = make_grid(512, 30.0)
        f = random_field(g, seed=5)
        back = inverse_transform(g, forward_transform(f), f.time)
        assert np.max(np.abs(back.samples - f.samples)) <= 1e-12 * np.max(np.abs(f.samples))


class TestBump:
    def test_plateau_and_support(self):
        assert bump(0.5) == 1.0
        assert bump(1.0) == 1.0
        assert bump(-0.3) == 1.0
        assert bump(3.0) == 0.0
        assert bump(2.0) == 0.0
        assert 0.0 < bump(1.5) < 1.0

    def test_even(self):
        xs = np.linspace(0, 3, 301)
        assert np.array_equal(bump(xs), bump(-xs))

    def test_monotone_on_transition(self):
        xs = np.linspace(1.0, 2.0, 500)
        vals = bump(xs)
        assert np.all(np.diff(vals) <= 0)
        assert np.all((vals >= 0) & (vals <= 1))


class TestProjectors:
    def test_low_pass_identity_above_nyquist(self):
        g = make_grid(256, 32.0)
        f = random_field(g, seed=1)
        n_id = 2.0 ** np.ceil(np.log2(g.xi_max))
        p = project(f, ProjectorSpec.low_pass(n_id))
        assert np.max(np.abs(p.samples - f.samples)) <= 1e-12 * np.max(np.abs(f.samples))

    def test_resolution_of_identity(self):
        g = make_grid(256, 32.0)
        f = random_field(g, seed=7)
        total = project(f, ProjectorSpec.low_pass(1.0)).samples.copy()
        scale = 1.0
        while scale < g.xi_max:
            total += project(f, ProjectorSpec.dyadic(scale)).samples
            scale *= 2.0
        assert np.max(np.abs(total - f.samples)) <= 1e-12 * np.max(np.abs(f.samples))

    def test_dyadic_is_difference_of_low_passes(self):
        g = make_grid(256, 32.0)
        f = random_field(g, seed=3)
        d = project(f, ProjectorSpec.dyadic(4.0)).samples
        alt = project(f, ProjectorSpec.low_pass(8.0)).samples \
            - project(f, ProjectorSpec.low_pass(4.0)).samples
        assert np.max(np.abs(d - alt)) <= 1e-14 * np.max(np.abs(f.samples))

    def test_nested_low_pass_collapses(self):
        g = make_grid(256, 32.0)
        f = random_field(g, seed=4)
        inner = project(project(f, ProjectorSpec.low_pass(8.0)), ProjectorSpec.low_pass(2.0))
        direct = project(f, ProjectorSpec.low_pass(2.0))
        assert np.max(np.abs(inner.samples - direct.samples)) <= 1e-12

    def test_degenerate_scale_rejected(self):
        g = make_grid(256, 32.0)
        with pytest.raises(SpectralError):
            projector_multiplier(g, ProjectorSpec.low_pass(0.5 * g.dxi))

    def test_band_requires_order(self):
        with pytest.raises(SpectralError):
            ProjectorSpec.band(4.0, 2.0)

    def test_nyquist_zeroed(self):
        g = make_grid(128, 16.0)
        m = projector_multiplier(g, ProjectorSpec.low_pass(1000.0))
        assert m[g.nyquist_index] == 0.0

    def test_shifted_equals_conjugated(self):
        g = make_grid(256, 32.0)
        f = random_field(g, seed=6, band=10.0)
        xi0 = 4 * g.dxi
        spec = ProjectorSpec.shifted(xi0, ProjectorSpec.dyadic(2.0))
        via_spec = project(f, spec)
        demod = f.with_samples(f.samples * np.exp(-1j * xi0 * g.x))
        conj = project(demod, ProjectorSpec.dyadic(2.0))
        via_conj = conj.samples * np.exp(1j * xi0 * g.x)
        assert np.max(np.abs(via_spec.samples - via_conj)) <= 1e-13 * max(1.0, np.max(np.abs(f.samples)))

    def test_shifted_off_lattice_rejected(self):
        g = make_grid(256, 32.0)
        with pytest.raises(SpectralError):
            projector_multiplier(g, ProjectorSpec.shifted(0.5 * g.dxi, ProjectorSpec.low_pass(2.0)))


class TestFreePropagate:
    def test_zero_time_identity(self):
        g = make_grid(128, 16.0)
        f = random_field(g, seed=8)
        assert np.array_equal(free_propagate(f, 0.0).samples, f.samples)

    def test_gaussian_closed_form(self):
        g = make_grid(1024, 64 * np.pi)
        f = Field(g, np.exp(-g.x**2))
        t = 0.9
        moved = free_propagate(f, t)
        exact = (1 + 4j * t) ** -0.5 * np.exp(-g.x**2 / (1 + 4j * t))
        assert np.max(np.abs(moved.samples - exact)) <= 1e-8

    def test_unitary(self):
        g = make_grid(512, 40.0)
        f = random_field(g, seed=9)
        assert abs(l2(free_propagate(f, 2.7)) - l2(f)) <= 1e-12 * l2(f)

    def test_group_law(self):
        g = make_grid(512, 40.0)
        f = random_field(g, seed=10)
        once = free_propagate(f, 0.7)
        twice = free_propagate(free_propagate(f, 0.3), 0.4)
        assert np.max(np.abs(once.samples - twice.samples)) <= 1e-12

    def test_commutes_with_projectors(self):
        g = make_grid(256, 32.0)
        f = random_field(g, seed=11)
        spec = ProjectorSpec.dyadic(4.0)
        a = free_propagate(project(f, spec), 0.5)
        b = project(free_propagate(f, 0.5), spec)
        assert np.max(np.abs(a.samples - b.samples)) <= 1e-12

    def test_timestamp_advances(self):
        g = make_grid(128, 16.0)
        f = Field(g, np.ones(g.n), time=1.5)
        assert free_propagate(f, 0.25).time == pytest.approx(1.75)


class TestTranslate:
    def test_grid_aligned_shift_is_roll(self):
        g = make_grid(256, 32.0)
        f = random_field(g, seed=12, band=10.0)
        shifted = translate(f, 3 * g.dx)
        assert np.max(np.abs(shifted.samples - np.roll(f.samples, 3))) <= 1e-12

    def test_zero_shift_identity(self):
        g = make_grid(128, 16.0)
        f = random_field(g, seed=13)
        assert translate(f, 0.0) is f
