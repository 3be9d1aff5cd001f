import numpy as np
import pytest
from scipy.special import erfinv

from qnls import functionals, symmetries
from qnls.concentration import (ConcentrationError, ConcentrationParams,
                                bookkeeping, partition_small_intervals, track,
                                track_trajectory)
from qnls.integrator import IntegratorConfig, Trajectory, solve
from qnls.presets import ground_state
from qnls.spectral import Field, Grid


def mixed_field(n=256, length=32.0, seed=3):
    g = Grid(n, length)
    rng = np.random.default_rng(seed)
    u = np.zeros(g.n, dtype=complex)
    for _ in range(3):
        a, c, s = rng.uniform(0.3, 1.0), rng.uniform(-4, 4), rng.uniform(0.7, 2.0)
        k = g.dxi * rng.integers(-8, 9)
        u += a * np.exp(-((g.x - c) / s) ** 2) * np.exp(1j * (k * g.x + rng.uniform(0, 2 * np.pi)))
    return Field(g, u)


class TestParams:
    @pytest.mark.parametrize("kw", [dict(eta=0.0), dict(eta=0.6), dict(eps0=-1.0),
                                    dict(c_eta=0.0)])
    def test_invalid(self, kw):
        with pytest.raises(ConcentrationError):
            ConcentrationParams(**kw)


class TestTrack:
    def test_gaussian_radius_matches_erf_oracle(self):
        # the (1-eta) window of exp(-x^2) solves erf(sqrt(2) r) = 0.9
        g = Grid(1024, 32.0)
        f = Field(g, np.exp(-g.x**2).astype(complex))
        s = track(f, ConcentrationParams(eta=0.1))
        r_oracle = float(erfinv(0.9) / np.sqrt(2.0))
        assert abs(s.x_radius - r_oracle) <= g.dx
        assert abs(s.x_center) <= g.dx

    def test_zero_field_rejected(self):
        g = Grid(64, 16.0)
        with pytest.raises(ConcentrationError):
            track(Field(g, np.zeros(g.n)), ConcentrationParams())

    def test_boost_covariance_exact_on_lattice(self):
        f = mixed_field(seed=9)
        p = ConcentrationParams(eta=0.1)
        base = track(f, p)
        k0 = 8
        boosted = track(symmetries.apply_boost(f, k0 * f.grid.dxi), p)
        assert boosted.xi_window == (base.xi_window[0] + k0, base.xi_window[1])
        assert boosted.xi_radius == base.xi_radius
        assert boosted.x_window == base.x_window
        assert abs(boosted.xi_center - base.xi_center - k0 * f.grid.dxi) <= 1e-12

    def test_scaling_covariance(self):
        f = mixed_field(seed=4)
        p = ConcentrationParams(eta=0.1)
        base = track(f, p)
        lam = 4.0
        scaled = track(symmetries.apply_scaling(f, lam), p)
        assert scaled.x_radius == lam * base.x_radius
        assert scaled.xi_radius == base.xi_radius / lam
        assert scaled.n_t == base.n_t / lam

    def test_radii_nonincreasing_in_eta(self):
        f = mixed_field(seed=5)
        radii = [(track(f, ConcentrationParams(eta=e)).x_radius,
                  track(f, ConcentrationParams(eta=e)).xi_radius)
                 for e in (0.05, 0.1, 0.2, 0.4)]
        for (xa, ka), (xb, kb) in zip(radii, radii[1:]):
            assert xb <= xa and kb <= ka

    @pytest.mark.parametrize("seed", [1, 4, 7, 12])
    @pytest.mark.parametrize("n", [64, 256])
    def test_matches_exhaustive_search(self, seed, n):
        f = mixed_field(n=n, seed=seed)
        p = ConcentrationParams(eta=0.12)
        a = track(f, p)
        b = track(f, p, exhaustive=True)
        assert (a.x_center, a.x_radius, a.x_window) == (b.x_center, b.x_radius, b.x_window)
        assert (a.xi_center, a.xi_radius, a.xi_window) == (b.xi_center, b.xi_radius, b.xi_window)


def _constant_trajectory(samples, grid, t_end=4.0, frames=41):
    times = np.linspace(0.0, t_end, frames)
    data = np.tile(samples, (frames, 1))
    return Trajectory(grid, times, data, "completed",
                      cfg=IntegratorConfig(1, 1e-2, t_end))


class TestPartition:
    def test_constant_density_gives_equal_intervals(self):
        g = Grid(256, 32.0)
        f = Field(g, 0.7 * np.exp(-g.x**2).astype(complex))
        traj = _constant_trajectory(f.samples, g)
        _, cum = functionals.l6_accumulation(traj)
        eps0 = float(cum[-1] / 4.0) ** (1.0 / 6.0)
        parts = partition_small_intervals(traj, ConcentrationParams(eps0=eps0))
        assert len(parts) == 4
        lengths = [j.t_end - j.t_start for j in parts]
        assert max(lengths) - min(lengths) <= 1e-9 * traj.times[-1]
        assert not any(j.partial for j in parts)

    def test_below_budget_single_partial(self):
        g = Grid(256, 32.0)
        f = Field(g, 0.1 * np.exp(-g.x**2).astype(complex))
        traj = _constant_trajectory(f.samples, g, t_end=1.0, frames=11)
        parts = partition_small_intervals(traj, ConcentrationParams(eps0=10.0))
        assert len(parts) == 1 and parts[0].partial

    def test_interval_budgets(self):
        g = Grid(256, 32.0)
        f = Field(g, 0.7 * np.exp(-g.x**2).astype(complex))
        traj = _constant_trajectory(f.samples, g)
        _, cum = functionals.l6_accumulation(traj)
        eps0 = float(cum[-1] / 3.3) ** (1.0 / 6.0)
        parts = partition_small_intervals(traj, ConcentrationParams(eps0=eps0))
        assert len(parts) == 4
        assert parts[-1].partial
        for j in parts[:-1]:
            assert j.l6_mass == pytest.approx(eps0**6, rel=1e-12)

    def test_refinement_stability(self):
        g = Grid(512, 32 * np.pi)
        u0 = Field(g, 0.4 * np.exp(-g.x**2).astype(complex))
        coarse = solve(u0, IntegratorConfig(1, 1e-3, 2.0, 40))
        fine = solve(u0, IntegratorConfig(1, 1e-3, 2.0, 20))
        _, cum = functionals.l6_accumulation(coarse)
        eps0 = float(cum[-1] / 3.5) ** (1.0 / 6.0)
        p = ConcentrationParams(eps0=eps0)
        parts_c = partition_small_intervals(coarse, p)
        parts_f = partition_small_intervals(fine, p)
        assert len(parts_c) == len(parts_f)
        gap = 40 * 1e-3
        for a, b in zip(parts_c, parts_f):
            assert abs(a.t_end - b.t_end) <= gap


class TestBookkeeping:
    def test_constant_scale(self):
        g = Grid(256, 32.0)
        f = Field(g, 0.7 * np.exp(-g.x**2).astype(complex))
        traj = _constant_trajectory(f.samples, g, t_end=2.0, frames=21)
        p = ConcentrationParams(eps0=10.0)  # single partial interval
        samples = track_trajectory(traj, p)
        parts = partition_small_intervals(traj, p, samples)
        book = bookkeeping(traj, parts, samples)
        n_const = samples[0].n_t
        assert book["sum_n"] == pytest.approx(n_const, rel=1e-12)
        assert book["int_n3"] == pytest.approx(n_const**3 * 2.0, rel=1e-12)
        assert book["int_n2"] == pytest.approx(n_const**2 * 2.0, rel=1e-12)
        assert book["xi_drift"] == 0.0

    def test_soliton_scale_stays_comparable(self):
        g = Grid(512, 32.0)
        u0 = Field(g, ground_state(g.x).astype(complex))
        traj = solve(u0, IntegratorConfig(-1, 2e-4, 0.5, 250))
        samples = track_trajectory(traj, ConcentrationParams())
        n_series = [s.n_t for s in samples]
        assert max(n_series) / min(n_series) <= 2.0

    def test_linear_boosted_run_has_no_xi_drift(self):
        g = Grid(512, 32 * np.pi)
        u0 = Field(g, 0.3 * np.exp(-g.x**2).astype(complex))
        u0 = symmetries.apply_boost(u0, 8 * g.dxi)
        traj = solve(u0, IntegratorConfig(0, 1e-3, 0.5, 100))
        p = ConcentrationParams()
        samples = track_trajectory(traj, p)
        parts = partition_small_intervals(traj, p, samples)
        book = bookkeeping(traj, parts, samples)
        assert book["xi_drift"] <= 2 * g.dxi
