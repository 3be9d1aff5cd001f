"""Scalar functionals: mass, energy, momentum, Sobolev and space-time norms.

Fixed-time integrals are grid sums times dx; spectral quantities use the
continuum-scaled coefficients described in :mod:`qnls.spectral`.  Space-time
norms integrate saved trajectory frames with composite trapezoid quadrature,
so their accuracy is set by the save cadence.
"""

import numpy as np

from .spectral import derivative_multiplier


class NormError(ValueError):
    """Invalid exponents or an interval not covered by saved frames."""


def mass(field):
    """L^2 mass: sum |u|^2 dx."""
    return float(np.sum(np.abs(field.samples) ** 2) * field.grid.dx)


def energy(field, mu):
    """(1/2) int |u_x|^2 + (mu/6) int |u|^6, derivative computed spectrally."""
    grid = field.grid
    du = np.fft.ifft(derivative_multiplier(grid) * np.fft.fft(field.samples))
    kinetic = 0.5 * np.sum(np.abs(du) ** 2) * grid.dx
    potential = (mu / 6.0) * np.sum(np.abs(field.samples) ** 6) * grid.dx
    return float(kinetic + potential)


def momentum(field):
    """Im int conj(u) u_x dx (real output)."""
    grid = field.grid
    du = np.fft.ifft(derivative_multiplier(grid) * np.fft.fft(field.samples))
    return float(np.sum(np.conj(field.samples) * du).imag * grid.dx)


def h_s_norm(field, s, recenter=0.0):
    """Homogeneous Sobolev norm of order s in {1, 2}, optionally recentered.

    Computes (sum |xi - recenter|^(2s) |uhat(xi)|^2 dxi/(2pi))^(1/2), which
    equals the plain norm of exp(-i*x*recenter) * u.  ``recenter`` may be any
    real number; it reindexes the lattice rather than rolling the spectrum.
    """
    if s not in (1, 2):
        raise NormError(f"Sobolev order must be 1 or 2, got {s}")
    grid = field.grid
    coeffs = np.fft.fft(field.samples)
    weights = np.abs(grid.xi - recenter) ** (2 * s)
    total = np.sum(weights * np.abs(coeffs) ** 2) * grid.dx / grid.n
    return float(np.sqrt(total))


def lebesgue_norm(field, q):
    """Fixed-time L^q norm; q = inf is the grid max (no interpolation)."""
    a = np.abs(field.samples)
    if np.isinf(q):
        return float(a.max()) if a.size else 0.0
    if q < 1:
        raise NormError(f"spatial exponent must be >= 1, got {q}")
    return float((np.sum(a**q) * field.grid.dx) ** (1.0 / q))


class SpaceTimeNorm:
    """L_t^p L_x^q norm over [t1, t2]; exponents in [1, inf]."""

    def __init__(self, p, q, t1, t2):
        if not np.isinf(p) and p < 1:
            raise NormError(f"temporal exponent must be >= 1, got {p}")
        if not np.isinf(q) and q < 1:
            raise NormError(f"spatial exponent must be >= 1, got {q}")
        if not (t1 <= t2):
            raise NormError(f"empty interval [{t1}, {t2}]")
        self.p = p
        self.q = q
        self.t1 = float(t1)
        self.t2 = float(t2)


def _frame_slice(traj, t1, t2):
    times = traj.times
    if t1 < times[0] - 1e-12 or t2 > times[-1] + 1e-12:
        raise NormError(
            f"interval [{t1}, {t2}] outside saved span [{times[0]}, {times[-1]}]")
    i1 = int(np.searchsorted(times, t1 - 1e-12))
    i2 = int(np.searchsorted(times, t2 + 1e-12)) - 1
    if abs(times[i1] - t1) > 1e-9 or abs(times[i2] - t2) > 1e-9:
        raise NormError(
            f"interval endpoints [{t1}, {t2}] are not saved frame times")
    if i2 < i1:
        raise NormError(f"no saved frames inside [{t1}, {t2}]")
    return i1, i2


def spacetime_norm(traj, nrm):
    """Composite-trapezoid space-time Lebesgue norm over saved frames.

    p = inf takes the max of the spatial norm over frames in the interval.
    Endpoints must coincide with saved frame times.
    """
    i1, i2 = _frame_slice(traj, nrm.t1, nrm.t2)
    vals = np.array([lebesgue_norm(traj.field(i), nrm.q) for i in range(i1, i2 + 1)])
    if np.isinf(nrm.p):
        return float(vals.max())
    if i1 == i2:
        return 0.0
    t = traj.times[i1:i2 + 1]
    return float(np.trapezoid(vals**nrm.p, t) ** (1.0 / nrm.p))


def l6_accumulation(traj):
    """Running int_0^t int |u|^6 dx dt over saved frames.

    Returns (times, cumulative), with cumulative[0] = 0.  This is the
    space-time density whose divergence defines blowup.
    """
    g = np.array([np.sum(np.abs(traj.frame(i)) ** 6) * traj.grid.dx
                  for i in range(len(traj.times))])
    t = traj.times
    cum = np.zeros_like(t)
    if len(t) > 1:
        cum[1:] = np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(t))
    return t.copy(), cum
