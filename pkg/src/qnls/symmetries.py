"""Scaling and Galilean symmetries with exact covariance contracts.

Scaling maps a field to a compatible grid (same point count, box length
scaled by lambda) so no resampling is needed and mass invariance is exact
to roundoff.  Boosts are pointwise modulations; the boost frequency must
lie on the grid's frequency lattice so the modulation is periodic.
"""

import numpy as np

from . import integrator
from .spectral import Field, Grid, SpectralError, lattice_index, modulate, translate


class GalileanBoost:
    """Modulation by exp(i*x*xi0); xi0 must be a lattice frequency."""

    def __init__(self, xi0):
        self.xi0 = float(xi0)

    def __repr__(self):
        return f"GalileanBoost(xi0={self.xi0!r})"


class ScalingMap:
    """Dilation u(x) -> lam^(-1/2) u(x/lam) with lam a power of two."""

    def __init__(self, lam):
        k = np.log2(lam) if lam > 0 else np.nan
        if not np.isfinite(k) or abs(k - round(k)) > 1e-12:
            raise SpectralError(f"scale factor must be a power of two, got {lam}")
        self.lam = float(lam)

    def __repr__(self):
        return f"ScalingMap(lam={self.lam!r})"


def apply_scaling(field, lam):
    """Rescale onto Grid(n, lam*L); mass invariant, timestamp maps to lam^2 t."""
    sm = lam if isinstance(lam, ScalingMap) else ScalingMap(lam)
    grid = field.grid
    new_grid = Grid(grid.n, sm.lam * grid.length)
    return Field(new_grid, field.samples / np.sqrt(sm.lam), sm.lam**2 * field.time)


def apply_boost(field, boost):
    """Multiply by exp(i*x*xi0); errors if xi0 is off the lattice."""
    b = boost if isinstance(boost, GalileanBoost) else GalileanBoost(boost)
    lattice_index(field.grid, b.xi0)
    return modulate(field, b.xi0)


def boosted_solution(field, boost, t):
    """Boost-transported solution frame: exp(-i t xi0^2) e^(i x xi0) u(t, x - 2 xi0 t).

    The spatial shift is an exact spectral phase ramp on the periodic box.
    """
    b = boost if isinstance(boost, GalileanBoost) else GalileanBoost(boost)
    shifted = translate(field, 2.0 * b.xi0 * t)
    out = apply_boost(shifted, b)
    return out.with_samples(out.samples * np.exp(-1j * t * b.xi0**2))


def boost_trajectory_check(traj, boost, cfg=None):
    """Max L^2 gap of the Galilean commuting diagram over saved times.

    Solves again from the boosted initial data and compares each saved frame
    against the boost-transported frame of the original run.  Returns the
    sup over saved times of the L^2 difference.
    """
    b = boost if isinstance(boost, GalileanBoost) else GalileanBoost(boost)
    cfg = cfg if cfg is not None else traj.cfg
    if cfg is None:
        raise integrator.IntegratorError("trajectory carries no config; pass cfg")
    u0 = traj.field(0)
    v_traj = integrator.solve(apply_boost(u0, b), cfg)
    if v_traj.grid != traj.grid:
        raise integrator.IntegratorError("boosted run landed on an incompatible grid")
    worst = 0.0
    for i, t in enumerate(traj.times):
        w = boosted_solution(traj.field(i), b, t - u0.time)
        j = v_traj.index_at(t)
        diff = v_traj.frame(j) - w.samples
        worst = max(worst, float(np.sqrt(np.sum(np.abs(diff) ** 2) * traj.grid.dx)))
    return worst
