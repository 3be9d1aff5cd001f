"""Initial-condition presets: Gaussians, the quintic ground state, random data.

The ground state Q is the positive decaying solution of -Q'' + Q = Q^5,
known in closed form as 3^(1/4) sech(2x)^(1/2); it generates the focusing
soliton exp(it) Q, and 1.2 Q has negative focusing energy (blowup data).
"""

import numpy as np

from .spectral import Field, derivative_multiplier, lattice_index


class PresetError(ValueError):
    """Unknown preset or invalid preset parameters."""


def _sech(y):
    # stable for large |y| (avoids cosh overflow)
    e = np.exp(-np.abs(y))
    return 2.0 * e / (1.0 + e * e)


def ground_state(x, amplitude=1.0, center=0.0):
    """amplitude * 3^(1/4) * sech(2(x - center))^(1/2)."""
    return amplitude * 3.0**0.25 * np.sqrt(_sech(2.0 * (x - center)))


def ground_state_residual(grid, amplitude=1.0, center=0.0):
    """L^2 residual of -Q'' + Q - Q^5 for the sampled profile.

    Meaningful on boxes where Q has decayed to roundoff at the edges
    (length >= 64 or so); on smaller boxes the periodic seam dominates.
    """
    q = ground_state(grid.x, amplitude, center).astype(np.complex128)
    d2 = np.fft.ifft(derivative_multiplier(grid) ** 2 * np.fft.fft(q))
    resid = -d2 + q - q**5
    return float(np.sqrt(np.sum(np.abs(resid) ** 2) * grid.dx))


def preset_initial(name, params, grid, seed=0):
    """Build the named initial condition on the grid; deterministic.

    gaussian: amplitude * exp(-((x - center)/sigma)^2) * exp(i velocity x)
    soliton:  amplitude * Q(x - center)
    random:   band-limited noise (band_lo <= |xi| <= band_hi) under a wide
              Gaussian envelope, normalized so mass = amplitude^2
    zero:     the zero field
    """
    params = dict(params or {})
    amplitude = float(params.pop("amplitude", 1.0 if name == "soliton" else 0.1))
    center = float(params.pop("center", 0.0))
    if name == "gaussian":
        sigma = float(params.pop("sigma", 1.0))
        velocity = float(params.pop("velocity", 0.0))
        _reject_extra(name, params)
        if sigma <= 0:
            raise PresetError(f"gaussian sigma must be positive, got {sigma}")
        u = amplitude * np.exp(-((grid.x - center) / sigma) ** 2)
        u = u.astype(np.complex128)
        if velocity != 0.0:
            lattice_index(grid, velocity)
            u = u * np.exp(1j * velocity * grid.x)
        return Field(grid, u)
    if name == "soliton":
        _reject_extra(name, params)
        return Field(grid, ground_state(grid.x, amplitude, center).astype(np.complex128))
    if name == "random":
        band_lo = float(params.pop("band_lo", 1.0))
        band_hi = float(params.pop("band_hi", 8.0))
        _reject_extra(name, params)
        if not (0 < band_lo < band_hi):
            raise PresetError(f"need 0 < band_lo < band_hi, got [{band_lo}, {band_hi}]")
        rng = np.random.default_rng(seed)
        keep = (np.abs(grid.xi) >= band_lo) & (np.abs(grid.xi) <= band_hi)
        coeffs = np.zeros(grid.n, dtype=np.complex128)
        coeffs[keep] = rng.standard_normal(int(keep.sum())) \
            + 1j * rng.standard_normal(int(keep.sum()))
        envelope = np.exp(-(grid.x**2) / (2.0 * (grid.length / 16.0) ** 2))
        u = np.fft.ifft(coeffs) * envelope
        norm = np.sqrt(np.sum(np.abs(u) ** 2) * grid.dx)
        if norm > 0:
            u = u * (amplitude / norm)
        return Field(grid, u)
    if name == "zero":
        _reject_extra(name, params)
        return Field(grid, np.zeros(grid.n, dtype=np.complex128))
    raise PresetError(f"unknown preset {name!r}")


def _reject_extra(name, params):
    if params:
        raise PresetError(f"preset {name!r} got unknown parameters {sorted(params)}")


def preset_from_config(cfg, grid=None):
    """Instantiate the [initial] section of a ScenarioConfig."""
    grid = grid if grid is not None else cfg.build_grid()
    ic = cfg["initial"]
    name = ic["preset"]
    if name == "gaussian":
        params = {k: ic[k] for k in ("amplitude", "sigma", "center", "velocity")}
    elif name == "soliton":
        params = {"amplitude": ic["amplitude"], "center": ic["center"]}
    elif name == "random":
        params = {k: ic[k] for k in ("amplitude", "band_lo", "band_hi")}
    else:
        params = {}
    return preset_initial(name, params, grid, cfg.seed)
