"""Periodic pseudospectral toolbox: grids, fields, frequency cutoffs, projectors.

Conventions used throughout the package:

* The spatial domain is a periodic box of length ``L`` centered at the
  origin, ``x_j = -L/2 + j*dx`` with ``dx = L/n``.  It stands in for the
  whole line, so initial data must decay well below roundoff at the box
  edges (see :func:`boundary_magnitude`).
* The frequency lattice is ``xi_k = 2*pi*k/L`` for ``k`` in
  ``{-n/2, ..., n/2 - 1}``, stored in FFT order.
* The forward DFT carries no prefactor and the inverse carries ``1/n``
  (numpy's convention).  Physical-space integrals are ``sum(.) * dx``;
  frequency-space integrals are ``sum(.) * dxi / (2*pi)`` applied to the
  continuum-scaled coefficients ``dx * fft(u)``.  With these conventions
  Parseval reads ``sum(|u|^2) * dx == sum(|dx*fft(u)|^2) * dxi / (2*pi)``.
* The single Nyquist mode (storage index ``n//2``) has no positive-frequency
  partner; every projector and the spectral derivative zero it so that all
  multipliers act evenly in ``xi``.
"""

import numpy as np


class SpectralError(ValueError):
    """Invalid grid, field, or projector parameters."""


class FieldError(ValueError):
    """Field samples are inconsistent with the grid or non-finite."""


def _is_power_of_two(m):
    return m >= 1 and (m & (m - 1)) == 0


class Grid:
    """Uniform periodic grid of ``n`` points on a box of length ``length``.

    ``n`` must be a power of two (n >= 8).  Exposes the sample points ``x``
    (ascending), the angular frequency lattice ``xi`` (FFT storage order),
    the spacings ``dx`` and ``dxi``, and ``xi_max = pi*n/length`` (the
    Nyquist frequency).
    """

    def __init__(self, n, length):
        if not isinstance(n, (int, np.integer)) or not _is_power_of_two(int(n)) or n < 8:
            raise SpectralError(f"grid size must be a power of two >= 8, got {n}")
        if not (length > 0):
            raise SpectralError(f"grid length must be positive, got {length}")
        self.n = int(n)
        self.length = float(length)
        self.dx = self.length / self.n
        self.dxi = 2.0 * np.pi / self.length
        self.x = -0.5 * self.length + self.dx * np.arange(self.n)
        self.xi = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        self.xi_max = np.pi * self.n / self.length
        self.nyquist_index = self.n // 2
        for arr in (self.x, self.xi):
            arr.flags.writeable = False

    def __eq__(self, other):
        return isinstance(other, Grid) and self.n == other.n and self.length == other.length

    def __hash__(self):
        return hash((self.n, self.length))

    def __repr__(self):
        return f"Grid(n={self.n}, length={self.length!r})"


def make_grid(n, length):
    """Build a :class:`Grid`; errors on non-power-of-two ``n`` or ``length <= 0``."""
    return Grid(n, length)


class Field:
    """Complex wavefunction samples on a :class:`Grid` at a fixed time.

    Samples are copied, validated to be finite, and frozen; Fields are
    immutable values and safe to share between threads.
    """

    def __init__(self, grid, samples, time=0.0):
        samples = np.asarray(samples, dtype=np.complex128)
        if samples.shape != (grid.n,):
            raise FieldError(f"expected {grid.n} samples, got shape {samples.shape}")
        if not np.all(np.isfinite(samples.view(np.float64))):
            raise FieldError("field contains non-finite samples")
        self.grid = grid
        self.samples = samples.copy()
        self.samples.flags.writeable = False
        self.time = float(time)

    def with_samples(self, samples, time=None):
        return Field(self.grid, samples, self.time if time is None else time)

    def __repr__(self):
        return f"Field(grid={self.grid!r}, time={self.time!r})"


def forward_transform(field):
    """Raw DFT coefficients of the samples (no prefactor), FFT order."""
    return np.fft.fft(field.samples)


def inverse_transform(grid, coeffs, time=0.0):
    """Inverse of :func:`forward_transform`; returns a Field."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.shape != (grid.n,):
        raise FieldError(f"expected {grid.n} coefficients, got shape {coeffs.shape}")
    return Field(grid, np.fft.ifft(coeffs), time)


def bump(xi):
    """Smooth even cutoff profile: 1 on |xi| <= 1, 0 on |xi| >= 2.

    On the transition 1 < |xi| < 2 the value is exp(1 - 1/(1 - s^2)) with
    s = |xi| - 1, which decreases monotonically from 1 to 0.
    """
    xi = np.asarray(xi, dtype=np.float64)
    a = np.abs(xi)
    out = np.zeros_like(a)
    out[a <= 1.0] = 1.0
    mid = (a > 1.0) & (a < 2.0)
    if np.any(mid):
        s = a[mid] - 1.0
        with np.errstate(divide="ignore", over="ignore"):
            out[mid] = np.exp(1.0 - 1.0 / (1.0 - s * s))
    return out if out.ndim else float(out)


class ProjectorSpec:
    """Frequency-projector description.

    kind is one of "leq" (low pass at scale N), "dyadic" (octave at scale N,
    i.e. low pass at 2N minus low pass at N), "band" (low pass at hi minus
    low pass at lo), or "shifted" (another projector conjugated by
    modulation at xi0, which recenters it at xi0).
    """

    def __init__(self, kind, scale=None, lo=None, hi=None, xi0=None, inner=None):
        self.kind = kind
        self.scale = scale
        self.lo = lo
        self.hi = hi
        self.xi0 = xi0
        self.inner = inner

    @classmethod
    def low_pass(cls, scale):
        if not (scale > 0):
            raise SpectralError(f"projector scale must be positive, got {scale}")
        return cls("leq", scale=float(scale))

    @classmethod
    def dyadic(cls, scale):
        if not (scale > 0):
            raise SpectralError(f"projector scale must be positive, got {scale}")
        return cls("dyadic", scale=float(scale))

    @classmethod
    def band(cls, lo, hi):
        if not (0 < lo < hi):
            raise SpectralError(f"band requires 0 < lo < hi, got [{lo}, {hi}]")
        return cls("band", lo=float(lo), hi=float(hi))

    @classmethod
    def shifted(cls, xi0, inner):
        return cls("shifted", xi0=float(xi0), inner=inner)

    def __repr__(self):
        if self.kind == "leq":
            return f"ProjectorSpec.low_pass({self.scale})"
        if self.kind == "dyadic":
            return f"ProjectorSpec.dyadic({self.scale})"
        if self.kind == "band":
            return f"ProjectorSpec.band({self.lo}, {self.hi})"
        return f"ProjectorSpec.shifted({self.xi0}, {self.inner!r})"


def lattice_index(grid, xi0, tol=1e-9):
    """Integer k with xi0 == k*dxi, or SpectralError if xi0 is off-lattice."""
    k = xi0 / grid.dxi
    k_round = int(np.rint(k))
    if abs(k - k_round) > tol:
        raise SpectralError(f"frequency {xi0} is not on the lattice (dxi={grid.dxi})")
    return k_round


def projector_multiplier(grid, spec):
    """Real spectral multiplier (FFT order) realizing ``spec`` on ``grid``.

    The Nyquist slot is zeroed for unshifted projectors; a shifted projector
    is the exact circular translation of its inner multiplier, so its zero
    travels with the shift.
    """
    if spec.kind == "shifted":
        k0 = lattice_index(grid, spec.xi0)
        return np.roll(projector_multiplier(grid, spec.inner), k0)
    if spec.kind == "leq":
        if spec.scale < grid.dxi:
            raise SpectralError(
                f"projector scale {spec.scale} below grid resolution {grid.dxi}")
        m = bump(grid.xi / spec.scale)
    elif spec.kind == "dyadic":
        if spec.scale < grid.dxi:
            raise SpectralError(
                f"projector scale {spec.scale} below grid resolution {grid.dxi}")
        m = bump(grid.xi / (2.0 * spec.scale)) - bump(grid.xi / spec.scale)
    elif spec.kind == "band":
        if spec.lo < grid.dxi:
            raise SpectralError(
                f"band floor {spec.lo} below grid resolution {grid.dxi}")
        m = bump(grid.xi / spec.hi) - bump(grid.xi / spec.lo)
    else:
        raise SpectralError(f"unknown projector kind {spec.kind!r}")
    m = np.array(m, dtype=np.float64)
    m[grid.nyquist_index] = 0.0
    return m


def project(field, spec):
    """Apply the projector to the field's spectrum."""
    m = projector_multiplier(field.grid, spec)
    return field.with_samples(np.fft.ifft(m * np.fft.fft(field.samples)))


def derivative_multiplier(grid):
    """Spectral multiplier for d/dx (``i*xi`` with the Nyquist slot zeroed)."""
    m = 1j * grid.xi.copy()
    m[grid.nyquist_index] = 0.0
    return m


def spectral_derivative(field):
    """d/dx of the field, computed spectrally."""
    return field.with_samples(np.fft.ifft(derivative_multiplier(field.grid) * np.fft.fft(field.samples)))


def free_propagate(field, t):
    """Free Schroedinger flow for duration ``t``: multiplier exp(-i*t*xi^2).

    Unitary (mass preserved to roundoff) and a one-parameter group in ``t``.
    The field's timestamp advances by ``t``.
    """
    if t == 0.0:
        return field.with_samples(field.samples, time=field.time)
    phase = np.exp(-1j * t * field.grid.xi**2)
    return field.with_samples(np.fft.ifft(phase * np.fft.fft(field.samples)),
                              time=field.time + t)


def modulate(field, xi0):
    """Multiply by exp(i*x*xi0); xi0 must lie on the frequency lattice."""
    lattice_index(field.grid, xi0)
    if xi0 == 0.0:
        return field
    return field.with_samples(field.samples * np.exp(1j * xi0 * field.grid.x))


def translate(field, shift):
    """Translate ``u(x) -> u(x - shift)`` via an exact spectral phase ramp.

    The shift need not align with grid points; on the periodic box the
    phase ramp is exact for band-limited data.
    """
    if shift == 0.0:
        return field
    ramp = np.exp(-1j * field.grid.xi * shift)
    ramp[field.grid.nyquist_index] = np.cos(field.grid.xi[field.grid.nyquist_index] * shift)
    return field.with_samples(np.fft.ifft(ramp * np.fft.fft(field.samples)))


def boundary_magnitude(field):
    """Largest |u| over the outermost samples of the box (wrap seam)."""
    s = np.abs(field.samples)
    return float(max(s[0], s[1], s[-2], s[-1]))
