"""Interaction Morawetz action, its frequency-truncated variant, and monitors.

The action pairs the mass density at one point with the momentum density at
another through an antisymmetric kernel:

    M(t) = 1/2 integral a(x - y) |u(y)|^2 Im[conj(u) (d/dx - i xi_shift) u](x) dx dy.

The kernel is an erf profile of width ``epsilon``; the odd variant vanishes
at 0 and is the one with exact shift-parameter cancellation.  ``epsilon = 0``
is the pure sign-kernel limit.  Along defocusing runs M(t) is nondecreasing
up to integrator error, and sup |M(t)| controls the space-time L^8 norm.

Evaluation is O(n log n): the kernel splits as a scaled sign function (handled
exactly by prefix sums) plus an odd absolutely-integrable remainder (handled
by zero-padded fast convolution).  erf itself is bounded but not integrable,
so a naive circular convolution would be ill-defined on the periodic box.

The low-pass operator I multiplies the spectrum by the smooth cutoff at scale
32 * cutoff (identity below it, zero above twice it); the truncated action
M_I(t) is the action of Iu.  The three commutator error integrands quantify
how far Iu is from solving the equation, and vanish identically when the
quintic power of the solution stays inside the cutoff plateau.
"""

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import erf

from .functionals import h_s_norm, mass
from .spectral import bump, derivative_multiplier

SQRT_PI = float(np.sqrt(np.pi))


class MorawetzError(ValueError):
    """Invalid kernel parameters or an unsupported trajectory."""


class MorawetzKernel:
    """erf-profile interaction kernel of width epsilon.

    variant "odd": a(z) = (sqrt(pi)/2) * erf(z/epsilon), odd, |a| <= sqrt(pi)/2,
    ||a'||_L1 = sqrt(pi).  variant "two_sided": the same plus the constant
    sqrt(pi)/2, i.e. the one-sided integral of the Gaussian profile.
    epsilon = 0 selects the sign-kernel limit.
    """

    def __init__(self, epsilon, variant="odd"):
        if epsilon < 0:
            raise MorawetzError(f"kernel width must be >= 0, got {epsilon}")
        if variant not in ("odd", "two_sided"):
            raise MorawetzError(f"unknown kernel variant {variant!r}")
        self.epsilon = float(epsilon)
        self.variant = variant

    def odd_part(self, z):
        z = np.asarray(z, dtype=np.float64)
        if self.epsilon == 0.0:
            out = 0.5 * SQRT_PI * np.sign(z)
        else:
            out = 0.5 * SQRT_PI * erf(z / self.epsilon)
        return out if out.ndim else float(out)

    def constant_part(self):
        return 0.5 * SQRT_PI if self.variant == "two_sided" else 0.0

    def __call__(self, z):
        return self.odd_part(z) + self.constant_part()

    def __repr__(self):
        return f"MorawetzKernel(epsilon={self.epsilon!r}, variant={self.variant!r})"


def kernel_eval(kernel, z):
    """Evaluate the kernel profile a(z)."""
    return kernel(z)


def _sign_weighted_sums(rho):
    # sum_j sign(i - j) rho_j for every i, via exclusive prefix sums; O(n)
    prefix = np.concatenate(([0.0], np.cumsum(rho)[:-1]))
    return 2.0 * prefix + rho - np.sum(rho)


def kernel_convolve(kernel, rho, grid):
    """w(x_i) = sum_j a(x_i - x_j) rho_j dx, treating the box as the line.

    The sign component is exact prefix summation; the remainder g = a - sign
    part decays like a Gaussian and is evaluated by zero-padded FFT
    convolution over all 2n-1 lags, so the result matches the direct double
    sum to roundoff.
    """
    n = grid.n
    w = 0.5 * SQRT_PI * _sign_weighted_sums(rho)
    const = kernel.constant_part()
    if const != 0.0:
        w = w + const * np.sum(rho)
    if kernel.epsilon > 0.0:
        lags = grid.dx * np.arange(-(n - 1), n)
        g = kernel.odd_part(lags) - 0.5 * SQRT_PI * np.sign(lags)
        w = w + fftconvolve(rho, g)[n - 1:2 * n - 1]
    return w * grid.dx


def kernel_convolve_direct(kernel, rho, grid):
    """O(n^2) oracle for :func:`kernel_convolve` (small grids only)."""
    if grid.n > 2048:
        raise MorawetzError("direct kernel sum is limited to n <= 2048")
    a = kernel(grid.x[:, None] - grid.x[None, :])
    return (a @ rho) * grid.dx


def _momentum_density(field, xi_shift):
    u = field.samples
    du = np.fft.ifft(derivative_multiplier(field.grid) * np.fft.fft(u))
    m = (np.conj(u) * du).imag
    if xi_shift != 0.0:
        m = m - xi_shift * np.abs(u) ** 2
    return m


def interaction_action(field, kernel, xi_shift=0.0, method="fast"):
    """Interaction Morawetz action M(t) of the field; real scalar.

    For the odd kernel the output does not depend on xi_shift (the shift
    couples the kernel to the symmetric product of two mass densities, which
    cancels exactly by antisymmetry).  method "direct" uses the O(n^2)
    double sum as an oracle.
    """
    grid = field.grid
    rho = np.abs(field.samples) ** 2
    m = _momentum_density(field, xi_shift)
    if method == "fast":
        w = kernel_convolve(kernel, rho, grid)
    elif method == "direct":
        w = kernel_convolve_direct(kernel, rho, grid)
    else:
        raise MorawetzError(f"unknown method {method!r}")
    return float(0.5 * np.sum(w * m) * grid.dx)


class IOperator:
    """Smooth low-pass multiplier at scale 32 * cutoff.

    The multiplier equals 1 for |xi| <= 32 * cutoff and 0 for
    |xi| > 64 * cutoff.  When the outer edge reaches the grid's Nyquist
    frequency the operator is the identity (flagged via is_identity_on).
    """

    def __init__(self, cutoff):
        if not (cutoff > 0):
            raise MorawetzError(f"cutoff must be positive, got {cutoff}")
        self.cutoff = float(cutoff)

    def is_identity_on(self, grid):
        return 64.0 * self.cutoff >= grid.xi_max

    def multiplier(self, grid):
        """Spectral multiplier, or None when clamped to the identity."""
        if self.is_identity_on(grid):
            return None
        m = bump(grid.xi / (32.0 * self.cutoff))
        m[grid.nyquist_index] = 0.0
        return m

    def __repr__(self):
        return f"IOperator(cutoff={self.cutoff!r})"


def apply_I(field, op):
    """Low-pass the field; exact identity when the cutoff clears the grid."""
    m = op.multiplier(field.grid)
    if m is None:
        return field
    return field.with_samples(np.fft.ifft(m * np.fft.fft(field.samples)))


def truncated_action(field, op, kernel, xi_shift=0.0):
    """Frequency-truncated action M_I(t) = action of Iu."""
    return interaction_action(apply_I(field, op), kernel, xi_shift)


def _i_apply(arr, multiplier):
    if multiplier is None:
        return arr
    return np.fft.ifft(multiplier * np.fft.fft(arr))


def commutator_error_integrands(field, op, kernel, xi_shift, mu):
    """Instantaneous values of the three truncation-error integrands.

    All are built from the defect mu * (|Iu|^4 Iu - I(|u|^4 u)) between the
    truncated nonlinearity and the truncation of the nonlinearity, paired
    with the kernel and the recentered derivative (d/dx - i xi_shift).
    Identically zero when mu = 0 or when the quintic power of u stays inside
    the cutoff plateau.
    """
    grid = field.grid
    i_mult = op.multiplier(grid)
    u = field.samples
    iu = _i_apply(u, i_mult)
    nonlin = mu * np.abs(u) ** 4 * u
    g_trunc = _i_apply(nonlin, i_mult)
    defect = mu * np.abs(iu) ** 4 * iu - g_trunc

    deriv = derivative_multiplier(grid)
    w_vec = np.fft.ifft(deriv * np.fft.fft(iu)) - 1j * xi_shift * iu
    rho_i = np.abs(iu) ** 2

    q = (g_trunc * np.conj(iu)).imag
    m = (np.conj(iu) * w_vec).imag
    conv_q = kernel_convolve(kernel, q, grid)
    conv_rho = kernel_convolve(kernel, rho_i, grid)
    d_defect = np.fft.ifft(deriv * np.fft.fft(defect)) - 1j * xi_shift * defect

    e1 = float(np.sum(m * conv_q) * grid.dx)
    e2 = float(0.5 * np.sum((defect * np.conj(w_vec)).real * conv_rho) * grid.dx)
    e3 = float(0.5 * np.sum((np.conj(iu) * d_defect).real * conv_rho) * grid.dx)
    return e1, e2, e3


def commutator_error_terms(traj, op, kernel, xi_series, t1=None, t2=None):
    """Time-quadrature (trapezoid over saved frames) of the three integrands.

    xi_series gives the recentering frequency at each saved frame (from the
    concentration tracker, linearly interpolated between frames); it is
    required and must match the number of frames in the window.
    """
    if xi_series is None:
        raise MorawetzError("xi(t) series is required; pass tracker output")
    times = traj.times
    i0 = 0 if t1 is None else traj.index_at(t1)
    i1 = len(times) - 1 if t2 is None else traj.index_at(t2)
    xi_series = np.asarray(xi_series, dtype=np.float64)
    if xi_series.shape == ():
        xi_series = np.full(i1 - i0 + 1, float(xi_series))
    if len(xi_series) != i1 - i0 + 1:
        raise MorawetzError(
            f"xi series has {len(xi_series)} entries for {i1 - i0 + 1} frames")
    mu = traj.cfg.mu if traj.cfg is not None else 1
    vals = np.array([
        commutator_error_integrands(traj.field(i), op, kernel, xi_series[i - i0], mu)
        for i in range(i0, i1 + 1)
    ])
    if i1 == i0:
        return 0.0, 0.0, 0.0
    t = times[i0:i1 + 1]
    return tuple(float(np.trapezoid(vals[:, k], t)) for k in range(3))


def kernel_admissibility(kernel, width=None, samples=8001):
    """Numeric admissibility report: oddness, uniform bound, derivative mass.

    Works for :class:`MorawetzKernel` or any callable a(z).  The derivative
    L^1 mass is measured as total variation over a wide sample grid, which
    also captures jump kernels; those are flagged as limit cases rather than
    failed.
    """
    eps = getattr(kernel, "epsilon", None)
    if width is None:
        width = max(12.0, 12.0 * eps) if eps else 12.0
    z = np.linspace(-width, width, samples)
    vals = np.asarray(kernel(z), dtype=np.float64)
    odd_defect = float(np.max(np.abs(vals + vals[::-1])))
    scale = float(np.max(np.abs(vals))) or 1.0
    c_bound = float(np.max(np.abs(vals)))
    tv = float(np.sum(np.abs(np.diff(vals))))
    steps = np.abs(np.diff(vals))
    limit_case = bool(eps == 0.0) if eps is not None else bool(
        steps.max() > 0.5 * max(tv, 1e-300))
    return {
        "odd": odd_defect <= 1e-10 * scale,
        "max_odd_defect": odd_defect,
        "c_bound": c_bound,
        "c_deriv_l1": tv,
        "limit_case": limit_case,
        "passed": (odd_defect <= 1e-10 * scale) and np.isfinite(c_bound) and np.isfinite(tv),
    }


def l8_bound_monitor(traj, kernel=None):
    """Space-time L^8 mass against its two a priori controls.

    Returns the accumulated int int |u|^8, the two ratios
    l8 / (sup_t ||u||_H1dot * mass^(3/2)) and l8 / sup_t |M(t)|, and the
    control quantities themselves.  Zero trajectories return zero ratios.
    Errors on focusing input: the action is not sign-definite there and the
    bound is not claimed.
    """
    if traj.cfg is None or traj.cfg.mu != 1:
        raise MorawetzError("L^8 bound monitor requires a defocusing trajectory")
    if kernel is None:
        kernel = MorawetzKernel(4.0 * traj.grid.dx, "odd")
    t = traj.times
    l8_inst = np.array([np.sum(np.abs(traj.frame(i)) ** 8) * traj.grid.dx
                        for i in range(len(t))])
    l8 = float(np.trapezoid(l8_inst, t)) if len(t) > 1 else 0.0
    sup_h1 = max(h_s_norm(traj.field(i), 1) for i in range(len(t)))
    m_three_halves = mass(traj.field(0)) ** 1.5
    sup_m = max(abs(interaction_action(traj.field(i), kernel)) for i in range(len(t)))

    def _ratio(num, den):
        if num == 0.0:
            return 0.0
        return num / den if den > 0 else float("inf")

    return {
        "l8": l8,
        "sup_h1": float(sup_h1),
        "mass_3_2": float(m_three_halves),
        "sup_action": float(sup_m),
        "ratio_h1_mass": _ratio(l8, sup_h1 * m_three_halves),
        "ratio_action": _ratio(l8, sup_m),
    }
