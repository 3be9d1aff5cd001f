"""Operational concentration trackers and small-interval bookkeeping.

The concentration parameters x(t), xi(t), N(t) of an almost periodic
solution are determined only up to equivalence, so they are realized here
operationally: the spatial and frequency centers/radii are the minimal
contiguous windows (periodic, grid-aligned) capturing a (1 - eta) fraction
of the mass, and N(t) is the frequency radius divided by the bookkeeping
constant C_eta.  All downstream quantities use these proxies consistently.

Small intervals partition a trajectory greedily so each carries exactly
eps0^6 of space-time L^6 mass (the last may be partial); each interval is
annotated with the sup of N(t) inside it.
"""

import numpy as np

from .functionals import l6_accumulation


class ConcentrationError(ValueError):
    """Invalid parameters or a zero field."""


class ConcentrationParams:
    """eta: mass-leak fraction in (0, 1/2); c_eta: window constant;
    eps0: small-interval L^6 budget."""

    def __init__(self, eta=0.1, c_eta=1.0, eps0=0.5):
        if not (0 < eta < 0.5):
            raise ConcentrationError(f"eta must lie in (0, 1/2), got {eta}")
        if not (c_eta > 0):
            raise ConcentrationError(f"c_eta must be positive, got {c_eta}")
        if not (eps0 > 0):
            raise ConcentrationError(f"eps0 must be positive, got {eps0}")
        self.eta = float(eta)
        self.c_eta = float(c_eta)
        self.eps0 = float(eps0)


class TrackerSample:
    """Windows of one frame: centers, radii, and the derived scale N_t.

    The windows are lattice runs; (start, width) index pairs are carried so
    covariance under lattice translations can be checked exactly (centers
    are float combinations of lattice values and carry representation
    rounding).
    """

    def __init__(self, t, x_center, x_radius, xi_center, xi_radius, n_t,
                 x_window=None, xi_window=None):
        self.t = t
        self.x_center = x_center
        self.x_radius = x_radius
        self.xi_center = xi_center
        self.xi_radius = xi_radius
        self.n_t = n_t
        self.x_window = x_window
        self.xi_window = xi_window

    def __repr__(self):
        return (f"TrackerSample(t={self.t:.6g}, x={self.x_center:.6g}+-{self.x_radius:.6g}, "
                f"xi={self.xi_center:.6g}+-{self.xi_radius:.6g}, N={self.n_t:.6g})")


class SmallInterval:
    """[t_start, t_end] carrying l6_mass of int int |u|^6; partial marks a
    final interval that could not reach the full eps0^6 budget."""

    def __init__(self, t_start, t_end, n_sup, l6_mass, partial=False):
        self.t_start = t_start
        self.t_end = t_end
        self.n_sup = n_sup
        self.l6_mass = l6_mass
        self.partial = partial

    def __repr__(self):
        flag = ", partial" if self.partial else ""
        return (f"SmallInterval([{self.t_start:.6g}, {self.t_end:.6g}], "
                f"N={self.n_sup:.6g}, l6^6={self.l6_mass:.6g}{flag})")


def _window_sums(weights, width):
    # circular window sums for every start index, via a doubled prefix sum
    n = len(weights)
    prefix = np.concatenate(([0.0], np.cumsum(np.concatenate([weights, weights]))))
    return prefix[width:width + n] - prefix[:n]


def minimal_window(weights, coords, spacing, period, frac):
    """Smallest centered window capturing >= frac of the total weight.

    Windows are contiguous runs of samples on the periodic lattice; the
    radius is half the span (width-1)*spacing/2 and the center is the
    midpoint, wrapped into [coords[0], coords[0] + period).  Among windows
    of minimal width, the leftmost wrapped center wins.
    Returns (center, radius, start, width).
    """
    weights = np.asarray(weights, dtype=np.float64)
    n = len(weights)
    total = float(weights.sum())
    if total <= 0:
        raise ConcentrationError("cannot track a field with no mass")
    target = frac * total
    lo, hi = 1, n
    while lo < hi:
        mid = (lo + hi) // 2
        if _window_sums(weights, mid).max() >= target:
            hi = mid
        else:
            lo = mid + 1
    width = lo
    starts = np.nonzero(_window_sums(weights, width) >= target)[0]
    base = coords[0]
    centers = (coords[starts] + 0.5 * (width - 1) * spacing - base) % period + base
    pick = int(np.argmin(centers))
    return (float(centers[pick]), float(0.5 * (width - 1) * spacing),
            int(starts[pick]), width)


def minimal_window_exhaustive(weights, coords, spacing, period, frac):
    """Brute-force oracle for :func:`minimal_window`: tries every (start,
    width) pair, summing each window directly."""
    weights = np.asarray(weights, dtype=np.float64)
    n = len(weights)
    total = float(weights.sum())
    if total <= 0:
        raise ConcentrationError("cannot track a field with no mass")
    target = frac * total
    doubled = np.concatenate([weights, weights])
    base = coords[0]
    for width in range(1, n + 1):
        hits = []
        for start in range(n):
            if float(np.sum(doubled[start:start + width])) >= target:
                center = (coords[start] + 0.5 * (width - 1) * spacing - base) % period + base
                hits.append((center, start))
        if hits:
            center, start = min(hits)
            return float(center), float(0.5 * (width - 1) * spacing), int(start), width
    return float(coords[0] % period), float(0.5 * (n - 1) * spacing), 0, n


def track(field, params, exhaustive=False):
    """Locate the (1 - eta)-mass windows of a frame in x and in xi.

    The frequency search runs on the fftshifted (ascending) lattice; both
    searches are periodic so the windows covary exactly with lattice
    translations (boosts) and dilations.  N_t = xi_radius / c_eta.
    """
    grid = field.grid
    search = minimal_window_exhaustive if exhaustive else minimal_window
    frac = 1.0 - params.eta

    rho_x = np.abs(field.samples) ** 2 * grid.dx
    if float(rho_x.sum()) <= 0.0:
        raise ConcentrationError("cannot track the zero field")
    x_center, x_radius, x_start, x_width = search(rho_x, grid.x, grid.dx,
                                                  grid.length, frac)

    coeffs = np.fft.fft(field.samples)
    rho_xi = np.fft.fftshift(np.abs(coeffs) ** 2) * (grid.dx / grid.n)
    xi_coords = np.fft.fftshift(grid.xi)
    xi_center, xi_radius, xi_start, xi_width = search(rho_xi, xi_coords,
                                                      grid.dxi, 2.0 * grid.xi_max, frac)

    return TrackerSample(field.time, x_center, x_radius, xi_center, xi_radius,
                         xi_radius / params.c_eta,
                         x_window=(x_start, x_width), xi_window=(xi_start, xi_width))


def track_trajectory(traj, params):
    """Tracker samples at every saved frame."""
    return [track(traj.field(i), params) for i in range(len(traj.times))]


def partition_small_intervals(traj, params, tracker_samples=None):
    """Greedy left-to-right cuts where the running L^6 mass reaches eps0^6.

    Cut times interpolate linearly within a frame gap.  If the total mass
    falls short of one budget, a single interval flagged partial is
    returned.  Each interval carries the sup of N(t) over tracker samples
    inside it (endpoint values interpolated).
    """
    times, cum = l6_accumulation(traj)
    if tracker_samples is None:
        tracker_samples = track_trajectory(traj, params)
    n_series = np.array([s.n_t for s in tracker_samples])
    total = float(cum[-1])
    step = params.eps0**6

    def cut_time(target):
        j = int(np.searchsorted(cum, target, side="left"))
        j = min(max(j, 1), len(cum) - 1)
        lo, hi = cum[j - 1], cum[j]
        if hi <= lo:
            return float(times[j])
        s = (target - lo) / (hi - lo)
        return float(times[j - 1] + s * (times[j] - times[j - 1]))

    def n_sup(a, b):
        inside = n_series[(times >= a - 1e-12) & (times <= b + 1e-12)]
        ends = np.interp([a, b], times, n_series)
        return float(max(ends.max(), inside.max() if inside.size else -np.inf))

    intervals = []
    if total < step * (1.0 - 1e-9) or total == 0.0:
        intervals.append(SmallInterval(float(times[0]), float(times[-1]),
                                       n_sup(times[0], times[-1]), total, partial=True))
        return intervals

    n_full = int(np.floor(total / step + 1e-9))
    bounds = [float(times[0])]
    for k in range(1, n_full):
        bounds.append(cut_time(k * step))
    remainder = total - n_full * step
    exact = abs(remainder) <= 1e-9 * max(total, 1.0)
    if exact:
        bounds.append(float(times[-1]))
    else:
        bounds.append(cut_time(n_full * step))
        bounds.append(float(times[-1]))
    for k in range(len(bounds) - 1):
        a, b = bounds[k], bounds[k + 1]
        is_last_partial = (not exact) and (k == len(bounds) - 2)
        intervals.append(SmallInterval(a, b, n_sup(a, b),
                                       remainder if is_last_partial else step,
                                       partial=is_last_partial))
    return intervals


def bookkeeping(traj, partition, tracker_samples):
    """Scalar summaries: sum of N(J_l), integrals of N(t)^2 and N(t)^3,
    the drift of xi(t), and the three ratio diagnostics.

    Ratios are reported, not asserted against paper constants; zero
    denominators yield 0 when the numerator is also 0, else inf.
    """
    times = np.array([s.t for s in tracker_samples])
    n_series = np.array([s.n_t for s in tracker_samples])
    xi_series = np.array([s.xi_center for s in tracker_samples])
    sum_n = float(sum(j.n_sup for j in partition))
    int_n3 = float(np.trapezoid(n_series**3, times)) if len(times) > 1 else 0.0
    int_n2 = float(np.trapezoid(n_series**2, times)) if len(times) > 1 else 0.0
    xi_drift = float(abs(xi_series[-1] - xi_series[0]))
    _, cum = l6_accumulation(traj)
    l6_total = float(cum[-1])

    def _ratio(num, den):
        if num == 0.0:
            return 0.0
        return num / den if den > 0 else float("inf")

    return {
        "sum_n": sum_n,
        "int_n3": int_n3,
        "int_n2": int_n2,
        "xi_drift": xi_drift,
        "l6_sixth_power": l6_total,
        "n2_over_l6": _ratio(int_n2, l6_total),
        "sum_n_over_n3": _ratio(sum_n, int_n3),
        "xi_drift_over_sum_n": _ratio(xi_drift, sum_n),
    }
