"""Verification statistics: error decay orders, iteration-order estimates,
moment-based diffusion estimates and Monte Carlo summaries."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConvergenceHistory",
    "RefinementStudy",
    "eoc",
    "comp_order_q",
    "comp_order_qq",
    "tail_loglog_slope",
    "moment_diffusion",
    "ensemble_dispersion",
    "mc_stats",
]


@dataclass
class ConvergenceHistory:
    """Ordered correction norms ||u^s - u^(s-1)|| of an iteration sequence."""

    norms: list = field(default_factory=list)

    def append(self, value: float) -> None:
        if value < 0.0:
            raise ValueError("correction norms are nonnegative")
        self.norms.append(float(value))

    def __len__(self) -> int:
        return len(self.norms)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.norms, dtype=float)


@dataclass(frozen=True)
class RefinementStudy:
    """Errors from successive grid halvings; spacings must halve exactly."""

    spacings: tuple
    errors: tuple

    def __post_init__(self):
        h = np.asarray(self.spacings, dtype=float)
        if len(h) != len(self.errors):
            raise ValueError("spacings and errors must align")
        if len(h) >= 2 and not np.allclose(h[:-1] / h[1:], 2.0, rtol=1e-12):
            raise ValueError("spacings must decrease by exact factors of 2")


def eoc(study: RefinementStudy) -> np.ndarray:
    """Estimated order of convergence log2(eps_l / eps_{l+1}) per level."""
    e = np.asarray(study.errors, dtype=float)
    if len(e) < 2:
        raise ValueError("need at least two refinement levels")
    if np.any(e == 0.0):
        raise ZeroDivisionError("zero error: exact-solution degenerate case")
    return np.log(e[:-1] / e[1:]) / np.log(2.0)


def _tail(a: np.ndarray, tail_fraction: float, min_points: int) -> np.ndarray:
    n = len(a)
    k = max(min_points, int(np.ceil(tail_fraction * n)))
    return a[max(0, n - k):]


def comp_order_q(history, tail_fraction: float = 0.25, min_points: int = 10) -> float:
    """Computational order of the correction sequence.

    Median over the tail window of log(a_{s+1}/a_s) / log(a_s/a_{s-1});
    a limit of 1 together with comp_order_qq < 1 indicates linear
    convergence.  NaN-safe where successive ratios degenerate.
    """
    a = history.as_array() if isinstance(history, ConvergenceHistory) else np.asarray(history, float)
    if len(a) < 4:
        raise ValueError("need at least 4 correction norms")
    with np.errstate(divide="ignore", invalid="ignore"):
        num = np.log(a[2:] / a[1:-1])
        den = np.log(a[1:-1] / a[:-2])
        q = num / den
    q = q[np.isfinite(q)]
    if len(q) == 0:
        return float("nan")
    return float(np.median(_tail(q, tail_fraction, min_points)))


def comp_order_qq(history, q: float = 1.0, tail_fraction: float = 0.25,
                  min_points: int = 10) -> float:
    """Semicomputational order: tail median of a_{s+1} / a_s**q."""
    a = history.as_array() if isinstance(history, ConvergenceHistory) else np.asarray(history, float)
    if len(a) < 2:
        raise ValueError("need at least 2 correction norms")
    with np.errstate(divide="ignore", invalid="ignore"):
        r = a[1:] / a[:-1] ** q
    r = r[np.isfinite(r)]
    if len(r) == 0:
        return float("nan")
    return float(np.median(_tail(r, tail_fraction, min_points)))


def tail_loglog_slope(history, tail_fraction: float = 0.5, min_points: int = 50) -> float:
    """Least-squares slope of log(a_s) vs log(s) over the tail window.

    A slope of -1 identifies corrections decaying like 1/s.
    """
    a = history.as_array() if isinstance(history, ConvergenceHistory) else np.asarray(history, float)
    s = np.arange(1, len(a) + 1, dtype=float)
    keep = a > 0.0
    a, s = a[keep], s[keep]
    a = _tail(a, tail_fraction, min_points)
    s = _tail(s, tail_fraction, min_points)
    if len(a) < 2:
        raise ValueError("history too short for a slope fit")
    return float(np.polyfit(np.log(s), np.log(a), 1)[0])


# -- moment-based diffusion estimates ----------------------------------------


def _axis_moments(conc: np.ndarray, coords: tuple) -> tuple:
    """Center of mass and centered second moment along each axis."""
    w = conc.astype(float)
    total = w.sum()
    if total <= 0.0:
        raise ValueError("nonpositive total mass in snapshot")
    centers, variances = [], []
    for ax, x in enumerate(coords):
        shape = [1] * w.ndim
        shape[ax] = len(x)
        xa = x.reshape(shape)
        mean = float((w * xa).sum() / total)
        var = float((w * (xa - mean) ** 2).sum() / total)
        centers.append(mean)
        variances.append(var)
    return centers, variances


def _support_inside(conc: np.ndarray, rel_tol: float = 1e-9) -> bool:
    peak = np.max(np.abs(conc))
    if peak == 0.0:
        return False
    if conc.ndim == 1:
        edges = [conc[0], conc[-1]]
    else:
        edges = [conc[0, :], conc[-1, :], conc[:, 0], conc[:, -1]]
    return all(np.max(np.abs(e)) <= rel_tol * peak for e in edges)


def moment_diffusion(snapshots, times, grid, true_d, require_support_inside=True):
    """Effective diffusion coefficients from spatial-moment growth.

    Per-interval variance slopes halved give D along each axis; relative
    deviations from ``true_d`` are averaged over the time interval.
    Returns (d_est_per_axis, eps_per_axis).
    """
    times = np.asarray(times, dtype=float)
    if len(snapshots) != len(times) or len(times) < 2:
        raise ValueError("need matching snapshots and at least two times")
    coords = grid.meshgrid() if grid.ndim == 1 else (grid.x, grid.z)
    if grid.ndim == 1:
        coords = (grid.z,)
    variances = []
    for c in snapshots:
        c = np.asarray(c, dtype=float)
        if require_support_inside and not _support_inside(c):
            raise ValueError("snapshot support touches the domain boundary")
        _, var = _axis_moments(c, coords)
        variances.append(var)
    variances = np.asarray(variances)  # (n_times, ndim)
    dt = np.diff(times)
    d_axis, eps_axis = [], []
    for ax in range(variances.shape[1]):
        slopes = np.diff(variances[:, ax]) / dt
        d_inst = 0.5 * slopes
        eps = np.mean(np.abs(d_inst - true_d) / true_d)
        d_axis.append(float(np.mean(d_inst)))
        eps_axis.append(float(eps))
    return tuple(d_axis), tuple(eps_axis)


def ensemble_dispersion(snapshot_sets, times, grid, normalize_by: float | None = None):
    """Time series of ensemble dispersion coefficients.

    Second spatial moments are centered at the ensemble-average center of
    mass, averaged over realizations, and differentiated in time; half the
    slope gives D per axis.  Returns dict with times (midpoints) and one
    series per axis.
    """
    times = np.asarray(times, dtype=float)
    n_real = len(snapshot_sets)
    if n_real < 1:
        raise ValueError("need at least one realization")
    coords = (grid.x, grid.z) if grid.ndim == 2 else (grid.z,)
    ndim = len(coords)
    n_t = len(times)
    for snaps in snapshot_sets:
        if len(snaps) != n_t:
            raise ValueError("all realizations must share the output times")

    # ensemble-average center of mass per time, then centered moments
    centers = np.zeros((n_t, ndim))
    masses = np.zeros((n_real, n_t))
    for r, snaps in enumerate(snapshot_sets):
        for k, c in enumerate(snaps):
            c = np.asarray(c, dtype=float)
            ctrs, _ = _axis_moments(c, coords)
            masses[r, k] = c.sum()
            centers[k] += ctrs
    centers /= n_real

    second = np.zeros((n_t, ndim))
    for snaps in snapshot_sets:
        for k, c in enumerate(snaps):
            c = np.asarray(c, dtype=float)
            total = c.sum()
            for ax, x in enumerate(coords):
                shape = [1] * c.ndim
                shape[ax] = len(x)
                xa = x.reshape(shape)
                second[k, ax] += float((c * (xa - centers[k, ax]) ** 2).sum() / total)
    second /= n_real

    dt = np.diff(times)
    series = {"t": 0.5 * (times[1:] + times[:-1])}
    names = ("x", "z") if ndim == 2 else ("z",)
    for ax, name in enumerate(names):
        d = 0.5 * np.diff(second[:, ax]) / dt
        if normalize_by:
            d = d / normalize_by
        series[f"d_{name}"] = d
    return series


def mc_stats(fields) -> dict:
    """Monte Carlo mean/variance fields plus spatial summaries.

    Returns pointwise mean and variance arrays, their spatial averages
    with spatial standard deviations, and the domain-center values.
    """
    stack = np.stack([np.asarray(f, dtype=float) for f in fields])
    if stack.shape[0] < 2:
        raise ValueError("need at least two realizations")
    mean = stack.mean(axis=0)
    var = stack.var(axis=0, ddof=1)
    center = tuple(s // 2 for s in mean.shape)
    return {
        "mean_field": mean,
        "var_field": var,
        "mean_spatial_avg": float(mean.mean()),
        "mean_spatial_std": float(mean.std()),
        "var_spatial_avg": float(var.mean()),
        "var_spatial_std": float(var.std()),
        "mean_at_center": float(mean[center]),
        "var_at_center": float(var[center]),
        "n_realizations": int(stack.shape[0]),
    }
