"""Closed-form soil constitutive laws.

Water retention theta(psi), hydraulic conductivity K, unsaturated
diffusivity, surfactant surface-tension scaling and the nonlinear
reaction rate.  All functions are vectorized over numpy arrays and are
pure: they never mutate their inputs and are safe to call from any
number of workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ExpModelParams",
    "VgmParams",
    "FujitaParams",
    "SurfactantParams",
    "theta_exp",
    "k_exp",
    "dtheta_dpsi_exp",
    "theta_vgm",
    "psi_vgm",
    "k_vgm",
    "dtheta_dpsi_vgm",
    "k_vgm_of_saturation",
    "dk_dsaturation_vgm",
    "diffusivity_vgm",
    "fujita_diffusivity",
    "gamma_surfactant",
    "theta_coupled",
    "reaction_rate",
    "l_theta_bound",
]


@dataclass(frozen=True)
class ExpModelParams:
    """Exponential retention/conductivity model parameters."""

    theta_res: float
    theta_sat: float
    k_sat: float
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.theta_res < self.theta_sat <= 1.0:
            raise ValueError("require 0 <= theta_res < theta_sat <= 1")
        if self.k_sat <= 0.0 or self.alpha <= 0.0:
            raise ValueError("k_sat and alpha must be positive")


@dataclass(frozen=True)
class VgmParams:
    """van Genuchten-Mualem model parameters; m is fixed to 1 - 1/n."""

    theta_res: float
    theta_sat: float
    k_sat: float
    alpha: float
    n: float
    m: float = field(init=False)

    def __post_init__(self):
        if self.n <= 1.0:
            raise ValueError("shape exponent n must exceed 1")
        if not 0.0 <= self.theta_res < self.theta_sat:
            raise ValueError("require 0 <= theta_res < theta_sat")
        if self.k_sat <= 0.0 or self.alpha <= 0.0:
            raise ValueError("k_sat and alpha must be positive")
        object.__setattr__(self, "m", 1.0 - 1.0 / self.n)


@dataclass(frozen=True)
class FujitaParams:
    """Parameters of the rational diffusivity model D0/(1 - v*S)^2."""

    d0: float
    v: float

    def __post_init__(self):
        if self.d0 <= 0.0:
            raise ValueError("d0 must be positive")
        if not 0.0 <= self.v < 1.0:
            raise ValueError("v must lie in [0, 1)")


@dataclass(frozen=True)
class SurfactantParams:
    """Constants of the surface-tension scaling gamma(c)."""

    a_gamma: float
    b_gamma: float

    def __post_init__(self):
        if self.a_gamma <= 0.0:
            raise ValueError("a_gamma must be positive")


# -- exponential model ----------------------------------------------------


def theta_exp(psi, p: ExpModelParams):
    """Water content for the exponential model; theta_sat for psi >= 0."""
    psi = np.asarray(psi, dtype=float)
    wet = p.theta_res + (p.theta_sat - p.theta_res) * np.exp(p.alpha * np.minimum(psi, 0.0))
    return np.where(psi >= 0.0, p.theta_sat, wet)


def k_exp(theta, p: ExpModelParams):
    """Conductivity linear in water content between K(theta_res)=0 and K_sat."""
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < p.theta_res - 1e-12) or np.any(theta > p.theta_sat + 1e-12):
        raise ValueError("theta outside [theta_res, theta_sat]")
    return p.k_sat * (theta - p.theta_res) / (p.theta_sat - p.theta_res)


def dtheta_dpsi_exp(psi, p: ExpModelParams):
    """Analytic d(theta)/d(psi); zero on the saturated branch."""
    psi = np.asarray(psi, dtype=float)
    d = p.alpha * (p.theta_sat - p.theta_res) * np.exp(p.alpha * np.minimum(psi, 0.0))
    return np.where(psi >= 0.0, 0.0, d)


# -- van Genuchten-Mualem model -------------------------------------------


def saturation_vgm(psi, p: VgmParams):
    """Normalized water content S(psi) = (1+(-alpha*psi)^n)^(-m), 1 for psi >= 0."""
    psi = np.asarray(psi, dtype=float)
    neg = np.minimum(psi, 0.0)
    s = (1.0 + (-p.alpha * neg) ** p.n) ** (-p.m)
    return np.where(psi >= 0.0, 1.0, s)


def theta_vgm(psi, p: VgmParams):
    """Water content theta = theta_res + (theta_sat - theta_res) * S(psi)."""
    theta = p.theta_res + (p.theta_sat - p.theta_res) * saturation_vgm(psi, p)
    return np.where(np.asarray(psi, dtype=float) >= 0.0, p.theta_sat, theta)


def psi_vgm(theta, p: VgmParams):
    """Exact inverse of theta_vgm on the unsaturated branch.

    Raises ValueError at (or outside) theta_res and theta_sat, where the
    inverse is unbounded.
    """
    theta = np.asarray(theta, dtype=float)
    s = (theta - p.theta_res) / (p.theta_sat - p.theta_res)
    if np.any(s <= 0.0) or np.any(s >= 1.0):
        raise ValueError("inverse defined only for theta strictly inside (theta_res, theta_sat)")
    return -((s ** (-1.0 / p.m) - 1.0) ** (1.0 / p.n)) / p.alpha


def k_vgm_of_saturation(s, p: VgmParams):
    """Mualem conductivity as a function of normalized content S in [0, 1]."""
    s = np.asarray(s, dtype=float)
    s = np.clip(s, 0.0, 1.0)
    return p.k_sat * np.sqrt(s) * (1.0 - (1.0 - s ** (1.0 / p.m)) ** p.m) ** 2


def k_vgm(psi, p: VgmParams):
    """Conductivity K(S(psi)); K_sat on the saturated branch."""
    return k_vgm_of_saturation(saturation_vgm(psi, p), p)


def dtheta_dpsi_vgm(psi, p: VgmParams):
    """Analytic d(theta)/d(psi); zero on the saturated branch."""
    psi = np.asarray(psi, dtype=float)
    neg = np.minimum(psi, -1e-300)
    x = (-p.alpha * neg) ** p.n
    d = (p.theta_sat - p.theta_res) * p.m * p.n * p.alpha * (
        (-p.alpha * neg) ** (p.n - 1.0)
    ) * (1.0 + x) ** (-p.m - 1.0)
    return np.where(psi >= 0.0, 0.0, d)


def dk_dsaturation_vgm(s, p: VgmParams):
    """Analytic dK/dS of the Mualem conductivity, used as advective drift."""
    s = np.asarray(s, dtype=float)
    s = np.clip(s, 1e-15, 1.0 - 1e-15)
    t = s ** (1.0 / p.m)
    g = 1.0 - (1.0 - t) ** p.m
    dg = (1.0 - t) ** (p.m - 1.0) * t / s
    return p.k_sat * (0.5 * g**2 / np.sqrt(s) + 2.0 * np.sqrt(s) * g * dg)


def dpsi_dsaturation_vgm(s, p: VgmParams):
    """Analytic d(psi)/dS of the retention inverse, positive on (0, 1)."""
    s = np.asarray(s, dtype=float)
    s = np.clip(s, 1e-15, 1.0 - 1e-15)
    y = s ** (-1.0 / p.m) - 1.0
    return y ** (1.0 / p.n - 1.0) * s ** (-1.0 / p.m - 1.0) / (p.alpha * p.n * p.m)


def diffusivity_vgm(s, p: VgmParams):
    """Moisture diffusivity D(S) = K(S) dpsi/dS / (theta_sat - theta_res).

    Diverges as S -> 1; callers must keep midpoint saturations below 1.
    """
    return (
        k_vgm_of_saturation(s, p)
        * dpsi_dsaturation_vgm(s, p)
        / (p.theta_sat - p.theta_res)
    )


# -- Fujita diffusivity, surfactant coupling, reaction ---------------------


def fujita_diffusivity(s, p: FujitaParams):
    """Rational diffusivity D0/(1 - v*S)^2, strictly increasing in S."""
    s = np.asarray(s, dtype=float)
    denom = 1.0 - p.v * s
    if np.any(denom <= 0.0):
        raise ValueError("v*S >= 1: diffusivity singular")
    return p.d0 / denom**2


def gamma_surfactant(c, p: SurfactantParams):
    """Surface-tension scaling gamma(c) = 1/(1 - b*ln(c/a + 1)); gamma(0) = 1."""
    c = np.asarray(c, dtype=float)
    denom = 1.0 - p.b_gamma * np.log(c / p.a_gamma + 1.0)
    if np.any(denom <= 0.0):
        raise ValueError("gamma(c) denominator nonpositive for given parameters")
    return 1.0 / denom


def theta_coupled(psi, c, theta_fn, p: SurfactantParams):
    """Concentration-dependent water content theta(gamma(c) * psi)."""
    return theta_fn(gamma_surfactant(c, p) * np.asarray(psi, dtype=float))


def reaction_rate(c):
    """Bounded nonlinear reaction 1e-3 * c / (1 + c)."""
    c = np.asarray(c, dtype=float)
    return 1.0e-3 * c / (1.0 + c)


# -- diagnostics -----------------------------------------------------------


def l_theta_bound(dtheta_dpsi_fn, psi_min=-1e3, psi_max=-1e-9, n_grid=4096):
    """Numerical sup of |dtheta/dpsi| over a log-spaced pressure grid.

    Reporting aid only; the iterative solvers do not require their
    stabilization constant to exceed this value.
    """
    grid = -np.logspace(np.log10(-psi_max), np.log10(-psi_min), n_grid)
    return float(np.max(np.abs(dtheta_dpsi_fn(grid))))
