"""Regular lattices, particle-count fields, norms and redistribution.

The solvers approximate a field value at a lattice site by n * a / N,
where n is a (possibly huge) number of computational particles, N is the
global scaling count and a a unit length.  With the default N = 1e24
integer counts exceed 64-bit range, so integer semantics are kept through
floor-plus-remainder bookkeeping on float arrays instead of wide integers.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Grid",
    "ParticleField",
    "Deterministic",
    "RemainderCarry",
    "Binomial",
    "redistribute",
    "l2_norm",
    "relative_error",
    "euclidean_norm",
]

DEFAULT_N_PARTICLES = 1.0e24


@dataclass(frozen=True)
class Grid:
    """Uniform 1D/2D lattice; nx = 1 selects a one-dimensional column.

    Fields are stored x-major with shape (nx, nz) in 2D and (nz,) in 1D.
    ``z_up`` records the orientation of the z axis (positive upward for
    the pressure solvers, downward for infiltration in saturation form).
    """

    nz: int
    dz: float
    nx: int = 1
    dx: float = 1.0
    x0: float = 0.0
    z0: float = 0.0
    z_up: bool = True

    def __post_init__(self):
        if self.nz < 2 or self.nx < 1:
            raise ValueError("grid needs nz >= 2 and nx >= 1")
        if self.dz <= 0.0 or self.dx <= 0.0:
            raise ValueError("grid spacings must be positive")

    @property
    def ndim(self) -> int:
        return 1 if self.nx == 1 else 2

    @property
    def z(self) -> np.ndarray:
        return self.z0 + self.dz * np.arange(self.nz)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def shape(self):
        return (self.nz,) if self.ndim == 1 else (self.nx, self.nz)

    @property
    def cell_volume(self) -> float:
        return self.dz if self.ndim == 1 else self.dx * self.dz

    def meshgrid(self):
        """Coordinate arrays broadcast to the field shape."""
        if self.ndim == 1:
            return (self.z,)
        xx, zz = np.meshgrid(self.x, self.z, indexing="ij")
        return xx, zz


# -- norms ------------------------------------------------------------------


def l2_norm(values, grid: Grid) -> float:
    """Discrete L2 norm sqrt(sum v_i^2 * cell volume)."""
    v = np.asarray(values, dtype=float)
    return float(np.sqrt(np.sum(v * v) * grid.cell_volume))


def euclidean_norm(values) -> float:
    """Plain Euclidean vector norm, the stopping-test convention."""
    v = np.asarray(values, dtype=float)
    return float(np.sqrt(np.sum(v * v)))


def relative_error(values, reference, grid: Grid) -> float:
    """L2 relative error ||v - w|| / ||w||."""
    ref_norm = l2_norm(reference, grid)
    if ref_norm == 0.0:
        raise ZeroDivisionError("reference field has zero norm")
    return l2_norm(np.asarray(values) - np.asarray(reference), grid) / ref_norm


# -- redistribution modes ----------------------------------------------------


class Deterministic:
    """Exact real-valued splitting: contributions are the plain products."""

    def split(self, weights, n):
        return [np.asarray(w, dtype=float) * n for w in weights]

    def reset(self):
        pass


class RemainderCarry:
    """Integer-count splitting with per-stream remainder accumulators.

    Each destination stream floors its expected contribution and carries
    the remainder; one extra particle is emitted whenever the running
    remainder reaches unity.  Totals over any window where accumulators
    return to their start are conserved exactly.
    """

    def __init__(self):
        self._acc: dict[int, np.ndarray] = {}

    # tolerance absorbs float drift of repeated fractional additions so a
    # remainder that should reach exactly 1.0 still emits its particle
    _EPS = 1e-9

    def split(self, weights, n):
        out = []
        for k, w in enumerate(weights):
            expected = np.asarray(w, dtype=float) * n
            acc = self._acc.get(k)
            if acc is None or np.shape(acc) != np.shape(expected):
                acc = np.zeros_like(expected)
            acc = acc + expected
            emitted = np.floor(acc + self._EPS)
            self._acc[k] = acc - emitted
            out.append(emitted)
        return out

    def reset(self):
        """Drop accumulators (called at the start of each time step)."""
        self._acc.clear()


class Binomial:
    """Random integer splitting with binomial marginals.

    Counts must fit in int64; use RemainderCarry for N beyond 2**63.
    """

    def __init__(self, rng: np.random.Generator | int | None = None):
        if isinstance(rng, np.random.Generator):
            self.rng = rng
        else:
            self.rng = np.random.default_rng(rng)

    def split(self, weights, n):
        n = np.asarray(n)
        if np.any(np.abs(n) >= 2**63):
            raise ValueError("Binomial mode requires counts within int64 range")
        remaining = np.rint(np.abs(n)).astype(np.int64)
        sign = np.sign(n) if np.any(np.asarray(n) < 0) else 1.0
        prob_left = np.ones_like(np.asarray(n, dtype=float))
        out = []
        for w in weights:
            w = np.broadcast_to(np.asarray(w, dtype=float), remaining.shape)
            p = np.divide(w, prob_left, out=np.zeros_like(prob_left), where=prob_left > 1e-300)
            drawn = self.rng.binomial(remaining, np.clip(p, 0.0, 1.0))
            remaining = remaining - drawn
            prob_left = prob_left - w
            out.append(drawn * sign)
        return out

    def reset(self):
        pass


def redistribute(weights, n, mode):
    """Split n particles over destinations with the given fractions.

    ``weights`` are per-destination fractions, each in [0, 1], summing to
    at most 1; the residue stays in place and is not returned.
    """
    total = np.zeros(1, dtype=float)
    for w in weights:
        w = np.asarray(w, dtype=float)
        if np.any(w < -1e-12) or np.any(w > 1.0 + 1e-12):
            raise ValueError("weights must lie in [0, 1]")
        total = total + w
    if np.any(total > 1.0 + 1e-12):
        raise ValueError("weights sum exceeds 1")
    return mode.split(weights, n)


# -- particle field ----------------------------------------------------------


@dataclass
class ParticleField:
    """Lattice distribution of computational particles scaled to a field.

    value = counts * unit_scale / n_total holds exactly by construction.
    """

    grid: Grid
    counts: np.ndarray
    n_total: float = DEFAULT_N_PARTICLES
    unit_scale: float = 1.0

    @classmethod
    def from_values(cls, grid: Grid, values, n_total: float = DEFAULT_N_PARTICLES,
                    unit_scale: float = 1.0) -> "ParticleField":
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError(f"field shape {values.shape} != grid shape {grid.shape}")
        return cls(grid, values * n_total / unit_scale, n_total, unit_scale)

    @property
    def values(self) -> np.ndarray:
        return self.counts * self.unit_scale / self.n_total

    # serialization: one CSV row per site, and a compact binary dump

    def to_csv(self, path) -> None:
        g = self.grid
        vals = self.values
        with open(path, "w") as fh:
            if g.ndim == 1:
                fh.write("i,z,value\n")
                for i, (zc, v) in enumerate(zip(g.z, vals)):
                    fh.write(f"{i},{zc:.17g},{v:.17g}\n")
            else:
                fh.write("i,j,x,z,value\n")
                for i, xc in enumerate(g.x):
                    for j, zc in enumerate(g.z):
                        fh.write(f"{i},{j},{xc:.17g},{zc:.17g},{vals[i, j]:.17g}\n")

    _MAGIC = b"GRWF"
    _VERSION = 1

    def to_binary(self, path) -> None:
        """Little-endian dump: magic, version, nx, nz, dx, dz, float64 payload."""
        g = self.grid
        header = struct.pack("<4sIqqdd", self._MAGIC, self._VERSION, g.nx, g.nz, g.dx, g.dz)
        payload = np.ascontiguousarray(self.values, dtype="<f8").tobytes()
        Path(path).write_bytes(header + payload)

    @classmethod
    def from_binary(cls, path, n_total: float = DEFAULT_N_PARTICLES,
                    unit_scale: float = 1.0) -> "ParticleField":
        raw = Path(path).read_bytes()
        head = struct.calcsize("<4sIqqdd")
        magic, version, nx, nz, dx, dz = struct.unpack("<4sIqqdd", raw[:head])
        if magic != cls._MAGIC:
            raise ValueError("not a field dump (bad magic)")
        if version != cls._VERSION:
            raise ValueError(f"unsupported dump version {version}")
        values = np.frombuffer(raw[head:], dtype="<f8").astype(float)
        grid = Grid(nz=nz, dz=dz, nx=nx, dx=dx)
        return cls.from_values(grid, values.reshape(grid.shape), n_total, unit_scale)
