"""Periodic grids and sampled fields.

All spatial data lives on a uniform periodic grid over [0, L)^d with n
points per axis (n a power of two).  Free-space convolution semantics are
recovered by zero padding; see :mod:`riesz_modlab.convolve`.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field

import numpy as np

MAGIC = b"RMLF"
FORMAT_VERSION = 1


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: d dimensions, n points per axis, box length L."""

    d: int
    n: int
    L: float

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.d}")
        if not _is_power_of_two(self.n) or self.n < 8:
            raise ValueError(f"points per axis must be a power of two >= 8, got {self.n}")
        if not self.L > 0:
            raise ValueError(f"box length must be positive, got {self.L}")

    @property
    def h(self) -> float:
        """Cell size, uniform across axes."""
        return self.L / self.n

    @property
    def cell_volume(self) -> float:
        return self.h**self.d

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.d

    def axis_coords(self) -> np.ndarray:
        """Cell centers along one axis: x_i = (i + 1/2) h."""
        return (np.arange(self.n) + 0.5) * self.h

    def meshgrid(self):
        x = self.axis_coords()
        return np.meshgrid(*([x] * self.d), indexing="ij")

    def wavevectors(self, n: int | None = None, length: float | None = None):
        """Angular wavevectors 2*pi*m/L per axis, fftfreq layout."""
        n = self.n if n is None else n
        length = self.L if length is None else length
        k = 2.0 * np.pi * np.fft.fftfreq(n, d=length / n)
        return np.meshgrid(*([k] * self.d), indexing="ij")

    def k_norm(self, n: int | None = None, length: float | None = None) -> np.ndarray:
        ks = self.wavevectors(n, length)
        return np.sqrt(sum(k**2 for k in ks))


@dataclass
class ScalarField:
    """Sampled scalar density on a GridSpec."""

    grid: GridSpec
    values: np.ndarray
    mass: float = field(default=None)  # declared mass, sum * h^d

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")
        computed = float(self.values.sum() * self.grid.cell_volume)
        if self.mass is None:
            self.mass = computed
        else:
            scale = max(abs(self.mass), abs(computed), 1e-300)
            if abs(self.mass - computed) > 1e-12 * scale:
                raise ValueError(
                    f"declared mass {self.mass} inconsistent with values ({computed})")

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy())

    def __add__(self, other):
        return ScalarField(self.grid, self.values + other.values)

    def __sub__(self, other):
        return ScalarField(self.grid, self.values - other.values)

    def __mul__(self, c: float):
        return ScalarField(self.grid, self.values * c)

    __rmul__ = __mul__


@dataclass
class VectorField:
    """d-component vector field on a GridSpec."""

    grid: GridSpec
    components: list

    def __post_init__(self):
        self.components = [np.asarray(c, dtype=float) for c in self.components]
        if len(self.components) != self.grid.d:
            raise ValueError(f"expected {self.grid.d} components, got {len(self.components)}")
        for c in self.components:
            if c.shape != self.grid.shape:
                raise ValueError("component shape does not match grid")
            if not np.all(np.isfinite(c)):
                raise ValueError("vector components must be finite")

    def max_norm(self) -> float:
        return float(np.sqrt(sum(c**2 for c in self.components)).max())


def write_field(f, fld: ScalarField):
    """Binary serialization: magic, version u32, d, n (u32), L (f64), values."""
    g = fld.grid
    f.write(MAGIC)
    f.write(struct.pack("<III", FORMAT_VERSION, g.d, g.n))
    f.write(struct.pack("<d", g.L))
    f.write(np.ascontiguousarray(fld.values, dtype="<f8").tobytes())


def read_field(f) -> ScalarField:
    magic = f.read(4)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}, expected {MAGIC!r}")
    version, d, n = struct.unpack("<III", f.read(12))
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    (L,) = struct.unpack("<d", f.read(8))
    grid = GridSpec(d, n, L)
    raw = f.read(8 * n**d)
    values = np.frombuffer(raw, dtype="<f8").reshape(grid.shape).copy()
    return ScalarField(grid, values)


def field_to_bytes(fld: ScalarField) -> bytes:
    buf = io.BytesIO()
    write_field(buf, fld)
    return buf.getvalue()


def field_from_bytes(data: bytes) -> ScalarField:
    return read_field(io.BytesIO(data))


def field_to_csv(f, fld: ScalarField):
    """CSV export: one row per cell, index columns then the value."""
    g = fld.grid
    idx_cols = ",".join(f"i{a}" for a in range(g.d))
    f.write(f"{idx_cols},value\n")
    for idx in np.ndindex(*g.shape):
        pos = ",".join(str(i) for i in idx)
        f.write(f"{pos},{fld.values[idx]!r}\n")
