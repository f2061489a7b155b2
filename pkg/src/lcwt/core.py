"""Value types shared by every module: canonical matrices, sampled signals,
scale/shift grids and measurable subsets of the half-plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, InvalidMatrix

DET_TOL = 1e-12
B_ZERO_TOL = 1e-14
GRID_RTOL = 1e-12


def _frozen(values, dtype=complex):
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CanonicalMatrix:
    """Unimodular 2x2 parameter matrix ``(A, B; C, D)``."""

    A: float
    B: float
    C: float
    D: float

    def __post_init__(self):
        for name in "ABCD":
            object.__setattr__(self, name, float(getattr(self, name)))
            if not np.isfinite(getattr(self, name)):
                raise InvalidMatrix(f"{name} is not finite")
        det = self.A * self.D - self.B * self.C
        if abs(det - 1.0) > DET_TOL:
            raise InvalidMatrix(f"determinant A*D - B*C = {det!r}, expected 1")

    @classmethod
    def from_sequence(cls, seq) -> "CanonicalMatrix":
        a, b, c, d = (float(x) for x in seq)
        return cls(a, b, c, d)

    @property
    def b_is_zero(self) -> bool:
        return abs(self.B) <= B_ZERO_TOL

    @property
    def det(self) -> float:
        return self.A * self.D - self.B * self.C

    def as_array(self) -> np.ndarray:
        return np.array([[self.A, self.B], [self.C, self.D]])

    def as_tuple(self) -> tuple:
        return (self.A, self.B, self.C, self.D)

    def inverse(self) -> "CanonicalMatrix":
        return matrix_inverse(self)

    def __matmul__(self, other: "CanonicalMatrix") -> "CanonicalMatrix":
        return matrix_compose(self, other)


IDENTITY = CanonicalMatrix(1.0, 0.0, 0.0, 1.0)
FOURIER = CanonicalMatrix(0.0, 1.0, -1.0, 0.0)


def matrix_compose(M: CanonicalMatrix, N: CanonicalMatrix) -> CanonicalMatrix:
    """Matrix product ``M @ N``; the transform of the product is the
    composition of the two transforms (``N`` applied first)."""
    return CanonicalMatrix(
        M.A * N.A + M.B * N.C,
        M.A * N.B + M.B * N.D,
        M.C * N.A + M.D * N.C,
        M.C * N.B + M.D * N.D,
    )


def matrix_inverse(M: CanonicalMatrix) -> CanonicalMatrix:
    return CanonicalMatrix(M.D, -M.B, -M.C, M.A)


def shear(s: float) -> CanonicalMatrix:
    return CanonicalMatrix(1.0, s, 0.0, 1.0)


def rotation(theta: float) -> CanonicalMatrix:
    c, s = np.cos(theta), np.sin(theta)
    return CanonicalMatrix(c, s, -s, c)


def random_unimodular(rng: np.random.Generator, b_min: float = 0.05, b_max: float = 4.0) -> CanonicalMatrix:
    """Draw ``shear * rotation * shear`` with bounded parameters, rejecting
    draws whose ``|B|`` falls below ``b_min``."""
    while True:
        M = shear(rng.uniform(-b_max, b_max)) @ rotation(rng.uniform(-np.pi, np.pi))
        M = M @ shear(rng.uniform(-b_max, b_max))
        if b_min <= abs(M.B) <= 4.0 * b_max:
            return M


@dataclass(frozen=True)
class SampledSignal:
    """Uniformly sampled complex signal ``values[k] = f(t0 + k*dt)``."""

    t0: float
    dt: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "dt", float(self.dt))
        vals = _frozen(self.values)
        if vals.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if not (self.dt > 0 and np.isfinite(self.dt) and np.isfinite(self.t0)):
            raise ValueError(f"invalid grid: t0={self.t0}, dt={self.dt}")
        if vals.size < 2:
            raise ValueError("a signal needs at least two samples")
        if not np.all(np.isfinite(vals)):
            raise ValueError("signal values must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, fn, t0: float, dt: float, n: int) -> "SampledSignal":
        t = t0 + dt * np.arange(n)
        return cls(t0, dt, fn(t))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def t_end(self) -> float:
        return self.t0 + self.dt * (self.n - 1)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.dt))

    def with_values(self, values) -> "SampledSignal":
        return SampledSignal(self.t0, self.dt, values)

    def same_grid(self, other: "SampledSignal") -> bool:
        return (
            self.n == other.n
            and abs(self.dt - other.dt) <= GRID_RTOL * self.dt
            and abs(self.t0 - other.t0) <= GRID_RTOL * max(self.dt * self.n, abs(self.t0))
        )

    def __add__(self, other):
        check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __mul__(self, c):
        return self.with_values(self.values * c)

    __rmul__ = __mul__


def check_same_grid(x: SampledSignal, y: SampledSignal) -> None:
    if not x.same_grid(y):
        raise GridMismatch(
            f"grids differ: (t0={x.t0}, dt={x.dt}, n={x.n}) vs (t0={y.t0}, dt={y.dt}, n={y.n})"
        )


def inner_product(x: SampledSignal, y: SampledSignal) -> complex:
    """Midpoint-rule approximation of the L2 inner product <x, y>."""
    check_same_grid(x, y)
    return complex(np.vdot(y.values, x.values) * x.dt)


@dataclass(frozen=True)
class ScaleShiftGrid:
    """Geometric scale axis ``a_j = a_min * ratio**j`` times a uniform shift
    axis ``b_k = b0 + k*db``."""

    a_min: float
    ratio: float
    n_scales: int
    b0: float
    db: float
    n_shifts: int

    def __post_init__(self):
        for name in ("a_min", "ratio", "b0", "db"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "n_scales", int(self.n_scales))
        object.__setattr__(self, "n_shifts", int(self.n_shifts))
        if not self.a_min > 0:
            raise ValueError("scales must be strictly positive")
        if not self.ratio > 1:
            raise ValueError("scale ratio must exceed 1 (strictly increasing scales)")
        if not self.db > 0:
            raise ValueError("shift step must be positive")
        if self.n_scales < 1 or self.n_shifts < 1:
            raise ValueError("grid must have at least one scale and one shift")

    @classmethod
    def from_range(cls, a_min: float, a_max: float, n_scales: int, b0: float, db: float, n_shifts: int):
        ratio = (a_max / a_min) ** (1.0 / (n_scales - 1))
        return cls(a_min, ratio, n_scales, b0, db, n_shifts)

    @classmethod
    def from_arrays(cls, scales, shifts) -> "ScaleShiftGrid":
        scales = np.asarray(scales, dtype=float)
        shifts = np.asarray(shifts, dtype=float)
        if scales.size < 2 or shifts.size < 2:
            raise ValueError("from_arrays needs at least two scales and two shifts")
        r = scales[1:] / scales[:-1]
        if np.any(scales <= 0) or np.any(r <= 1) or np.ptp(r) > GRID_RTOL * r[0]:
            raise ValueError("scales must be positive, increasing and geometric")
        d = np.diff(shifts)
        if np.any(d <= 0) or np.ptp(d) > GRID_RTOL * max(d[0], np.abs(shifts).max()):
            raise ValueError("shifts must be uniformly spaced")
        return cls(scales[0], float(np.mean(r)), scales.size, shifts[0], float(np.mean(d)), shifts.size)

    @property
    def scales(self) -> np.ndarray:
        return self.a_min * self.ratio ** np.arange(self.n_scales)

    @property
    def shifts(self) -> np.ndarray:
        return self.b0 + self.db * np.arange(self.n_shifts)

    @property
    def shape(self) -> tuple:
        return (self.n_scales, self.n_shifts)

    @property
    def a_max(self) -> float:
        return float(self.scales[-1])

    @property
    def scale_widths(self) -> np.ndarray:
        """Log-cell width ``da_j = a_j * ln(ratio)``."""
        return self.scales * np.log(self.ratio)

    @property
    def cell_measure(self) -> np.ndarray:
        """``da_j * db`` broadcast to the grid shape."""
        return np.repeat((self.scale_widths * self.db)[:, None], self.n_shifts, axis=1)

    def refine(self) -> "ScaleShiftGrid":
        """Double the density on both axes, keeping the end points."""
        return ScaleShiftGrid(
            self.a_min, np.sqrt(self.ratio), 2 * self.n_scales - 1,
            self.b0, self.db / 2, 2 * self.n_shifts - 1,
        )

    def metadata(self) -> dict:
        return {
            "a_min": self.a_min,
            "ratio": self.ratio,
            "n_scales": self.n_scales,
            "b0": self.b0,
            "db": self.db,
            "n_shifts": self.n_shifts,
        }


@dataclass(frozen=True)
class PlaneMeasureSet:
    """Boolean mask over a :class:`ScaleShiftGrid`; the measure of the set
    is the summed ``da*db`` of its cells."""

    mask: np.ndarray = field(repr=False)
    grid: ScaleShiftGrid

    def __post_init__(self):
        mask = np.array(self.mask, dtype=bool, copy=True)
        if mask.shape != self.grid.shape:
            raise GridMismatch(f"mask shape {mask.shape} != grid shape {self.grid.shape}")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def empty(cls, grid: ScaleShiftGrid) -> "PlaneMeasureSet":
        return cls(np.zeros(grid.shape, dtype=bool), grid)

    @classmethod
    def full(cls, grid: ScaleShiftGrid) -> "PlaneMeasureSet":
        return cls(np.ones(grid.shape, dtype=bool), grid)

    @classmethod
    def half_disk(cls, grid: ScaleShiftGrid, radius: float) -> "PlaneMeasureSet":
        a = grid.scales[:, None]
        b = grid.shifts[None, :]
        return cls(a**2 + b**2 <= radius**2, grid)

    @property
    def cell_measure(self) -> np.ndarray:
        return self.grid.cell_measure

    def measure(self) -> float:
        return float(np.sum(self.grid.cell_measure[self.mask]))

    def complement(self) -> "PlaneMeasureSet":
        return PlaneMeasureSet(~self.mask, self.grid)

    def __or__(self, other: "PlaneMeasureSet") -> "PlaneMeasureSet":
        if other.grid != self.grid:
            raise GridMismatch("masks live on different grids")
        return PlaneMeasureSet(self.mask | other.mask, self.grid)
