"""Compressive-sensing attack: keep a subset of 2-D DCT coefficients.

A measurement plan keeps ``v1`` low-frequency coefficients (the zigzag
prefix) and ``v2`` further coefficients drawn at random from the rest.
The measurement operator is a row subset of the orthonormal DCT, so its
rows are orthonormal and projecting onto the measurement-consistent set
is exact.

Random draws are weighted sampling without replacement (exponential-key
method), so the selection is a pure function of the seed.  Two densities:

``"inverse_square"`` (default)
    weight ``1 / max(1, row**2 + col**2)``: favours lower frequencies
    without excluding any.
``"uniform"``
    every remaining coefficient equally likely.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .image_core import DimensionError, as_image
from .transforms import dct2_forward, zigzag_array

DENSITIES = ("inverse_square", "uniform")


@dataclass(frozen=True)
class MeasurementPlan:
    grid_side: int
    v1_count: int
    v2_count: int
    selection_seed: int
    density: str = "inverse_square"
    kept_indices: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def total(self) -> int:
        return self.v1_count + self.v2_count

    @property
    def rows(self) -> np.ndarray:
        return self.kept_indices[:, 0]

    @property
    def cols(self) -> np.ndarray:
        return self.kept_indices[:, 1]

    def to_dict(self) -> dict:
        return {
            "grid_side": self.grid_side,
            "v1_count": self.v1_count,
            "v2_count": self.v2_count,
            "selection_seed": self.selection_seed,
            "density": self.density,
        }


def _density_weights(rows: np.ndarray, cols: np.ndarray, density: str) -> np.ndarray:
    if density == "uniform":
        return np.ones(rows.shape, dtype=np.float64)
    r2 = rows.astype(np.float64) ** 2 + cols.astype(np.float64) ** 2
    return 1.0 / np.maximum(1.0, r2)


def plan_measurements(grid_side: int, v1_count: int, v2_count: int,
                      selection_seed: int, density: str = "inverse_square") -> MeasurementPlan:
    n = int(grid_side)
    if n <= 0 or n % 4:
        raise DimensionError(f"grid side {n} must be a positive multiple of 4")
    if v1_count < 0 or v2_count < 0:
        raise ValueError("measurement counts must be nonnegative")
    if v1_count + v2_count > n * n:
        raise ValueError(f"v1 + v2 = {v1_count + v2_count} exceeds {n * n} coefficients")
    if density not in DENSITIES:
        raise ValueError(f"unknown density {density!r}; choose from {DENSITIES}")
    if not 0 <= selection_seed < 2 ** 64:
        raise ValueError(f"selection seed {selection_seed} outside the unsigned 64-bit range")

    order = zigzag_array(n)
    prefix = order[:v1_count]
    rest = order[v1_count:]
    rng = np.random.Generator(np.random.PCG64(selection_seed))
    # one Exp(1) key per candidate, divided by its weight; smallest keys win
    keys = rng.standard_exponential(len(rest)) / _density_weights(rest[:, 0], rest[:, 1], density)
    chosen = np.argsort(keys, kind="stable")[:v2_count]
    kept = np.concatenate([prefix, rest[chosen]]).astype(np.intp)
    kept.setflags(write=False)
    return MeasurementPlan(n, int(v1_count), int(v2_count), int(selection_seed), density, kept)


@dataclass(frozen=True)
class MeasurementSet:
    plan: MeasurementPlan
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.plan.total:
            raise ValueError(
                f"{len(self.values)} values for a plan of {self.plan.total} coefficients")

    def to_dict(self) -> dict:
        return {**self.plan.to_dict(), "values": [float(v) for v in self.values]}

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "MeasurementSet":
        plan = plan_measurements(data["grid_side"], data["v1_count"], data["v2_count"],
                                 data["selection_seed"], data.get("density", "inverse_square"))
        return cls(plan, np.asarray(data["values"], dtype=np.float64))

    @classmethod
    def loads(cls, text: str) -> "MeasurementSet":
        return cls.from_dict(json.loads(text))


def acquire(image, plan: MeasurementPlan) -> MeasurementSet:
    """Sample the image's DCT spectrum at the plan's kept positions."""
    x = as_image(image)
    if x.shape != (plan.grid_side, plan.grid_side):
        raise DimensionError(
            f"image shape {x.shape} does not match plan grid {plan.grid_side}")
    spectrum = dct2_forward(x)
    return MeasurementSet(plan, spectrum[plan.rows, plan.cols].copy())


def measurement_fraction(plan: MeasurementPlan) -> float:
    """Percentage of the N*N coefficients that the plan keeps."""
    return 100.0 * plan.total / plan.grid_side ** 2


def measurement_matrix(plan: MeasurementPlan) -> np.ndarray:
    """Explicit ``M x N^2`` operator (row-major pixels). Only for small grids."""
    n = plan.grid_side
    basis = np.eye(n * n).reshape(n * n, n, n)
    return np.stack([dct2_forward(b)[plan.rows, plan.cols] for b in basis], axis=1)
