"""Total-variation reconstruction from partial DCT measurements.

Minimizes the isotropic TV, smoothed by ``epsilon``, subject to exact
agreement with the measured DCT coefficients.  Each iteration takes a
gradient step on the smoothed TV, then projects back onto the measurement
set by overwriting the kept coefficients.  A backtracking line search on
the post-projection TV keeps the objective monotone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .cs_attack import MeasurementSet
from .image_core import as_image
from .transforms import dct2_forward, dct2_inverse

# consecutive below-tolerance iterations required before stopping
PATIENCE = 5
STEP_GROWTH = 1.2
MIN_STEP_FRACTION = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 300
    step_size: float = 0.2
    smoothing_epsilon: float = 1e-3
    stop_tolerance: float = 1e-4

    def __post_init__(self):
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations}")
        if not self.step_size > 0:
            raise ValueError(f"step_size must be > 0, got {self.step_size}")
        if not self.smoothing_epsilon > 0:
            raise ValueError(f"smoothing_epsilon must be > 0, got {self.smoothing_epsilon}")
        if not self.stop_tolerance >= 0:
            raise ValueError(f"stop_tolerance must be >= 0, got {self.stop_tolerance}")

    def to_dict(self) -> dict:
        return {
            "max_iterations": self.max_iterations,
            "step_size": self.step_size,
            "smoothing_epsilon": self.smoothing_epsilon,
            "stop_tolerance": self.stop_tolerance,
        }


@dataclass
class ReconstructionResult:
    image: np.ndarray
    iterations_used: int
    final_tv: float
    data_residual: float
    converged: bool
    initial_tv: float
    tv_history: list[float] = field(default_factory=list, repr=False)


def discrete_gradient(grid) -> tuple[np.ndarray, np.ndarray]:
    """Forward differences along rows (dx) and columns (dy), zero at the far edge."""
    b = as_image(grid)
    dx = np.zeros_like(b)
    dy = np.zeros_like(b)
    dx[:-1, :] = b[1:, :] - b[:-1, :]
    dy[:, :-1] = b[:, 1:] - b[:, :-1]
    return dx, dy


def gradient_adjoint(px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """Adjoint of :func:`discrete_gradient` (negative divergence)."""
    out = np.zeros_like(px)
    out[:-1, :] -= px[:-1, :]
    out[1:, :] += px[:-1, :]
    out[:, :-1] -= py[:, :-1]
    out[:, 1:] += py[:, :-1]
    return out


def tv_value(grid, smoothing_epsilon: float = 0.0) -> float:
    """``sum(sqrt(dx**2 + dy**2 + eps**2))``; plain isotropic TV at eps = 0."""
    if smoothing_epsilon < 0:
        raise ValueError("smoothing_epsilon must be >= 0")
    dx, dy = discrete_gradient(grid)
    return float(np.sum(np.sqrt(dx * dx + dy * dy + smoothing_epsilon ** 2)))


def tv_gradient(grid, smoothing_epsilon: float) -> np.ndarray:
    """Gradient of the smoothed TV with respect to every pixel."""
    if not smoothing_epsilon > 0:
        raise ValueError("the TV gradient needs smoothing_epsilon > 0")
    dx, dy = discrete_gradient(grid)
    mag = np.sqrt(dx * dx + dy * dy + smoothing_epsilon ** 2)
    return gradient_adjoint(dx / mag, dy / mag)


class _Projector:
    def __init__(self, measurements: MeasurementSet):
        plan = measurements.plan
        self.rows = plan.rows
        self.cols = plan.cols
        self.values = np.asarray(measurements.values, dtype=np.float64)
        self.shape = (plan.grid_side, plan.grid_side)
        if plan.kept_indices is None or len(self.values) != len(self.rows):
            raise ValueError("measurement values do not match the plan")

    def zero_filled(self) -> np.ndarray:
        spectrum = np.zeros(self.shape)
        spectrum[self.rows, self.cols] = self.values
        return dct2_inverse(spectrum)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        spectrum = dct2_forward(x)
        spectrum[self.rows, self.cols] = self.values
        return dct2_inverse(spectrum)

    def residual(self, x: np.ndarray) -> float:
        if len(self.values) == 0:
            return 0.0
        got = dct2_forward(x)[self.rows, self.cols]
        return float(np.max(np.abs(got - self.values)))


ProgressCallback = Callable[[int, float, float], None]


def reconstruct(measurements: MeasurementSet, config: SolverConfig = SolverConfig(),
                callback: Optional[ProgressCallback] = None) -> ReconstructionResult:
    """Recover an image whose kept DCT coefficients equal the measurements.

    Starts from the zero-filled inverse DCT.  The step starts at
    ``config.step_size``, is halved until the projected TV does not
    increase, and grows by 20% after every accepted step.  Stops after
    ``max_iterations`` or once the relative TV change has stayed below
    ``stop_tolerance`` for five consecutive iterations.

    ``callback(iteration, tv, residual)`` runs after every projection; the
    residual (max abs deviation of the kept coefficients) is only computed
    when a callback is given.  The returned image is clamped to [0, 255];
    ``data_residual`` refers to the iterate before clamping.
    """
    project = _Projector(measurements)
    eps = config.smoothing_epsilon
    x = project.zero_filled()
    tv = tv_value(x, eps)
    initial_tv = tv
    history = [tv]
    step = config.step_size
    min_step = config.step_size * MIN_STEP_FRACTION
    calm = 0
    converged = False
    iterations = 0

    for iterations in range(1, config.max_iterations + 1):
        grad = tv_gradient(x, eps)
        while True:
            candidate = project(x - step * grad)
            candidate_tv = tv_value(candidate, eps)
            if candidate_tv <= tv:
                break
            step *= 0.5
            if step < min_step:
                candidate, candidate_tv = x, tv
                step = config.step_size
                break
        change = (tv - candidate_tv) / tv if tv > 0 else 0.0
        x, tv = candidate, candidate_tv
        history.append(tv)
        step *= STEP_GROWTH
        if callback is not None:
            callback(iterations, tv, project.residual(x))
        calm = calm + 1 if change < config.stop_tolerance else 0
        if calm >= PATIENCE:
            converged = True
            break

    return ReconstructionResult(
        image=np.clip(x, 0.0, 255.0),
        iterations_used=iterations,
        final_tv=tv,
        data_residual=project.residual(x),
        converged=converged,
        initial_tv=initial_tv,
        tv_history=history,
    )
