"""Interval matrices stored as center plus entrywise radius."""
import typing as t
from dataclasses import dataclass

import numpy as np

from tormpc.errors import DimensionError


def _frozen(array: t.Any) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


def _as_matrix(array: t.Any) -> np.ndarray:
    matrix = np.asarray(array, dtype=float)
    if matrix.ndim != 2:
        raise DimensionError(f"Expected a matrix, got an array with shape {matrix.shape}.")
    return matrix


@dataclass(frozen=True, eq=False)
class IntervalMatrix:
    """The set [C - Δ, C + Δ] of matrices, also written C ⊕ ⟨Δ⟩."""

    center: np.ndarray
    radius: np.ndarray

    def __post_init__(self) -> None:
        center = _as_matrix(self.center)
        radius = _as_matrix(self.radius)
        if center.shape != radius.shape:
            raise DimensionError(
                f"Center {center.shape} and radius {radius.shape} differ in shape."
            )
        if np.any(radius < 0):
            raise ValueError("Interval radius must be entrywise nonnegative.")

        object.__setattr__(self, "center", _frozen(center))
        object.__setattr__(self, "radius", _frozen(radius))

    @classmethod
    def symmetric(cls, radius: t.Any) -> "IntervalMatrix":
        """The zero-centered interval ⟨Δ⟩."""
        radius = _as_matrix(radius)
        return cls(np.zeros_like(radius), radius)

    @classmethod
    def point(cls, matrix: t.Any) -> "IntervalMatrix":
        matrix = _as_matrix(matrix)
        return cls(matrix, np.zeros_like(matrix))

    @property
    def shape(self) -> tuple[int, int]:
        return self.center.shape

    @property
    def lower(self) -> np.ndarray:
        return self.center - self.radius

    @property
    def upper(self) -> np.ndarray:
        return self.center + self.radius

    def contains(self, matrix: t.Any, tol: float = 0.0) -> bool:
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != self.shape:
            return False
        return bool(np.all(np.abs(matrix - self.center) <= self.radius + tol))

    def __add__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        return iv_sum(self, other)

    def __mul__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        return iv_product(self, other)


def iv_sum(a: IntervalMatrix, b: IntervalMatrix) -> IntervalMatrix:
    if a.shape != b.shape:
        raise DimensionError(f"Cannot add intervals of shape {a.shape} and {b.shape}.")
    return IntervalMatrix(a.center + b.center, a.radius + b.radius)


def iv_product(a: IntervalMatrix, b: IntervalMatrix) -> IntervalMatrix:
    """Interval product 𝓘₁*𝓘₂; contains every D·E with D ∈ a, E ∈ b."""
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"Cannot multiply intervals of shape {a.shape} and {b.shape}.")

    center = a.center @ b.center
    radius = np.abs(a.center) @ b.radius + a.radius @ np.abs(b.center) + a.radius @ b.radius
    return IntervalMatrix(center, radius)


def iv_times_matrix(interval: IntervalMatrix, matrix: t.Any) -> IntervalMatrix:
    matrix = _as_matrix(matrix)
    if interval.shape[1] != matrix.shape[0]:
        raise DimensionError(
            f"Cannot multiply interval {interval.shape} by matrix {matrix.shape}."
        )
    return IntervalMatrix(interval.center @ matrix, interval.radius @ np.abs(matrix))


def matrix_times_iv(matrix: t.Any, interval: IntervalMatrix) -> IntervalMatrix:
    matrix = _as_matrix(matrix)
    if matrix.shape[1] != interval.shape[0]:
        raise DimensionError(
            f"Cannot multiply matrix {matrix.shape} by interval {interval.shape}."
        )
    return IntervalMatrix(matrix @ interval.center, np.abs(matrix) @ interval.radius)
