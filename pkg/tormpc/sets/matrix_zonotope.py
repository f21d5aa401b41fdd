"""
Matrix zonotopes ⟨M_C; G⁽¹⁾, …, G⁽ᵍ⁾⟩ and the bounding operator 𝕋.

Generators are stored stacked in an array of shape (g, p, q).
"""
import typing as t
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from tormpc.errors import DimensionError
from tormpc.lp import LpProblem, lp_solve
from .interval import IntervalMatrix, _as_matrix, _frozen


@dataclass(frozen=True, eq=False)
class MatrixZonotope:
    center: np.ndarray
    generators: np.ndarray

    def __post_init__(self) -> None:
        center = _as_matrix(self.center)
        generators = np.asarray(self.generators, dtype=float)
        if generators.size == 0:
            generators = np.zeros((0, *center.shape))
        if generators.ndim != 3 or generators.shape[1:] != center.shape:
            raise DimensionError(
                f"Generators {generators.shape} do not match center shape {center.shape}."
            )

        object.__setattr__(self, "center", _frozen(center))
        object.__setattr__(self, "generators", _frozen(generators))

    @classmethod
    def from_list(cls, center: t.Any, generators: t.Sequence[t.Any]) -> "MatrixZonotope":
        center = _as_matrix(center)
        if not generators:
            return cls(center, np.zeros((0, *center.shape)))
        return cls(center, np.stack([_as_matrix(g) for g in generators]))

    @property
    def shape(self) -> tuple[int, int]:
        return self.center.shape

    @property
    def n_generators(self) -> int:
        return self.generators.shape[0]

    def point(self, beta: t.Any) -> np.ndarray:
        """Member M_C + Σ βᵢ G⁽ⁱ⁾ for a coefficient vector β."""
        beta = np.asarray(beta, dtype=float)
        return self.center + np.tensordot(beta, self.generators, axes=1)

    def __add__(self, other: "MatrixZonotope") -> "MatrixZonotope":
        return mz_sum(self, other)


def entrywise_decomposition(matrix: t.Any) -> list[np.ndarray]:
    """
    Split ``matrix`` into one single-entry matrix per position, row-major.

    The outputs always sum back to ``matrix``.
    """
    matrix = _as_matrix(matrix)
    rows, cols = matrix.shape
    pieces = []
    for i in range(rows):
        for j in range(cols):
            piece = np.zeros_like(matrix)
            piece[i, j] = matrix[i, j]
            pieces.append(piece)

    return pieces


def _decomposition_stack(matrix: np.ndarray) -> np.ndarray:
    """Stacked form of ``entrywise_decomposition`` with the same ordering."""
    rows, cols = matrix.shape
    stack = np.zeros((rows * cols, rows, cols))
    index = np.arange(rows * cols)
    stack[index, index // cols, index % cols] = matrix.ravel()
    return stack


def mz_sum(a: MatrixZonotope, b: MatrixZonotope) -> MatrixZonotope:
    if a.shape != b.shape:
        raise DimensionError(f"Cannot add matrix zonotopes of shape {a.shape} and {b.shape}.")
    return MatrixZonotope(a.center + b.center, np.concatenate([a.generators, b.generators]))


def bbox(mz: MatrixZonotope) -> IntervalMatrix:
    """Smallest interval matrix containing ``mz``."""
    return IntervalMatrix(mz.center, np.abs(mz.generators).sum(axis=0))


def t_apply(interval: IntervalMatrix, mz: MatrixZonotope) -> MatrixZonotope:
    """
    Enclose the product set 𝓘𝓜 by a matrix zonotope.

    The result keeps C·G⁽ʲ⁾ for every generator of ``mz`` and appends the
    entrywise decomposition of F = Δ(|M_C| + Σ|G⁽ʲ⁾|).
    """
    if interval.shape[1] != mz.shape[0]:
        raise DimensionError(
            f"Cannot apply interval {interval.shape} to matrix zonotope {mz.shape}."
        )

    center = interval.center @ mz.center
    mapped = np.matmul(interval.center, mz.generators)
    spread = interval.radius @ (np.abs(mz.center) + np.abs(mz.generators).sum(axis=0))
    return MatrixZonotope(center, np.concatenate([mapped, _decomposition_stack(spread)]))


def t_apply_jfold(interval: IntervalMatrix, mz: MatrixZonotope, j: int) -> MatrixZonotope:
    if j < 0:
        raise ValueError("The fold count must be nonnegative.")

    for _ in range(j):
        mz = t_apply(interval, mz)
    return mz


def mz_contains(mz: MatrixZonotope, matrix: t.Any, tol: float = 1e-9) -> bool:
    """Exact membership by an LP over the generator coefficients."""
    matrix = _as_matrix(matrix)
    if matrix.shape != mz.shape:
        raise DimensionError(f"Matrix {matrix.shape} does not fit zonotope {mz.shape}.")

    offset = (matrix - mz.center).ravel()
    if mz.n_generators == 0:
        return bool(np.all(np.abs(offset) <= tol))

    basis = mz.generators.reshape(mz.n_generators, -1).T
    a_ub = sparse.csr_matrix(np.vstack([basis, -basis]))
    b_ub = np.concatenate([offset + tol, -offset + tol])
    problem = LpProblem(
        c=np.zeros(mz.n_generators),
        a_ub=a_ub,
        b_ub=b_ub,
        bounds=[(-1.0, 1.0)] * mz.n_generators,
    )
    return lp_solve(problem).optimal
