"""Vector zonotopes ⟨c; g₁, …, g_g⟩ with generators stored as matrix columns."""
import typing as t
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from tormpc.constants import MEMBERSHIP_TOL
from tormpc.errors import DimensionError
from tormpc.lp import LpProblem, lp_solve
from .interval import _as_matrix, _frozen


@dataclass(frozen=True, eq=False)
class Zonotope:
    center: np.ndarray
    generators: np.ndarray

    # ndarray @ Zonotope defers to __rmatmul__
    __array_ufunc__ = None

    def __post_init__(self) -> None:
        center = np.asarray(self.center, dtype=float).ravel()
        generators = np.asarray(self.generators, dtype=float)
        if generators.size == 0:
            generators = np.zeros((center.size, 0))
        if generators.ndim != 2 or generators.shape[0] != center.size:
            raise DimensionError(
                f"Generators {generators.shape} do not match dimension {center.size}."
            )

        object.__setattr__(self, "center", _frozen(center))
        object.__setattr__(self, "generators", _frozen(generators))

    @classmethod
    def origin(cls, dimension: int) -> "Zonotope":
        """The singleton {0}."""
        return cls(np.zeros(dimension), np.zeros((dimension, 0)))

    @property
    def dimension(self) -> int:
        return self.center.size

    @property
    def n_generators(self) -> int:
        return self.generators.shape[1]

    @property
    def is_singleton(self) -> bool:
        return self.n_generators == 0 or not np.any(self.generators)

    def point(self, beta: t.Any) -> np.ndarray:
        return self.center + self.generators @ np.asarray(beta, dtype=float)

    def box_radius(self) -> np.ndarray:
        """Radius of the interval hull."""
        return np.abs(self.generators).sum(axis=1)

    def contains(self, x: t.Any, tol: float = MEMBERSHIP_TOL) -> bool:
        return zonotope_contains(self, x, tol)

    def __add__(self, other: "Zonotope") -> "Zonotope":
        return zonotope_sum(self, other)

    def __rmatmul__(self, matrix: t.Any) -> "Zonotope":
        return zonotope_affine(matrix, self)


def zonotope_affine(matrix: t.Any, z: Zonotope) -> Zonotope:
    """Linear image of ``z`` under ``matrix``."""
    matrix = _as_matrix(matrix)
    if matrix.shape[1] != z.dimension:
        raise DimensionError(f"Cannot map a {z.dimension}-zonotope by {matrix.shape}.")
    return Zonotope(matrix @ z.center, matrix @ z.generators)


def zonotope_sum(a: Zonotope, b: Zonotope) -> Zonotope:
    if a.dimension != b.dimension:
        raise DimensionError(f"Cannot add zonotopes of dimension {a.dimension} and {b.dimension}.")
    return Zonotope(a.center + b.center, np.hstack([a.generators, b.generators]))


def box_to_zonotope(radius: t.Any) -> Zonotope:
    """Zero-centered box with one axis-aligned generator per nonzero radius entry."""
    radius = np.asarray(radius, dtype=float).ravel()
    if np.any(radius < 0):
        raise ValueError("Box radius must be nonnegative.")

    axes = np.flatnonzero(radius)
    generators = np.zeros((radius.size, axes.size))
    generators[axes, np.arange(axes.size)] = radius[axes]
    return Zonotope(np.zeros(radius.size), generators)


def zonotope_contains(z: Zonotope, x: t.Any, tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership by an LP: find |β| ≤ 1 with |c + Gβ - x| ≤ tol."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != z.dimension:
        raise DimensionError(
            f"Point of dimension {x.size} tested against a {z.dimension}-zonotope."
        )

    offset = x - z.center
    if z.n_generators == 0:
        return bool(np.all(np.abs(offset) <= tol))

    # Cheap rejection before the LP
    if np.any(np.abs(offset) > z.box_radius() + tol):
        return False

    basis = sparse.csr_matrix(z.generators)
    problem = LpProblem(
        c=np.zeros(z.n_generators),
        a_ub=sparse.vstack([basis, -basis]).tocsr(),
        b_ub=np.concatenate([offset + tol, -offset + tol]),
        bounds=[(-1.0, 1.0)] * z.n_generators,
    )
    return lp_solve(problem).optimal
