"""Random members of sets, used by the containment checks."""
import typing as t
from functools import singledispatch

import numpy as np

from .interval import IntervalMatrix
from .matrix_zonotope import MatrixZonotope
from .zonotope import Zonotope

Seed = t.Union[int, np.random.Generator, None]


@singledispatch
def sample_member(shape_set: t.Any, seed: Seed = None) -> np.ndarray:
    """Draw a member with every coefficient uniform in [-1, 1]."""
    raise TypeError(f"Cannot sample from {type(shape_set).__name__}.")


@sample_member.register
def _(shape_set: IntervalMatrix, seed: Seed = None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    beta = rng.uniform(-1.0, 1.0, size=shape_set.shape)
    return shape_set.center + beta * shape_set.radius


@sample_member.register
def _(shape_set: MatrixZonotope, seed: Seed = None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return shape_set.point(rng.uniform(-1.0, 1.0, size=shape_set.n_generators))


@sample_member.register
def _(shape_set: Zonotope, seed: Seed = None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return shape_set.point(rng.uniform(-1.0, 1.0, size=shape_set.n_generators))
