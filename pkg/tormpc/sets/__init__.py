from .interval import IntervalMatrix, iv_product, iv_sum, iv_times_matrix, matrix_times_iv
from .matrix_zonotope import (
    MatrixZonotope, bbox, entrywise_decomposition, mz_contains, mz_sum, t_apply, t_apply_jfold
)
from .polytope import ConstraintSchedule, Polytope, polytope_at
from .sampling import sample_member
from .zonotope import Zonotope, box_to_zonotope, zonotope_affine, zonotope_contains, zonotope_sum

__all__ = [
    "IntervalMatrix",
    "MatrixZonotope",
    "Zonotope",
    "Polytope",
    "ConstraintSchedule",
    "iv_sum",
    "iv_product",
    "iv_times_matrix",
    "matrix_times_iv",
    "entrywise_decomposition",
    "mz_sum",
    "mz_contains",
    "bbox",
    "t_apply",
    "t_apply_jfold",
    "sample_member",
    "zonotope_affine",
    "zonotope_sum",
    "zonotope_contains",
    "box_to_zonotope",
    "polytope_at",
]
