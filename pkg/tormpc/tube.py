"""
Error-tube models and the constraint rows they tighten.

A tube bounds the prediction error x(k+j) - z_k(j) by an axis-aligned box.
The multiplicative tube grows with the planned trajectory through auxiliary
variables s_k(i) >= |ξ_k(i)|; the additive tube has a fixed radius per step.
"""
import abc
import typing as t
from dataclasses import dataclass

import numpy as np

from tormpc.bounds import BoundsTable, matrix_powers
from tormpc.constants import TubeKind
from tormpc.errors import DimensionError
from tormpc.lp import RowBuilder
from tormpc.sets import Polytope

STATE = "state"
INPUT = "input"


@dataclass(frozen=True)
class Layout:
    """Column positions of the fixed-horizon LP variables [z, v, s, β]."""

    n: int
    m: int
    horizon: int
    n_beta: int
    with_abs: bool = True

    @property
    def _v_start(self) -> int:
        return (self.horizon + 1) * self.n

    @property
    def _s_start(self) -> int:
        return self._v_start + self.horizon * self.m

    @property
    def _beta_start(self) -> int:
        n_abs = self.horizon * (self.n + self.m) if self.with_abs else 0
        return self._s_start + n_abs

    @property
    def n_vars(self) -> int:
        return self._beta_start + self.n_beta

    def z(self, j: int) -> slice:
        return slice(j * self.n, (j + 1) * self.n)

    def v(self, j: int) -> slice:
        start = self._v_start + j * self.m
        return slice(start, start + self.m)

    def s(self, first: int, last: t.Optional[int] = None) -> slice:
        """Columns of s(first), …, s(last - 1) (a single block when ``last`` is omitted)."""
        if not self.with_abs:
            raise IndexError("This layout has no absolute-value variables.")
        last = first + 1 if last is None else last
        width = self.n + self.m
        return slice(self._s_start + first * width, self._s_start + last * width)

    @property
    def beta(self) -> slice:
        return slice(self._beta_start, self.n_vars)

    def bounds(self) -> list[tuple[t.Optional[float], t.Optional[float]]]:
        free = [(None, None)] * self._s_start
        nonnegative = [(0.0, None)] * (self._beta_start - self._s_start)
        unit = [(-1.0, 1.0)] * self.n_beta
        return free + nonnegative + unit


def _constraint_matrices(
        polytope: Polytope,
        which: str,
        k_gain: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """The polytope matrix and the matrix that maps a state-error box into its rows."""
    if which == STATE:
        return polytope.h, np.abs(polytope.h)
    if which == INPUT:
        return polytope.h, np.abs(polytope.h @ k_gain)
    raise ValueError(f"Unknown constraint kind '{which}'.")


def tightened_rows(
        rows: RowBuilder,
        layout: Layout,
        polytope: Polytope,
        bounds: BoundsTable,
        j: int,
        which: str,
        k_gain: np.ndarray
) -> None:
    """
    Add H w(j) + G Σ_{i<j} Δ_I(j-i-1) s(i) <= b to ``rows``.

    For state rows w = z and G = |H|; for input rows w = v and G = |H K|,
    bounding the input error K e by |K||e|.
    """
    # step j reads Δ_I(0..j-1), so j = n_max is the last valid step
    if j > bounds.n_max:
        raise IndexError(f"Step {j} needs bound radii beyond n_max={bounds.n_max}.")

    h, spread = _constraint_matrices(polytope, which, k_gain)
    expected = layout.n if which == STATE else layout.m
    if h.shape[1] != expected:
        raise DimensionError(f"{which} polytope has dimension {h.shape[1]}, expected {expected}.")

    columns = layout.z(j) if which == STATE else layout.v(j)
    rows.add_block(columns, h, rhs=polytope.b)
    if j == 0:
        return

    # Radii for i = 0..j-1 are Δ_I(j-1), …, Δ_I(0), laid side by side
    radii = bounds.radii[:j][::-1]
    stacked = radii.transpose(1, 0, 2).reshape(layout.n, -1)
    rows.add_block(layout.s(0, j), spread @ stacked)


def abs_epigraph_rows(rows: RowBuilder, layout: Layout) -> None:
    """s(i) >= ξ(i) and s(i) >= -ξ(i) with ξ(i) = [z(i); v(i)]."""
    n, m = layout.n, layout.m
    to_state = np.vstack([np.eye(n), np.zeros((m, n))])
    to_input = np.vstack([np.zeros((n, m)), np.eye(m)])
    minus_eye = -np.eye(n + m)

    for i in range(layout.horizon):
        for sign in (1.0, -1.0):
            rows.add_block(layout.z(i), sign * to_state, rhs=np.zeros(n + m))
            rows.add_block(layout.v(i), sign * to_input)
            rows.add_block(layout.s(i), minus_eye)


class ErrorTube(abc.ABC):
    """Over-approximation of the prediction error along a planned trajectory."""

    kind: TubeKind
    ahat_k: np.ndarray
    n_max: int
    uses_abs_vars: bool

    @abc.abstractmethod
    def add_tightening(
            self,
            rows: RowBuilder,
            layout: Layout,
            j: int,
            polytope: Polytope,
            which: str,
            k_gain: np.ndarray
    ) -> None:
        """Add the tightened rows of constraint ``which`` at prediction step ``j``."""

    @abc.abstractmethod
    def radius(self, j: int, xi: np.ndarray) -> np.ndarray:
        """Error box radius at step j given the planned ξ(0..j-1) as rows of ``xi``."""

    @abc.abstractmethod
    def disturbance_radius(self, xi: np.ndarray) -> np.ndarray:
        """Box radius of the one-step model mismatch at ξ = [x; u]."""

    def spread(self, polytope: Polytope, which: str, k_gain: np.ndarray) -> np.ndarray:
        return _constraint_matrices(polytope, which, k_gain)[1]


class MultiplicativeTube(ErrorTube):
    """Tube of the interval-uncertain system, scaled by |ξ| through the bounds table."""

    kind = TubeKind.MULTIPLICATIVE
    uses_abs_vars = True

    def __init__(self, table: BoundsTable):
        self.table = table
        self.ahat_k = table.ahat_k
        self.n_max = table.n_max

    def add_tightening(
            self,
            rows: RowBuilder,
            layout: Layout,
            j: int,
            polytope: Polytope,
            which: str,
            k_gain: np.ndarray
    ) -> None:
        tightened_rows(rows, layout, polytope, self.table, j, which, k_gain)

    def radius(self, j: int, xi: np.ndarray) -> np.ndarray:
        xi = np.abs(np.asarray(xi, dtype=float))
        total = np.zeros(self.table.n)
        for i in range(j):
            total += self.table.radii[j - i - 1] @ xi[i]
        return total

    def disturbance_radius(self, xi: np.ndarray) -> np.ndarray:
        return self.table.delta_s @ np.abs(np.asarray(xi, dtype=float))


class AdditiveTube(ErrorTube):
    """Tube of a bounded additive disturbance |w(k)| <= w, independent of the trajectory."""

    kind = TubeKind.ADDITIVE
    uses_abs_vars = False

    def __init__(self, w: np.ndarray, ahat_k: np.ndarray, n_max: int):
        self.w = np.asarray(w, dtype=float).ravel()
        self.ahat_k = np.asarray(ahat_k, dtype=float)
        self.n_max = int(n_max)
        if np.any(self.w < 0):
            raise ValueError("Disturbance bound must be nonnegative.")
        if self.ahat_k.shape != (self.w.size, self.w.size):
            raise DimensionError(f"A_K has shape {self.ahat_k.shape}, expected {self.w.size}.")

        # radii[j] = Σ_{i<j} |Â_K^i| w
        abs_powers = np.abs(matrix_powers(self.ahat_k, self.n_max + 1))
        terms = abs_powers @ self.w
        self.radii = np.vstack([np.zeros(self.w.size), np.cumsum(terms, axis=0)])

    def add_tightening(
            self,
            rows: RowBuilder,
            layout: Layout,
            j: int,
            polytope: Polytope,
            which: str,
            k_gain: np.ndarray
    ) -> None:
        h, spread = _constraint_matrices(polytope, which, k_gain)
        columns = layout.z(j) if which == STATE else layout.v(j)
        rows.add_block(columns, h, rhs=polytope.b - spread @ self.radii[j])

    def radius(self, j: int, xi: np.ndarray) -> np.ndarray:
        return self.radii[j]

    def disturbance_radius(self, xi: np.ndarray) -> np.ndarray:
        return self.w
