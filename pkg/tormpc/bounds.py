"""
Offline error-bound tables.

``radii[j]`` is the radius Δ_I(j) of the zero-centered interval matrix that
bounds A_K^j 𝓘_Δ for every admissible closed-loop matrix A_K. Two independent
computations are provided: iterating the 𝕋 operator on matrix zonotopes, and a
closed-form recursion over |Â_K^p|. They agree up to floating point.
"""
import hashlib
import logging
import typing as t
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from tormpc.constants import BOUNDS_CACHE_VERSION, CACHE_DIR
from tormpc.errors import DimensionError
from tormpc.sets import IntervalMatrix, MatrixZonotope, bbox, iv_product, t_apply
from tormpc.sets.matrix_zonotope import _decomposition_stack

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BoundsTable:
    ahat_k: np.ndarray
    delta_k: np.ndarray
    delta_s: np.ndarray
    radii: np.ndarray  # shape (n_max, n, n + m)
    n_max: int

    def __post_init__(self) -> None:
        for name in ("ahat_k", "delta_k", "delta_s", "radii"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        object.__setattr__(self, "n_max", int(self.n_max))

        n = self.ahat_k.shape[0]
        expected = (self.n_max, n, self.delta_s.shape[1])
        if self.radii.shape != expected:
            raise DimensionError(f"Radii table has shape {self.radii.shape}, expected {expected}.")
        if np.any(self.radii < 0):
            raise ValueError("Bound radii must be entrywise nonnegative.")

    @property
    def n(self) -> int:
        return self.ahat_k.shape[0]

    @property
    def m(self) -> int:
        return self.delta_s.shape[1] - self.n

    @cached_property
    def abs_powers(self) -> np.ndarray:
        """|Â_K^p| for p = 0..n_max."""
        return np.abs(matrix_powers(self.ahat_k, self.n_max + 1))

    def radius(self, j: int) -> np.ndarray:
        if not 0 <= j < self.n_max:
            raise IndexError(f"Bound index {j} is outside the table (n_max={self.n_max}).")
        return self.radii[j]


def matrix_powers(matrix: np.ndarray, count: int) -> np.ndarray:
    """Stack of matrix^p for p = 0..count-1 by repeated multiplication."""
    matrix = np.asarray(matrix, dtype=float)
    powers = np.empty((count, *matrix.shape))
    if count == 0:
        return powers

    powers[0] = np.eye(matrix.shape[0])
    for p in range(1, count):
        powers[p] = matrix @ powers[p - 1]
    return powers


def closed_loop_interval(
        a_hat: np.ndarray,
        b_hat: np.ndarray,
        delta_a: np.ndarray,
        delta_b: np.ndarray,
        k_gain: np.ndarray
) -> tuple[np.ndarray, np.ndarray, IntervalMatrix]:
    """Nominal closed loop Â_K = Â + B̂K and its interval ⟨Â_K, Δ_A + Δ_B|K|⟩."""
    a_hat, b_hat, delta_a, delta_b, k_gain = (
        np.asarray(matrix, dtype=float) for matrix in (a_hat, b_hat, delta_a, delta_b, k_gain)
    )
    n, m = b_hat.shape
    for name, matrix, shape in (
            ("A", a_hat, (n, n)),
            ("Delta_A", delta_a, (n, n)),
            ("Delta_B", delta_b, (n, m)),
            ("K", k_gain, (m, n)),
    ):
        if matrix.shape != shape:
            raise DimensionError(f"{name} has shape {matrix.shape}, expected {shape}.")

    ahat_k = a_hat + b_hat @ k_gain
    delta_k = delta_a + delta_b @ np.abs(k_gain)
    return ahat_k, delta_k, IntervalMatrix(ahat_k, delta_k)


def bound_radii_direct(i_ak: IntervalMatrix, delta_s: np.ndarray, n_max: int) -> BoundsTable:
    """Radii of □(𝕋ʲ(𝓜_Δ)) by iterating the operator on ⟨0; E(Δ_S)⟩."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1.")
    delta_s = np.asarray(delta_s, dtype=float)

    mz = MatrixZonotope(np.zeros_like(delta_s), _decomposition_stack(delta_s))
    radii = np.empty((n_max, *delta_s.shape))
    for j in range(n_max):
        if j:
            mz = t_apply(i_ak, mz)
        hull = bbox(mz)
        assert not np.any(hull.center), "Error bounds must stay zero-centered."
        radii[j] = hull.radius

    return BoundsTable(
        ahat_k=i_ak.center, delta_k=i_ak.radius, delta_s=delta_s, radii=radii, n_max=n_max
    )


def bound_radii_recursive(
        ahat_k: np.ndarray,
        delta_k: np.ndarray,
        delta_s: np.ndarray,
        n_max: int
) -> BoundsTable:
    """
    Radii from the closed-form recursion.

    With F₀ = Δ_S, radii[j] = Σ_{i≤j} |Â_K^{j-i}| F_i and F_{j+1} = Δ_K radii[j].
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1.")
    ahat_k, delta_k, delta_s = (np.asarray(x, dtype=float) for x in (ahat_k, delta_k, delta_s))

    abs_powers = np.abs(matrix_powers(ahat_k, n_max))
    f_terms = [delta_s]
    radii = np.empty((n_max, *delta_s.shape))
    for j in range(n_max):
        radii[j] = sum(abs_powers[j - i] @ f_terms[i] for i in range(j + 1))
        f_terms.append(delta_k @ radii[j])

    return BoundsTable(
        ahat_k=ahat_k, delta_k=delta_k, delta_s=delta_s, radii=radii, n_max=n_max
    )


def f_sequence(
        ahat_k: np.ndarray,
        delta_k: np.ndarray,
        delta_s: np.ndarray,
        j_max: int
) -> list[np.ndarray]:
    """The matrices F₀..F_{j_max} of the recursion."""
    table = bound_radii_recursive(ahat_k, delta_k, delta_s, max(j_max, 1))
    return [np.asarray(delta_s, dtype=float)] + [
        np.asarray(delta_k) @ table.radii[j] for j in range(j_max)
    ]


def pj_sequence(ahat_k: np.ndarray, delta_k: np.ndarray, j_max: int) -> list[np.ndarray]:
    """P₁..P_{j_max}: P₁ = I, P_{j+1} = |Â_K^j| + Σ_{h=1}^{j} P_h Δ_K |Â_K^{j-h}|."""
    if j_max < 1:
        raise ValueError("j_max must be at least 1.")
    delta_k = np.asarray(delta_k, dtype=float)

    abs_powers = np.abs(matrix_powers(ahat_k, j_max))
    p_terms = [np.eye(delta_k.shape[0])]
    for j in range(1, j_max):
        p_next = abs_powers[j] + sum(
            p_terms[h - 1] @ delta_k @ abs_powers[j - h] for h in range(1, j + 1)
        )
        p_terms.append(p_next)

    return p_terms


def interval_product_radii(
        i_ak: IntervalMatrix,
        delta_s: np.ndarray,
        n_max: int
) -> np.ndarray:
    """Radii of 𝓘_{A_K} * … * 𝓘_{A_K} * 𝓘_Δ (j factors of 𝓘_{A_K}) for j < n_max."""
    product = IntervalMatrix.symmetric(delta_s)
    radii = np.empty((n_max, *product.shape))
    for j in range(n_max):
        if j:
            product = iv_product(i_ak, product)
        radii[j] = product.radius
    return radii


def gain_spotcheck(i_ak: IntervalMatrix, samples: int, seed: t.Optional[int] = None) -> float:
    """
    Largest spectral radius over sampled members of 𝓘_{A_K}.

    This is a spot-check only; a value below one does not certify robust stability.
    """
    rng = np.random.default_rng(seed)
    beta = rng.uniform(-1.0, 1.0, size=(samples, *i_ak.shape))
    members = i_ak.center + beta * i_ak.radius
    # The center itself is always a member
    members = np.concatenate([i_ak.center[None], members])
    return float(np.max(np.abs(np.linalg.eigvals(members))))


def system_key(
        a_hat: np.ndarray,
        b_hat: np.ndarray,
        delta_a: np.ndarray,
        delta_b: np.ndarray,
        k_gain: np.ndarray,
        n_max: int
) -> str:
    """Content hash identifying a bounds table."""
    digest = hashlib.sha256()
    digest.update(f"v{BOUNDS_CACHE_VERSION}:n_max={n_max}".encode())
    for matrix in (a_hat, b_hat, delta_a, delta_b, k_gain):
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        digest.update(str(matrix.shape).encode())
        digest.update(matrix.tobytes())
    return digest.hexdigest()


def save_table(table: BoundsTable, path: Path, key: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as file:
        np.savez(
            file,
            key=np.array(key),
            ahat_k=table.ahat_k,
            delta_k=table.delta_k,
            delta_s=table.delta_s,
            radii=table.radii,
            n_max=np.array(table.n_max),
        )


def load_table(path: Path, key: str) -> t.Optional[BoundsTable]:
    """Read a cached table, or None when it is missing or belongs to another system."""
    if not path.exists():
        return None

    with np.load(path) as data:
        if str(data["key"]) != key:
            logger.warning("Bounds cache %s has a stale key, recomputing.", path)
            return None

        return BoundsTable(
            ahat_k=data["ahat_k"],
            delta_k=data["delta_k"],
            delta_s=data["delta_s"],
            radii=data["radii"],
            n_max=int(data["n_max"]),
        )


def load_or_compute(
        a_hat: np.ndarray,
        b_hat: np.ndarray,
        delta_a: np.ndarray,
        delta_b: np.ndarray,
        k_gain: np.ndarray,
        n_max: int,
        cache_dir: t.Union[str, Path, None] = CACHE_DIR,
        method: str = "recursive",
) -> BoundsTable:
    """Return the bounds table of a system, going through the on-disk cache when enabled."""
    key = system_key(a_hat, b_hat, delta_a, delta_b, k_gain, n_max)
    path = Path(cache_dir) / f"bounds-{key[:16]}.npz" if cache_dir is not None else None

    if path is not None and (table := load_table(path, key)) is not None:
        logger.info("Loaded bounds table from %s", path)
        return table

    ahat_k, delta_k, i_ak = closed_loop_interval(a_hat, b_hat, delta_a, delta_b, k_gain)
    delta_s = np.hstack([delta_a, delta_b])
    if method == "direct":
        table = bound_radii_direct(i_ak, delta_s, n_max)
    elif method == "recursive":
        table = bound_radii_recursive(ahat_k, delta_k, delta_s, n_max)
    else:
        raise ValueError(f"Unknown bounds method '{method}'.")

    if path is not None:
        save_table(table, path, key)
        logger.info("Wrote bounds table to %s", path)

    return table
