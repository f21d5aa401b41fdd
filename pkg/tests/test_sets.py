import numpy as np
import pytest

from tormpc.errors import DimensionError, EmptySetError, UnboundedSetError
from tormpc.sets import (
    IntervalMatrix, MatrixZonotope, Polytope, Zonotope, bbox, box_to_zonotope,
    entrywise_decomposition, iv_product, iv_sum, iv_times_matrix, matrix_times_iv, mz_contains,
    mz_sum, polytope_at, sample_member, t_apply, t_apply_jfold, zonotope_affine, zonotope_contains
)


def random_interval(rng: np.random.Generator, shape: tuple[int, int]) -> IntervalMatrix:
    return IntervalMatrix(rng.normal(size=shape), rng.uniform(0, 0.5, size=shape))


def test_interval_sum():
    result = iv_sum(IntervalMatrix([[1.0]], [[0.5]]), IntervalMatrix([[-1.0]], [[0.25]]))
    np.testing.assert_allclose(result.center, [[0.0]])
    np.testing.assert_allclose(result.radius, [[0.75]])

    point = IntervalMatrix.point([[1.0]]) + IntervalMatrix.point([[2.0]])
    np.testing.assert_allclose(point.center, [[3.0]])
    np.testing.assert_allclose(point.radius, [[0.0]])


def test_interval_rejects_bad_input():
    with pytest.raises(ValueError):
        IntervalMatrix([[0.0]], [[-1.0]])
    with pytest.raises(DimensionError):
        IntervalMatrix([[0.0, 1.0]], [[1.0]])
    with pytest.raises(DimensionError):
        iv_sum(IntervalMatrix.point(np.eye(2)), IntervalMatrix.point(np.eye(3)))


def test_interval_product_hand_value():
    result = iv_product(IntervalMatrix([[1.0]], [[0.5]]), IntervalMatrix([[2.0]], [[1.0]]))
    np.testing.assert_allclose(result.center, [[2.0]])
    np.testing.assert_allclose(result.radius, [[2.5]])


def test_interval_product_of_points_is_matrix_product():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=(3, 2)), rng.normal(size=(2, 4))
    result = IntervalMatrix.point(a) * IntervalMatrix.point(b)
    np.testing.assert_allclose(result.center, a @ b)
    assert not np.any(result.radius)


def test_interval_product_contains_sampled_products():
    rng = np.random.default_rng(1)
    a, b = random_interval(rng, (3, 3)), random_interval(rng, (3, 3))
    result = iv_product(a, b)
    for seed in range(1000):
        product = sample_member(a, seed) @ sample_member(b, seed + 10_000)
        assert result.contains(product, tol=1e-12)


def test_interval_times_matrix():
    result = iv_times_matrix(IntervalMatrix.symmetric([[1.0]]), [[-2.0]])
    np.testing.assert_allclose(result.center, [[0.0]])
    np.testing.assert_allclose(result.radius, [[2.0]])

    rng = np.random.default_rng(2)
    interval = random_interval(rng, (3, 3))
    unchanged = iv_times_matrix(interval, np.eye(3))
    np.testing.assert_allclose(unchanged.center, interval.center)
    np.testing.assert_allclose(unchanged.radius, interval.radius)

    matrix = rng.normal(size=(3, 3))
    right, left = iv_times_matrix(interval, matrix), matrix_times_iv(matrix, interval)
    for seed in range(1000):
        member = sample_member(interval, seed)
        assert right.contains(member @ matrix, tol=1e-12)
        assert left.contains(matrix @ member, tol=1e-12)


def test_entrywise_decomposition():
    pieces = entrywise_decomposition([[1.0, 2.0], [3.0, 4.0]])
    expected = [
        [[1, 0], [0, 0]],
        [[0, 2], [0, 0]],
        [[0, 0], [3, 0]],
        [[0, 0], [0, 4]],
    ]
    for piece, target in zip(pieces, expected):
        np.testing.assert_array_equal(piece, target)

    assert all(not np.any(piece) for piece in entrywise_decomposition(np.zeros((2, 3))))

    matrix = np.random.default_rng(3).normal(size=(2, 5))
    np.testing.assert_array_equal(sum(entrywise_decomposition(matrix)), matrix)


def test_matrix_zonotope_sum_and_bbox():
    a = MatrixZonotope.from_list([[0.0]], [[[1.0]]])
    b = MatrixZonotope.from_list([[0.0]], [[[2.0]]])
    total = mz_sum(a, b)
    assert total.n_generators == 2
    np.testing.assert_allclose(bbox(total).radius, [[3.0]])

    singleton = MatrixZonotope.from_list([[1.0]], []) + MatrixZonotope.from_list([[2.0]], [])
    assert singleton.n_generators == 0
    np.testing.assert_allclose(singleton.center, [[3.0]])


def test_bbox_hand_value_and_tightness():
    mz = MatrixZonotope.from_list([[0.0, 0.0]], [[[1.0, -2.0]], [[0.5, 0.0]]])
    hull = bbox(mz)
    np.testing.assert_allclose(hull.radius, [[1.5, 2.0]])

    for i, j in np.ndindex(*mz.shape):
        beta = np.sign(mz.generators[:, i, j])
        assert mz.point(beta)[i, j] == pytest.approx(hull.upper[i, j])

    assert not np.any(bbox(MatrixZonotope.from_list(np.eye(2), [])).radius)


def test_sampled_sums_lie_in_sum():
    rng = np.random.default_rng(4)
    a = MatrixZonotope(rng.normal(size=(2, 2)), rng.normal(size=(2, 2, 2)))
    b = MatrixZonotope(rng.normal(size=(2, 2)), rng.normal(size=(1, 2, 2)))
    total = mz_sum(a, b)
    for seed in range(200):
        member = sample_member(a, seed) + sample_member(b, seed + 500)
        assert bbox(total).contains(member, tol=1e-12)
        assert mz_contains(total, member)


def test_t_apply_hand_value():
    result = t_apply(IntervalMatrix([[2.0]], [[1.0]]), MatrixZonotope.from_list([[1.0]], [[[0.5]]]))
    np.testing.assert_allclose(result.center, [[2.0]])
    np.testing.assert_allclose(result.generators.ravel(), [1.0, 1.5])
    np.testing.assert_allclose(bbox(result).radius, [[2.5]])


def test_t_apply_without_uncertainty_is_a_product():
    rng = np.random.default_rng(5)
    center = rng.normal(size=(3, 3))
    mz = MatrixZonotope.from_list(rng.normal(size=(3, 2)), [])
    result = t_apply(IntervalMatrix.point(center), mz)
    np.testing.assert_allclose(result.center, center @ mz.center)
    assert not np.any(bbox(result).radius)


def test_t_apply_encloses_sampled_products():
    rng = np.random.default_rng(6)
    interval = random_interval(rng, (3, 3))
    mz = MatrixZonotope(rng.normal(size=(3, 3)), rng.normal(size=(2, 3, 3)) * 0.3)
    hull = bbox(t_apply(interval, mz))
    for seed in range(1000):
        product = sample_member(interval, seed) @ sample_member(mz, seed + 2000)
        assert hull.contains(product, tol=1e-12)


def test_t_apply_jfold():
    interval = IntervalMatrix([[0.5]], [[0.1]])
    mz = MatrixZonotope.from_list([[0.0]], [[[0.1]], [[0.2]]])

    same = t_apply_jfold(interval, mz, 0)
    np.testing.assert_array_equal(same.generators, mz.generators)
    np.testing.assert_allclose(
        t_apply_jfold(interval, mz, 1).generators, t_apply(interval, mz).generators
    )

    # Three steps of radius r -> 0.5 r + 0.1 r from r = 0.3
    expected = 0.3 * 0.6 ** 3
    np.testing.assert_allclose(bbox(t_apply_jfold(interval, mz, 3)).radius, [[expected]])

    with pytest.raises(ValueError):
        t_apply_jfold(interval, mz, -1)


def test_sampling_is_deterministic_and_inside():
    rng = np.random.default_rng(7)
    interval = random_interval(rng, (2, 3))
    np.testing.assert_array_equal(sample_member(interval, 11), sample_member(interval, 11))
    assert all(interval.contains(sample_member(interval, seed)) for seed in range(1000))

    degenerate = IntervalMatrix.point(interval.center)
    np.testing.assert_array_equal(sample_member(degenerate, 3), interval.center)

    with pytest.raises(TypeError):
        sample_member("not a set")


def test_zonotope_operations():
    z = box_to_zonotope([1.0, 2.0])
    np.testing.assert_allclose(z.generators, [[1.0, 0.0], [0.0, 2.0]])
    assert box_to_zonotope([0.0, 3.0]).n_generators == 1

    same = zonotope_affine(np.eye(2), z)
    np.testing.assert_allclose(same.generators, z.generators)

    matrix = np.array([[1.0, 1.0], [0.0, 2.0]])
    image = matrix @ z
    assert isinstance(image, Zonotope)
    np.testing.assert_allclose(image.generators, matrix @ z.generators)
    for seed in range(50):
        member = sample_member(z, seed)
        assert image.contains(matrix @ member)

    total = z + Zonotope([1.0, 1.0], [[0.5], [0.5]])
    assert total.n_generators == 3
    np.testing.assert_allclose(total.box_radius(), [1.5, 2.5])


def test_zonotope_membership():
    z = Zonotope([0.0], [[1.0]])
    assert zonotope_contains(z, [0.9])
    assert zonotope_contains(z, [-1.0])
    assert not zonotope_contains(z, [1.1])

    origin = Zonotope.origin(3)
    assert origin.is_singleton
    assert origin.contains(np.zeros(3))
    assert not origin.contains([0.0, 1e-3, 0.0])

    diamond = Zonotope([0.0, 0.0], [[1.0, 1.0], [1.0, -1.0]])
    assert diamond.contains([1.0, 0.0])
    assert not diamond.contains([1.5, 0.6])

    with pytest.raises(DimensionError):
        zonotope_contains(z, [0.0, 0.0])
    with pytest.raises(ValueError):
        box_to_zonotope([-1.0])


def test_polytope():
    box = Polytope.box([-1.0, -2.0], [1.0, 2.0])
    assert box.contains([1.0, -2.0])
    assert not box.contains([1.1, 0.0])
    assert box.violation([1.5, 0.0]) == pytest.approx(0.5)
    assert box.violation([0.0, 0.0]) == 0.0
    assert box.support([1.0, 1.0]) == pytest.approx(3.0)
    np.testing.assert_allclose(box.coordinate_extent(), [1.0, 2.0])

    with pytest.raises(EmptySetError):
        Polytope([[1.0], [-1.0]], [0.0, -1.0])
    with pytest.raises(DimensionError):
        Polytope([[1.0, 0.0]], [1.0, 2.0])
    with pytest.raises(UnboundedSetError):
        Polytope([[1.0]], [1.0]).support([-1.0])


def test_polytope_schedule():
    fixed = Polytope.box([-1.0], [1.0])
    assert polytope_at(fixed, 7) is fixed

    def shrinking(k: int) -> Polytope:
        return Polytope.box([-1.0 / (k + 1)], [1.0 / (k + 1)])

    np.testing.assert_allclose(polytope_at(shrinking, 3).b, [0.25, 0.25])
