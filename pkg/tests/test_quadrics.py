import numpy as np
import pytest

from oracles import finite_difference_jacobian
from quadlines.quadrics import (
    QuadricParams,
    evaluate,
    evaluate_homogeneous,
    gram_matrices,
    jacobian,
    jacobian_homogeneous,
    polarize,
    project_to_level_set,
    residuals,
    swap_halves,
)

C = (1.5, -2.0, 0.25, 3.0, -1.0, 2.5)
PARAMS = QuadricParams(C, (5.0, 2.0, 1.0))


def e(i):
    x = np.zeros(6)
    x[i] = 1.0
    return x


@pytest.mark.parametrize("x, expected", [
    (e(0), (1, 0, C[0])),
    (e(0) + e(3), (2, 1, C[0] + C[3])),
    (np.zeros(6), (0, 0, 0)),
])
def test_evaluate_examples(x, expected):
    assert evaluate(PARAMS, x) == pytest.approx(expected)


def test_residual_examples():
    p = QuadricParams(C, (4.0, 0.0, C[0] * 4.0))
    assert residuals(p, 2 * e(0)) == pytest.approx([0, 0, 0])
    assert residuals(PARAMS, np.zeros(6)) == pytest.approx([-5, -2, -1])


def test_params_validation():
    with pytest.raises(ValueError):
        QuadricParams((1, 2, 3), (1, 2, 3))
    with pytest.raises(ValueError):
        QuadricParams(C, (1, float("nan"), 3))
    assert QuadricParams(C, (7, 0, 0)).scale == 7


def test_jacobian_examples():
    j = jacobian(PARAMS, e(0))
    assert j[0] == pytest.approx(2 * e(0))
    assert j[1] == pytest.approx(e(3))
    assert j[2] == pytest.approx(2 * C[0] * e(0))
    assert not np.any(jacobian(PARAMS, np.zeros(6)))


def test_jacobian_finite_difference(rng):
    for _ in range(20):
        x = rng.normal(size=6)
        assert jacobian(PARAMS, x) == pytest.approx(finite_difference_jacobian(PARAMS, x), abs=1e-6)


def test_jacobian_matches_gram_matrices(rng):
    x = rng.normal(size=6)
    g = gram_matrices(PARAMS)
    assert jacobian(PARAMS, x) == pytest.approx(2 * g @ x)
    with pytest.raises(ValueError):
        g[0, 0, 0] = 2.0


def test_polarize_properties(rng):
    for _ in range(50):
        x = rng.normal(size=6) + 1j * rng.normal(size=6)
        v = rng.normal(size=6) + 1j * rng.normal(size=6)
        alpha = complex(*rng.normal(size=2))
        assert polarize(PARAMS, x, x) == pytest.approx(evaluate(PARAMS, x), rel=1e-12)
        assert polarize(PARAMS, x, alpha * v) == pytest.approx(alpha * polarize(PARAMS, x, v), rel=1e-12)
        expansion = evaluate(PARAMS, x + v) - evaluate(PARAMS, x) - evaluate(PARAMS, v)
        assert 2 * polarize(PARAMS, x, v) == pytest.approx(expansion, rel=1e-10, abs=1e-10)
        assert np.array_equal(polarize(PARAMS, x, v), polarize(PARAMS, v, x))


def test_swap_symmetry(rng):
    x = rng.normal(size=6)
    assert evaluate(PARAMS.swapped(), swap_halves(x)) == pytest.approx(evaluate(PARAMS, x))


def test_evaluate_broadcasts(rng):
    xs = rng.normal(size=(4, 5, 6))
    out = evaluate(PARAMS, xs)
    assert out.shape == (4, 5, 3)
    assert out[2, 3] == pytest.approx(evaluate(PARAMS, xs[2, 3]))


def test_homogeneous_forms(rng):
    x = rng.normal(size=6)
    big = np.concatenate([[2.0], 2.0 * x])
    assert evaluate_homogeneous(PARAMS, big) == pytest.approx(4 * residuals(PARAMS, x))
    j = jacobian_homogeneous(PARAMS, big)
    h = 1e-6
    for i in range(7):
        step = np.zeros(7)
        step[i] = h
        fd = (evaluate_homogeneous(PARAMS, big + step) - evaluate_homogeneous(PARAMS, big - step)) / (2 * h)
        assert j[:, i] == pytest.approx(fd, abs=1e-6)


def test_projection_real_and_complex(rng):
    x, ok = project_to_level_set(PARAMS, rng.normal(size=6))
    assert ok and np.isrealobj(x)
    assert np.max(np.abs(residuals(PARAMS, x))) <= 1e-10 * PARAMS.scale
    z, ok = project_to_level_set(PARAMS, rng.normal(size=6) + 1j * rng.normal(size=6))
    assert ok and np.max(np.abs(residuals(PARAMS, z))) <= 1e-10 * PARAMS.scale


def test_projection_respects_fixed_coordinates(rng):
    start = rng.normal(size=7) + 1j * rng.normal(size=7)
    start[0] = 0.0
    start[2] = 1.0
    x, ok = project_to_level_set(PARAMS, start, homogeneous=True, fixed=[0, 2])
    assert ok
    assert x[0] == 0 and x[2] == 1
