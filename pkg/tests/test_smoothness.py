import numpy as np
import pytest

from oracles import degenerate_instance, random_params
from quadlines.errors import DegenerateSystem, NoRealPoint, UndefinedForm
from quadlines.numerics import rank_ratio
from quadlines.quadrics import QuadricParams, jacobian, residuals
from quadlines.smoothness import (
    COMPLEX,
    REAL,
    BSolution,
    a_of_b,
    analyze_smoothness,
    b_system_resultants,
    check_condition_a,
    check_inequalities,
    complex_smoothness,
    degenerate_point,
    inequality_values,
    projective_smoothness,
    real_smoothness,
    sampled_rank_ratios,
    solve_b_system,
)

EQUAL = QuadricParams((2.0,) * 6, (5.0, 2.0, 1.0))


@pytest.mark.parametrize("d, real, cplx", [
    ((5, 2, 0), True, True),
    ((4, 2, 0), False, False),
    ((4, -2, 0), False, False),
    ((1, 2, 0), False, True),
])
def test_condition_a(d, real, cplx):
    assert check_condition_a(d, REAL) is real
    assert check_condition_a(d, COMPLEX) is cplx


def test_b_system_equal_c_has_common_roots():
    sols = solve_b_system(EQUAL, COMPLEX)
    assert sols
    for s in sols:
        assert max(s.residuals) <= 1e-9 * max(EQUAL.scale ** 2, abs(s.b) ** 2, abs(s.a) ** 2)
        assert s.a == pytest.approx(a_of_b(EQUAL, s.b), abs=1e-14)


def test_b_system_generic_is_empty_and_resultants_agree(rng):
    for _ in range(50):
        p = random_params(rng)
        sols = solve_b_system(p, COMPLEX)
        res = b_system_resultants(p)
        if sols:
            assert min(abs(r) for r in res) < 1e-6 * p.scale ** 8
        else:
            assert all(abs(r) > 0 for r in res)


def test_b_system_constructed_common_root():
    p = degenerate_instance(0.3, 1.7, (0.5, 2.0, -1.5), (1.0, 0.5, 0.25))
    sols = solve_b_system(p, REAL)
    assert any(abs(s.b - 1.7) < 1e-9 for s in sols)


def test_b_system_real_subset_of_complex(rng):
    for _ in range(20):
        r = rng.uniform(0.2, 3.0, 3) * rng.choice([-1, 1], 3)
        p = degenerate_instance(rng.normal(), rng.uniform(0.5, 2), r, rng.uniform(0.1, 1, 3))
        real = solve_b_system(p, REAL)
        cplx = solve_b_system(p, COMPLEX)
        for s in real:
            assert any(abs(s.b - t.b) <= 1e-9 * max(1, abs(s.b)) for t in cplx)


def test_b_system_fully_degenerate_raises():
    # alpha = c and beta = 1 make every coefficient vanish
    p = QuadricParams((1.0,) * 6, (2.0, 1.0, 2.0))
    with pytest.raises(DegenerateSystem):
        solve_b_system(p)


def test_inequality_examples():
    # (c1 - a) / b = 1 with d2 = 1, d1 = 5: left 1 >= right 2/5
    p = QuadricParams((1.0, 50.0, 60.0, 0.0, 0.0, 0.0), (5.0, 1.0, 0.0))
    sol = BSolution(b=1.0 + 0j, a=0.0 + 0j, residuals=(0, 0, 0))
    lhs, rhs = inequality_values(sol, p)
    assert lhs[0] == pytest.approx(1.0) and rhs[0] == pytest.approx(0.4)
    assert check_inequalities(sol, p)
    # every ratio large: right sides dominate
    big = QuadricParams((1e3, 2e3, 3e3, 0.0, 0.0, 0.0), (5.0, 1.0, 0.0))
    assert not check_inequalities(sol, big)
    # d2 < 0 with positive ratios: left sides negative
    neg = QuadricParams((1.0, 2.0, 3.0, 0.0, 0.0, 0.0), (5.0, -1.0, 0.0))
    assert not check_inequalities(sol, neg)


@pytest.mark.parametrize("b, d2", [(0.0, 1.0), (1.0, 0.0)])
def test_inequality_undefined(b, d2):
    p = QuadricParams((1, 2, 3, 4, 5, 6), (5.0, d2, 0.0))
    with pytest.raises(UndefinedForm):
        inequality_values(BSolution(b + 0j, 0j, (0, 0, 0)), p)


def test_real_smoothness_examples():
    verdict, witnesses = real_smoothness(EQUAL)
    assert verdict.smooth is False and witnesses
    verdict, _ = real_smoothness(QuadricParams((1, 2, 3, 4, 5, 6), (4, 2, 1)))
    assert verdict == verdict.__class__(False, "condition_a")


def test_complex_smoothness_examples(rng):
    assert complex_smoothness(EQUAL)[0].smooth is False
    assert complex_smoothness(QuadricParams((1, 2, 3, 4, 5, 6), (4, 2, 1)))[0].reason == "condition_a"
    for d in [(1, 1, 1), (3, -2, 0), (0.5, 7, -2)]:
        assert complex_smoothness(QuadricParams((3.0,) * 6, d))[0].smooth is False


def test_generic_real_smooth_has_full_rank(rng):
    checked = 0
    while checked < 5:
        p = random_params(rng)
        if real_smoothness(p)[0].smooth is not True:
            continue
        checked += 1
        for ratio in sampled_rank_ratios(p, 100, rng):
            assert ratio >= 1e-6


def test_generic_complex_smooth_has_full_rank(rng):
    checked = 0
    while checked < 3:
        p = random_params(rng)
        if complex_smoothness(p)[0].smooth is not True:
            continue
        checked += 1
        ratios = sampled_rank_ratios(p, 100, rng, real=False)
        assert len(ratios) >= 90
        assert min(ratios) >= 1e-6


def _point_ok(p, x):
    return rank_ratio(jacobian(p, x)) <= 1e-8 and np.max(np.abs(residuals(p, x))) <= 1e-8


def test_degenerate_point_on_constructed_instance():
    p = degenerate_instance(-0.4, 1.3, (0.7, -1.2, 2.5), (0.3, 1.1, 0.6))
    sol = next(s for s in solve_b_system(p, REAL) if abs(s.b - 1.3) < 1e-9)
    assert _point_ok(p, degenerate_point(p, sol))


def test_degenerate_point_equal_c():
    # with c all equal the singular locus needs d3 = k d1 and d1 = 2 d2, where
    # the b-system vanishes identically; the constructed root is passed in
    p = degenerate_instance(1.0, 2.0, (1.0, 1.0, 1.0), (0.5, 0.2, 0.3))
    assert len(set(p.c)) == 1
    with pytest.raises(DegenerateSystem):
        solve_b_system(p, REAL)
    x = degenerate_point(p, BSolution(2.0 + 0j, 1.0 + 0j, (0.0, 0.0, 0.0)))
    assert _point_ok(p, x)


def test_degenerate_point_no_real_point():
    # negating d keeps alpha, beta and hence the b-root, but d1 < 0 admits no squares
    p = degenerate_instance(-0.4, 1.3, (0.7, -1.2, 2.5), (0.3, 1.1, 0.6))
    flipped = p.with_d(tuple(-v for v in p.d))
    sol = next(s for s in solve_b_system(flipped, REAL) if abs(s.b - 1.3) < 1e-9)
    with pytest.raises(NoRealPoint):
        degenerate_point(flipped, sol)


def test_uniform_ratio_variant_fails_rank_test():
    """Only x_{k+3} = ((c_k - a)/b) x_k gives a singular point on this instance."""
    p = degenerate_instance(-0.4, 1.3, (0.7, -1.2, 2.5), (0.3, 1.1, 0.6))
    sol = next(s for s in solve_b_system(p, REAL) if abs(s.b - 1.3) < 1e-9)
    a, b = sol.a.real, sol.b.real
    c = p.c_array
    x = degenerate_point(p, sol)
    for ratio in [np.full(3, (c[3] - a) / b), (c[3:] - a) / b]:
        y = np.concatenate([x[:3], ratio * x[:3]])
        assert rank_ratio(jacobian(p, y)) > 1e-3


def test_projective_charts(rng):
    generic = QuadricParams((0.3, -1.1, 2.2, 1.7, -0.6, 0.9), (5.0, 1.0, 0.7))
    charts = projective_smoothness(generic, rng, samples=10)
    assert len(charts) == 7
    assert charts[0].verdict == "smooth"
    assert all(c.verdict == "sampled-smooth" for c in charts[1:])
    charts = projective_smoothness(EQUAL, rng, samples=10)
    assert any(c.verdict == "singular-witness-found" for c in charts)
    assert charts[0].verdict == "singular-witness-found"


def test_analyze_smoothness_report(rng):
    rep = analyze_smoothness(EQUAL, rng, projective=False)
    assert not rep.smooth_both and rep.witnesses
    assert rep.real.smooth is False and rep.complex.smooth is False
    generic = QuadricParams((0.3, -1.1, 2.2, 1.7, -0.6, 0.9), (5.0, 1.0, 0.7))
    rep = analyze_smoothness(generic, rng, samples=5)
    assert rep.smooth_both and not rep.inconclusive and len(rep.projective) == 7
