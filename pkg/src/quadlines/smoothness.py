"""Smoothness of the level set over the reals, the complexes and in P^6.

Rank drops of the 3x6 Jacobian come in two flavours: the first two rows
become dependent (only possible when d1 = 2|d2|), or ``c * x = a x + b Px``
for scalars a, b, where P swaps the two halves of x. The second case
couples the pairs (x_k, x_{k+3}) through the three equations
``(c_k - a)(c_{k+3} - a) = b^2`` with ``a = (d3 - 2 b d2) / d1``; they are
quadratics in b sharing the leading coefficient ``(2 d2 / d1)^2 - 1``.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .errors import DegenerateSystem, NoRealPoint, UndefinedForm
from .numerics import rank_ratio, solve_quadratic, sylvester_resultant
from .quadrics import jacobian, jacobian_homogeneous, project_to_level_set, residuals
from .tolerances import DEFAULT

log = logging.getLogger(__name__)

REAL = "real"
COMPLEX = "complex"


@dataclass(frozen=True)
class BSolution:
    b: complex
    a: complex
    residuals: tuple


@dataclass(frozen=True)
class Verdict:
    """``smooth`` is None when the decision is inconclusive."""

    smooth: object
    reason: str


@dataclass(frozen=True)
class ChartVerdict:
    chart: int
    verdict: str
    samples: int
    converged: int
    min_ratio: object
    witness: tuple = None


@dataclass(frozen=True)
class SmoothnessReport:
    real: Verdict
    complex: Verdict
    projective: tuple = ()
    witnesses: tuple = ()
    degenerate_points: tuple = ()

    @property
    def smooth_both(self):
        return self.real.smooth is True and self.complex.smooth is True

    @property
    def inconclusive(self):
        return self.real.smooth is None or self.complex.smooth is None


def check_condition_a(d, field=REAL):
    """d1 > 2|d2| over the reals, d1 != 2|d2| over the complexes (no tolerance)."""
    d1, d2 = d[0], d[1]
    if field == REAL:
        return d1 > 2 * abs(d2)
    return d1 != 2 * abs(d2)


def a_of_b(params, b):
    d1, d2, d3 = params.d
    return (d3 - 2 * b * d2) / d1


def b_quadratics(params):
    """Coefficients (highest first) of the three b-quadratics, shape (3, 3)."""
    d1, d2, d3 = params.d
    c = params.c_array
    alpha = d3 / d1
    beta = 2 * d2 / d1
    lo, hi = c[:3], c[3:]
    lead = np.full(3, beta * beta - 1)
    mid = beta * (lo + hi - 2 * alpha)
    const = (lo - alpha) * (hi - alpha)
    return np.stack([lead, mid, const], axis=1)


def b_residuals(params, b):
    """|(c_k - a)(c_{k+3} - a) - b^2| for k = 1, 2, 3 with a = a(b)."""
    a = a_of_b(params, b)
    c = params.c_array
    return np.abs((c[:3] - a) * (c[3:] - a) - b * b)


def _b_scale(params, b, a):
    return max(params.scale ** 2, abs(b) ** 2, abs(a) ** 2)


def b_system_resultants(params):
    """Pairwise resultants Res(q1, q2), Res(q1, q3), Res(q2, q3) of the b-quadratics."""
    q = b_quadratics(params)
    return tuple(sylvester_resultant(q[i], q[j]) for i, j in ((0, 1), (0, 2), (1, 2)))


def _roots_of(coeffs, tiny):
    lead, mid, const = coeffs
    if abs(lead) > tiny:
        return list(solve_quadratic(mid / lead, const / lead))
    if abs(mid) > tiny:
        return [complex(-const / mid)]
    return []


def solve_b_system(params, field=COMPLEX, tol=None):
    """Common roots b of the three quadratics ``(c_k - a)(c_{k+3} - a) = b^2``.

    Candidates are the roots of the first quadratic that is not identically
    zero; each is kept when all three residuals, divided by
    ``max(1, |c|^2, |d|^2, |a|^2, |b|^2)``, are within ``tol``. With
    ``field="real"`` only roots with negligible imaginary part survive and
    are returned as real numbers.

    Raises
    ------
    DegenerateSystem
        If all three quadratics vanish identically.
    """
    if tol is None:
        tol = DEFAULT.b
    if params.d[0] == 0:
        raise ValueError("d1 must be nonzero")
    q = b_quadratics(params)
    tiny = tol * params.scale ** 2
    nonzero = [row for row in q if np.max(np.abs(row)) > tiny]
    if not nonzero:
        raise DegenerateSystem("all three b-quadratics vanish identically")
    found = []
    for b in _roots_of(nonzero[0], tiny):
        if field == REAL:
            if abs(b.imag) > tol * max(1.0, abs(b)):
                continue
            b = complex(b.real, 0.0)
        a = a_of_b(params, b)
        res = b_residuals(params, b)
        if np.max(res) / _b_scale(params, b, a) > tol:
            continue
        if any(abs(b - s.b) <= tol * max(1.0, abs(b)) for s in found):
            continue
        found.append(BSolution(b=b, a=complex(a), residuals=tuple(float(r) for r in res)))
    return found


def inequality_values(sol, params):
    """Left and right sides of the three inequalities, as two length-3 arrays.

    Raises
    ------
    UndefinedForm
        If b == 0 or d2 == 0.
    """
    d1, d2, _ = params.d
    b = sol.b.real
    a = sol.a.real
    if b == 0 or d2 == 0:
        raise UndefinedForm(f"inequalities undefined for b={b!r}, d2={d2!r}")
    ratio = (params.c_array[:3] - a) / b
    return ratio / d2, (1 + ratio * ratio) / d1


def check_inequalities(sol, params):
    """True when at least one of the three real-smoothness inequalities holds."""
    lhs, rhs = inequality_values(sol, params)
    return bool(np.any(lhs >= rhs))


def real_smoothness(params, tol=None):
    """Real-smoothness verdict plus the b-roots that witness a singular point."""
    if not check_condition_a(params.d, REAL):
        return Verdict(False, "condition_a"), []
    try:
        sols = solve_b_system(params, REAL, tol)
    except DegenerateSystem:
        return Verdict(None, "degenerate_b_system"), []
    witnesses = []
    undefined = False
    for sol in sols:
        try:
            if check_inequalities(sol, params):
                witnesses.append(sol)
        except UndefinedForm:
            undefined = True
    if witnesses:
        return Verdict(False, "b_root_inequality"), witnesses
    if undefined:
        return Verdict(None, "undefined_form"), []
    # emptiness of the real level set is not decided here
    return Verdict(True, "smooth_possibly_empty"), []


def complex_smoothness(params, tol=None):
    if not check_condition_a(params.d, COMPLEX):
        return Verdict(False, "condition_a"), []
    try:
        sols = solve_b_system(params, COMPLEX, tol)
    except DegenerateSystem:
        return Verdict(False, "degenerate_b_system"), []
    if sols:
        return Verdict(False, "b_root"), sols
    return Verdict(True, "smooth"), []


def degenerate_point(params, sol, tol=1e-8):
    """Real point of the level set where the Jacobian has rank 2.

    With ``r_k = (c_k - a) / b`` the candidate point is
    ``x_{k+3} = r_k x_k``; the squares ``X_k = x_k^2`` solve

        d1 = sum X_k (1 + r_k^2)
        d2 = sum X_k r_k
        d3 = sum X_k (c_k + c_{k+3} r_k^2)

    whose third row is ``a`` times the first plus ``2b`` times the second,
    so the system is solved as a nonnegative least-squares problem rather
    than by inversion.

    Raises
    ------
    NoRealPoint
        If no componentwise nonnegative solution reproduces d within
        ``tol * params.scale``.
    """
    b = sol.b.real
    a = sol.a.real
    if b == 0:
        raise UndefinedForm("degenerate point construction needs b != 0")
    c = params.c_array
    r = (c[:3] - a) / b
    m = np.stack([1 + r * r, r, c[:3] + c[3:] * r * r])
    squares, rnorm = nnls(m, params.d_array)
    if rnorm > tol * params.scale:
        raise NoRealPoint(f"no nonnegative squares reproduce d (residual {rnorm:.3g})")
    x_low = np.sqrt(squares)
    x = np.concatenate([x_low, r * x_low])
    if np.max(np.abs(residuals(params, x))) > tol * params.scale:
        raise NoRealPoint("constructed point misses the level set")
    return x


def random_points(params, n, rng, real=True, tol=1e-10, max_tries=None):
    """Up to n points of the level set found by projecting random starts."""
    if max_tries is None:
        max_tries = 3 * n
    radius = np.sqrt(max(abs(params.d[0]), 1.0))
    out = []
    for _ in range(max_tries):
        if len(out) >= n:
            break
        start = rng.normal(size=6) * radius / np.sqrt(6)
        if not real:
            start = start + 1j * rng.normal(size=6) * radius / np.sqrt(6)
        x, ok = project_to_level_set(params, start, tol=tol)
        if ok:
            out.append(x)
    return out


def sampled_rank_ratios(params, n, rng, real=True):
    """sigma_3 / sigma_1 of the Jacobian at up to n projected points."""
    pts = random_points(params, n, rng, real=real)
    return [rank_ratio(jacobian(params, x)) for x in pts]


def _chart_samples(params, chart, n, rng, tol):
    ratios = []
    worst = None
    converged = 0
    for k in range(n):
        start = rng.normal(size=7) + 1j * rng.normal(size=7)
        start[chart] = 1.0
        fixed = [chart]
        if k % 2 == 1 and chart != 0:
            # points at infinity of the affine level set
            start[0] = 0.0
            fixed.append(0)
        x, ok = project_to_level_set(params, start, tol=tol, homogeneous=True, fixed=fixed)
        if not ok:
            continue
        converged += 1
        j = np.delete(jacobian_homogeneous(params, x), chart, axis=1)
        ratio = rank_ratio(j)
        ratios.append(ratio)
        if worst is None or ratio < worst[0]:
            worst = (ratio, x)
    return ratios, worst, converged


def projective_smoothness(params, rng, samples=40, tol=None):
    """Smoothness in P^6 chart by chart.

    Chart 0 (X0 = 1) is the affine level set and takes the closed-form
    complex verdict. Charts X_i = 1 are checked by sampling points (half of
    them on the hyperplane X0 = 0) and testing the rank of the chart
    Jacobian; that is evidence, not a proof.
    """
    tols = tol or DEFAULT
    out = []
    verdict, _ = complex_smoothness(params, tols.b)
    # min_ratio is None where no rank was sampled
    out.append(ChartVerdict(0, "smooth" if verdict.smooth else "singular-witness-found", 0, 0, None))
    for chart in range(1, 7):
        ratios, worst, converged = _chart_samples(params, chart, samples, rng, 1e-10)
        if not ratios:
            out.append(ChartVerdict(chart, "no-samples", samples, 0, None))
            continue
        min_ratio, point = worst
        if min_ratio < tols.rank:
            out.append(ChartVerdict(chart, "singular-witness-found", samples, converged,
                                    float(min_ratio), tuple(complex(v) for v in point)))
        else:
            out.append(ChartVerdict(chart, "sampled-smooth", samples, converged, float(min_ratio)))
    return tuple(out)


def analyze_smoothness(params, rng=None, tol=None, projective=True, samples=40):
    """Real, complex and (optionally) chart-sampled projective verdicts with witnesses."""
    tols = tol or DEFAULT
    real, real_w = real_smoothness(params, tols.b)
    cplx, cplx_w = complex_smoothness(params, tols.b)
    witnesses = list(real_w)
    for sol in cplx_w:
        if all(abs(sol.b - w.b) > tols.b * max(1.0, abs(sol.b)) for w in witnesses):
            witnesses.append(sol)
    points = []
    for sol in real_w:
        try:
            points.append(tuple(float(v) for v in degenerate_point(params, sol)))
        except (NoRealPoint, UndefinedForm) as exc:
            log.debug("no degenerate point for b=%s: %s", sol.b, exc)
    charts = ()
    if projective:
        if rng is None:
            rng = np.random.default_rng(0)
        charts = projective_smoothness(params, rng, samples, tols)
    return SmoothnessReport(real, cplx, charts, tuple(witnesses), tuple(points))
