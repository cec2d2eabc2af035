"""An explicit complex line x = a + t b on the complexified level set.

The ansatz ties the two halves of the line together,

    a_{k+3} = lam * a_k,    b_{k+3} = mu * b_k     (k = 1, 2, 3),

and substituting it into f_j = d_j gives nine coefficient equations. With
``gam_k = c_k + mu^2 c_{k+3}``, ``del_k = c_k + lam mu c_{k+3}`` and
``eps_k = c_k + lam^2 c_{k+3}`` they read

    t^2:  sum b_k^2 = 0,              sum gam_k b_k^2 = 0
    t^1:  sum a_k b_k = 0,            sum del_k a_k b_k = 0
    t^0:  lam + 1/lam = d1/d2,        sum a_k^2 = d2/lam,   sum eps_k a_k^2 = d3

The t^2 pair fixes b_k^2 up to scale (the radicands below); the t^1 pair
forces ``a_k b_k = s w_k`` with ``w = (del_2 - del_3, del_3 - del_1,
del_1 - del_2)``; the t^0 pair then gives two values of s^2 whose
agreement is the compatibility condition

    sum_k (d3 - (d2/lam) eps_k) w_k^2 b_{k+1}^2 b_{k+2}^2 = 0,

a polynomial of degree at most 6 in mu. It always has mu = lam as a
double root, where both s^2 values blow up; that root is discarded.

The closed four-term radical equation for mu that accompanies this
construction in the literature is evaluated verbatim by
:func:`mu_equation_residual` and solved by :func:`solve_mu_radical`. Its
roots do not, in general, satisfy the compatibility condition, so lines
are built from :func:`solve_mu` and validated by substitution
(:func:`line_residuals`).
"""

import logging
from collections import Counter
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DegreeZero, Inconsistent, NoLineFound, NoRoot, ZeroB, ZeroD2, ZeroPolynomial
from .numerics import principal_sqrt, solve_poly, solve_quadratic
from .quadrics import evaluate, polarize
from .smoothness import complex_smoothness
from .tolerances import DEFAULT

log = logging.getLogger(__name__)

BRANCH_CLASSES = ((1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1))


@dataclass(frozen=True)
class ComplexLine:
    """x(t) = a_full + t * b_full in C^6; only the first halves are stored."""

    a: tuple
    b: tuple
    lam: complex
    mu: complex
    branch: tuple = (1, 1, 1)
    scale_s: complex = 1 + 0j
    lambda_index: int = 0

    @property
    def a_vec(self):
        return np.array(self.a, dtype=complex)

    @property
    def b_vec(self):
        return np.array(self.b, dtype=complex)

    @property
    def a_full(self):
        a = self.a_vec
        return np.concatenate([a, self.lam * a])

    @property
    def b_full(self):
        b = self.b_vec
        return np.concatenate([b, self.mu * b])

    def point(self, t):
        return self.a_full + t * self.b_full

    def scale(self, params):
        """max(1, |c|_inf, |d|_inf, |a|_inf^2, |b|_inf^2) over the full coordinates."""
        return max(params.scale, np.max(np.abs(self.a_full)) ** 2, np.max(np.abs(self.b_full)) ** 2)

    def max_residual(self, params):
        """Largest of the nine coefficient magnitudes divided by :meth:`scale`."""
        return float(np.max(np.abs(line_residuals(params, self))) / self.scale(params))


@dataclass(frozen=True)
class MuCandidate:
    """A root mu with its residuals under both formulations.

    ``equation_residual`` is the relative residual of the four-term radical
    equation on ``branch`` (the best of the four sign classes for
    compatibility roots); ``compat_residual`` is the relative residual of
    the compatibility condition.
    """

    mu: complex
    branch: tuple
    equation_residual: float
    compat_residual: float
    near_lambda: bool = False
    source: str = "compatibility"


def solve_lambda(params):
    """Both roots of lam + 1/lam = d1/d2, larger magnitude first."""
    d1, d2, _ = params.d
    if d2 == 0:
        raise ZeroD2("the lambda equation needs d2 != 0")
    return solve_quadratic(-d1 / d2, 1.0)


def radicands(params, mu):
    """(c2 - c3 + mu^2 (c5 - c6), c3 - c1 + mu^2 (c6 - c4), c1 - c2 + mu^2 (c4 - c5))."""
    c = params.c_array
    gam = c[:3] + mu * mu * c[3:]
    return np.array([gam[1] - gam[2], gam[2] - gam[0], gam[0] - gam[1]], dtype=complex)


def b_from_mu(params, mu, branch=(1, 1, 1)):
    return np.asarray(branch) * principal_sqrt(radicands(params, mu))


def w_vector(params, lam, mu):
    c = params.c_array
    dl = c[:3] + lam * mu * c[3:]
    return np.array([dl[1] - dl[2], dl[2] - dl[0], dl[0] - dl[1]], dtype=complex)


def eps_vector(params, lam):
    c = params.c_array
    return c[:3] + lam * lam * c[3:]


def energy_weights(params, lam):
    """d3 - (d2/lam) eps_k for k = 1, 2, 3."""
    _, d2, d3 = params.d
    return d3 - (d2 / lam) * eps_vector(params, lam)


def mu_equation_terms(params, lam, mu, b):
    """The four summands of the radical mu-equation, for explicit b values."""
    c1, c2, c3, c4, c5, c6 = params.c
    _, d2, d3 = params.d
    b1, b2, b3 = b
    e1 = d3 - d2 / lam * (c1 + lam ** 2 * c4)
    e2 = d2 / lam * (c2 + lam ** 2 * c5) - d3
    return np.array([
        b1 * b2 * e1 * (c2 - c3 + lam ** 2 * (c5 - c6)),
        (c1 - c3 + lam ** 2 * (c4 - c6)) * e2 * (c1 - c2 + lam * mu * (c4 - c5)),
        b1 * b3 * e2 * (c1 - c3 + lam * mu * (c4 - c6)),
        b2 * b3 * e1 * (c2 - c3 + lam * mu * (c5 - c6)),
    ], dtype=complex)


def mu_equation_residual(params, lam, mu, branch=(1, 1, 1)):
    """Left side of the radical mu-equation with b taken on ``branch``."""
    return complex(np.sum(mu_equation_terms(params, lam, mu, b_from_mu(params, mu, branch))))


def _relative(terms):
    total = float(np.sum(np.abs(terms)))
    return abs(complex(np.sum(terms))) / total if total > 0 else 0.0


def relative_mu_equation_residual(params, lam, mu, branch=(1, 1, 1)):
    """|sum of terms| / sum |terms| for the radical mu-equation."""
    return _relative(mu_equation_terms(params, lam, mu, b_from_mu(params, mu, branch)))


def compatibility_terms(params, lam, mu):
    """E_k w_k^2 b_{k+1}^2 b_{k+2}^2 for k = 1, 2, 3, evaluated directly."""
    beta = radicands(params, mu)
    w = w_vector(params, lam, mu)
    e = energy_weights(params, lam)
    others = np.array([beta[1] * beta[2], beta[2] * beta[0], beta[0] * beta[1]])
    return e * w * w * others


def compatibility_residual(params, lam, mu):
    return _relative(compatibility_terms(params, lam, mu))


def _poly_pieces(params, lam):
    c = params.c_array
    mu = Polynomial([0, 1])
    gam = [c[k] + mu * mu * c[k + 3] for k in range(3)]
    dl = [c[k] + lam * mu * c[k + 3] for k in range(3)]
    beta = [gam[1] - gam[2], gam[2] - gam[0], gam[0] - gam[1]]
    w = [dl[1] - dl[2], dl[2] - dl[0], dl[0] - dl[1]]
    return beta, w


def _highest_first(p):
    coef = np.asarray(p.coef, dtype=complex)
    return coef[::-1]


def compatibility_polynomial(params, lam):
    """Coefficients in mu (highest first) of the compatibility condition."""
    beta, w = _poly_pieces(params, lam)
    e = energy_weights(params, lam)
    p = (e[0] * w[0] ** 2 * beta[1] * beta[2]
         + e[1] * w[1] ** 2 * beta[2] * beta[0]
         + e[2] * w[2] ** 2 * beta[0] * beta[1])
    return _highest_first(p)


def cleared_radical_polynomial(params, lam):
    """The radical mu-equation with both square roots squared away.

    Writing the equation as ``b1 b2 X + K + b1 b3 Y + b2 b3 Z = 0`` (X
    constant, K, Y, Z linear in mu), the terms sharing b1 are isolated and
    squared, then the remaining ``b2 b3`` term is isolated and squared:

        b2^2 b3^2 (2 b1^2 X Y - 2 K Z)^2
            = (K^2 + b2^2 b3^2 Z^2 - b1^2 b2^2 X^2 - b1^2 b3^2 Y^2)^2

    Every root on every branch is a root of this polynomial; the converse
    fails, so roots must be filtered by the branch residual.
    """
    c1, c2, c3, c4, c5, c6 = params.c
    _, d2, d3 = params.d
    beta, _ = _poly_pieces(params, lam)
    mu = Polynomial([0, 1])
    e1 = d3 - d2 / lam * (c1 + lam ** 2 * c4)
    e2 = d2 / lam * (c2 + lam ** 2 * c5) - d3
    x = Polynomial([e1 * (c2 - c3 + lam ** 2 * (c5 - c6))])
    k = (c1 - c3 + lam ** 2 * (c4 - c6)) * e2 * (c1 - c2 + lam * mu * (c4 - c5))
    y = e2 * (c1 - c3 + lam * mu * (c4 - c6))
    z = e1 * (c2 - c3 + lam * mu * (c5 - c6))
    b1s, b2s, b3s = beta
    rhs = k * k + b2s * b3s * z * z - b1s * b2s * x * x - b1s * b3s * y * y
    lhs_root = 2 * b1s * x * y - 2 * k * z
    return _highest_first(b2s * b3s * lhs_root * lhs_root - rhs * rhs)


def _near_pm(mu, lam, tol):
    return abs(mu - lam) <= tol * max(1.0, abs(lam)) or abs(mu + lam) <= tol * max(1.0, abs(lam))


def _dedupe(values, tol):
    out = []
    for v in values:
        if all(abs(v - u) > tol * max(1.0, abs(v)) for u in out):
            out.append(v)
    return out


def _mu_order(m):
    return (round(abs(m), 12), round(float(np.angle(m)), 12))


def collinear_mu(params, lam):
    """The mu (if any) at which w vanishes, i.e. del is parallel to (1, 1, 1).

    w is affine in mu, so this needs the two halves of c to be affinely
    related; c = (1, 2, 3, 4, 5, 6) is an example, with mu = -1/lam.
    """
    w0 = w_vector(params, lam, 0.0)
    g = w_vector(params, lam, 1.0) - w0
    gg = np.vdot(g, g).real
    if gg <= (1e-12 * params.scale) ** 2:
        return []
    mu = -np.vdot(g, w0) / gg
    if np.max(np.abs(w0 + mu * g)) > 1e-10 * params.scale:
        return []
    return [complex(mu)]


def solve_mu(params, lam, tol=None):
    """Roots of the compatibility condition, annotated with radical residuals.

    Zeros of w (see :func:`collinear_mu`) are added with source
    ``"collinear"``; there the t^1 equations lose one constraint and the
    line is recovered by :func:`a_on_plane`.

    Raises
    ------
    NoRoot
        If the compatibility polynomial vanishes identically and w has no
        zero (mu is then undetermined, e.g. when c1 = c2 and c4 = c5), or
        no root passes the residual check.
    """
    tols = tol or DEFAULT
    sources = {}
    try:
        for mu in solve_poly(compatibility_polynomial(params, lam)):
            sources.setdefault(complex(mu), "compatibility")
    except (ZeroPolynomial, DegreeZero) as exc:
        log.debug("compatibility polynomial is degenerate: %s", exc)
    for mu in collinear_mu(params, lam):
        sources = {m: s for m, s in sources.items() if abs(m - mu) > 1e-8 * max(1.0, abs(mu))}
        sources[mu] = "collinear"
    if not sources:
        raise NoRoot("compatibility polynomial vanishes identically and w has no zero")
    out = []
    for mu in sorted(_dedupe(list(sources), 1e-8), key=_mu_order):
        compat = compatibility_residual(params, lam, mu)
        if compat > tols.mu:
            log.debug("compatibility root %s rejected, residual %.3g", mu, compat)
            continue
        radical = [relative_mu_equation_residual(params, lam, mu, br) for br in BRANCH_CLASSES]
        best = int(np.argmin(radical))
        out.append(MuCandidate(complex(mu), BRANCH_CLASSES[best], float(radical[best]), compat,
                               _near_pm(mu, lam, 1e-8), sources[mu]))
    if not out:
        raise NoRoot("no compatibility root passed the residual check")
    return out


def radical_root_table(params, lam):
    """(mu, branch, relative residual) for every cleared root and sign class."""
    try:
        roots = solve_poly(cleared_radical_polynomial(params, lam))
    except (ZeroPolynomial, DegreeZero):
        return []
    rows = []
    for mu in sorted(_dedupe(roots, 1e-8), key=_mu_order):
        for br in BRANCH_CLASSES:
            rows.append((complex(mu), br, relative_mu_equation_residual(params, lam, mu, br)))
    return rows


def solve_mu_radical(params, lam, tol=None):
    """Roots of the four-term radical equation, filtered branch by branch.

    Residuals in the band (tol, 10 tol] are ambiguous and logged.
    """
    tols = tol or DEFAULT
    out = []
    for mu, br, res in radical_root_table(params, lam):
        if res <= tols.mu:
            out.append(MuCandidate(mu, br, res, compatibility_residual(params, lam, mu),
                                   _near_pm(mu, lam, 1e-8), "radical"))
        elif res <= 10 * tols.mu:
            log.warning("ambiguous radical root mu=%s branch=%s residual %.3g", mu, br, res)
    if not out:
        raise NoRoot("no root of the radical equation survived branch filtering")
    return out


def s_squared_pair(params, lam, mu, b):
    """The two values of s^2 from sum a^2 = d2/lam and sum eps a^2 = d3."""
    _, d2, d3 = params.d
    w = w_vector(params, lam, mu)
    beta = np.asarray(b, dtype=complex) ** 2
    q = w * w / beta
    return (d2 / lam) / np.sum(q), d3 / np.sum(eps_vector(params, lam) * q)


def a_from_mu(params, lam, mu, b, tol=None):
    """Recover (a1, a2, a3) and the scale s with a_k b_k = s w_k.

    When exactly one b_k and the matching w_k both vanish (a coincidence
    such as c1 = c2 and c4 = c5), a_k drops out of the t^1 equations and
    is solved together with s^2 from the two t^0 equations.

    Raises
    ------
    ZeroB
        If b_k = 0 while w_k != 0, or b vanishes altogether.
    Inconsistent
        If the two determinations of s^2 disagree beyond ``tol.s2``.
    """
    tols = tol or DEFAULT
    b = np.asarray(b, dtype=complex)
    _, d2, d3 = params.d
    w = w_vector(params, lam, mu)
    eps = eps_vector(params, lam)
    tiny_b = 1e-10 * max(1.0, np.max(np.abs(b)))
    tiny_w = 1e-10 * max(params.scale, np.max(np.abs(w)))
    zero = np.abs(b) <= tiny_b
    if np.any(zero & (np.abs(w) > tiny_w)):
        raise ZeroB("b_k = 0 while w_k != 0")
    if np.count_nonzero(zero) > 1:
        raise ZeroB("b vanishes")
    a = np.zeros(3, dtype=complex)
    live = ~zero
    q = np.zeros(3, dtype=complex)
    q[live] = w[live] ** 2 / b[live] ** 2
    if np.any(zero):
        f = int(np.flatnonzero(zero)[0])
        m = np.array([[np.sum(q), 1.0], [np.sum(eps * q), eps[f]]], dtype=complex)
        if abs(np.linalg.det(m)) <= 1e-12 * max(1.0, np.max(np.abs(m))) ** 2:
            raise Inconsistent("free-coordinate system is singular")
        s2, af2 = np.linalg.solve(m, np.array([d2 / lam, d3], dtype=complex))
        a[f] = principal_sqrt(af2)
    else:
        s1 = np.sum(q)
        s3 = np.sum(eps * q)
        if abs(s1) <= 1e-12 * np.sum(np.abs(q)) or abs(s3) <= 1e-12 * np.sum(np.abs(eps * q)):
            raise Inconsistent("s^2 is unbounded (mu coincides with lambda)")
        s2_a = (d2 / lam) / s1
        s2_b = d3 / s3
        if abs(s2_a - s2_b) > tols.s2 * max(abs(s2_a), abs(s2_b)):
            raise Inconsistent(f"s^2 determinations disagree: {s2_a} vs {s2_b}")
        s2 = s2_a
    s = principal_sqrt(s2)
    a[live] = s * w[live] / b[live]
    return a, complex(s)


def a_on_plane(params, lam, b):
    """All (a, s) when w = 0: a ranges over the plane sum a_k b_k = 0.

    On that plane the t^0 equations combine into the homogeneous quadratic
    ``d3 sum a_k^2 - (d2/lam) sum eps_k a_k^2 = 0``, which fixes the
    direction of a within the plane (two choices); ``sum a_k^2 = d2/lam``
    then fixes its length. ``s`` is reported as the length factor.
    """
    _, d2, d3 = params.d
    b = np.asarray(b, dtype=complex)
    if np.max(np.abs(b)) == 0:
        raise ZeroB("b vanishes")
    _, _, vh = np.linalg.svd(b[None, :])
    basis = vh[1:].conj().T
    eps = eps_vector(params, lam)
    q1 = basis.T @ basis
    q2 = basis.T @ (eps[:, None] * basis)
    q = d3 * q1 - (d2 / lam) * q2
    if abs(q[1, 1]) >= abs(q[0, 0]):
        dirs = [np.array([1.0, z]) for z in _quadratic_roots(q[1, 1], 2 * q[0, 1], q[0, 0])]
    else:
        dirs = [np.array([z, 1.0]) for z in _quadratic_roots(q[0, 0], 2 * q[0, 1], q[1, 1])]
    out = []
    for y in dirs:
        n1 = y @ q1 @ y
        if abs(n1) <= 1e-12 * np.sum(np.abs(q1)) * np.vdot(y, y).real:
            continue
        s = principal_sqrt((d2 / lam) / n1)
        out.append((s * (basis @ y), complex(s)))
    if not out:
        raise Inconsistent("no admissible direction on the plane")
    return out


def _quadratic_roots(lead, mid, const):
    if lead == 0:
        return [] if mid == 0 else [-const / mid]
    return list(solve_quadratic(mid / lead, const / lead))


def line_residuals(params, line):
    """3x3 array: row j holds the t^2, t^1, t^0 coefficients of f_j(a + t b) - d_j."""
    a = line.a_full
    b = line.b_full
    return np.stack([evaluate(params, b), 2 * polarize(params, a, b), evaluate(params, a) - params.d_array], axis=1)


def swap_line(line):
    """Image of a line under (x1,x2,x3) <-> (x4,x5,x6); lives on params.swapped()."""
    a = line.lam * line.a_vec
    b = line.mu * line.b_vec
    return ComplexLine(tuple(a), tuple(b), 1 / line.lam, 1 / line.mu, line.branch, line.scale_s,
                       line.lambda_index)


def construct_line(params, tol=None, check_smooth=True):
    """Every valid line of the ansatz: both lambda roots, all sign classes, all mu.

    Lines are ordered by lambda root index, branch class, then ascending
    |mu|, and each one passes :func:`line_residuals` at ``tol.residual``.

    Raises
    ------
    ZeroD2
        If d2 = 0.
    NoLineFound
        With per-stage rejection counts when nothing survives.
    """
    tols = tol or DEFAULT
    if check_smooth:
        verdict, _ = complex_smoothness(params, tols.b)
        if not verdict.smooth:
            log.warning("complex level set is not smooth (%s); lines may be degenerate", verdict.reason)
    stages = Counter()
    lines = []
    for li, lam in enumerate(solve_lambda(params)):
        try:
            cands = solve_mu(params, lam, tols)
        except NoRoot:
            stages["mu"] += 1
            continue
        for br in BRANCH_CLASSES:
            for cand in cands:
                b = b_from_mu(params, cand.mu, br)
                try:
                    if cand.source == "collinear":
                        solutions = a_on_plane(params, lam, b)
                    else:
                        solutions = [a_from_mu(params, lam, cand.mu, b, tols)]
                except ZeroB:
                    stages["zero_b"] += 1
                    continue
                except Inconsistent:
                    stages["inconsistent"] += 1
                    continue
                for a, s in solutions:
                    line = ComplexLine(tuple(complex(v) for v in a), tuple(complex(v) for v in b),
                                       complex(lam), cand.mu, br, s, li)
                    if line.max_residual(params) > tols.residual:
                        stages["residual"] += 1
                        continue
                    lines.append(line)
    if not lines:
        raise NoLineFound("no valid line for these parameters", stages)
    return lines
