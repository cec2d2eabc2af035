"""Complex scalars, polynomial roots and small dense linear algebra."""

import cmath

import numpy as np

from .errors import DegreeZero, ZeroPolynomial

# Leading coefficients below LEADING_FLOOR * max|coeff| are stripped.
LEADING_FLOOR = 1e-14


def principal_sqrt(z):
    """Square root with Re >= 0, and Im >= 0 on the imaginary axis.

    The cut lies on the negative real axis and a negative zero imaginary
    part is treated as +0, so ``principal_sqrt(-1) == 1j`` regardless of
    how the input was produced.

    Works on scalars and on numpy arrays.
    """
    if np.ndim(z) == 0:
        z = complex(z)
        w = cmath.sqrt(complex(z.real, z.imag + 0.0))
        if w.real == 0.0 and w.imag < 0.0:
            w = -w
        return w
    z = np.asarray(z, dtype=complex)
    w = np.sqrt(z.real + 1j * (z.imag + 0.0))
    flip = (w.real == 0.0) & (w.imag < 0.0)
    return np.where(flip, -w, w)


def solve_quadratic(p, q):
    """Both roots of ``z**2 + p*z + q = 0``.

    The root of larger magnitude comes first and is computed directly;
    the other one is recovered from the product ``q``, which avoids
    cancellation when ``|p|`` dominates.

    Examples
    --------
    >>> solve_quadratic(-2.5, 1)
    ((2+0j), (0.5+0j))
    """
    p = complex(p)
    q = complex(q)
    disc = principal_sqrt(p * p - 4.0 * q)
    plus = -p + disc
    minus = -p - disc
    big = plus if abs(plus) >= abs(minus) else minus
    r1 = big / 2.0
    if r1 == 0:
        return 0j, 0j
    return r1, q / r1


def _strip(coeffs, floor):
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if c.size == 0:
        raise ZeroPolynomial("empty coefficient list")
    scale = np.max(np.abs(c))
    if scale == 0:
        raise ZeroPolynomial("all coefficients vanish")
    nz = np.nonzero(np.abs(c) > floor * scale)[0]
    c = c[nz[0]:]
    if c.size == 1:
        raise DegreeZero("polynomial is a nonzero constant")
    return c


def poly_scale(coeffs, z):
    """Natural backward-error scale ``sum |c_k| |z|^k`` of a polynomial at z."""
    return float(np.polyval(np.abs(np.asarray(coeffs, dtype=complex)), abs(z)))


def polish_root(coeffs, z, rtol=1e-11, max_iter=50):
    """Newton-polish one root; the iterate with the smallest residual wins."""
    c = np.asarray(coeffs, dtype=complex)
    dc = np.polyder(c)
    best = complex(z)
    best_res = abs(np.polyval(c, best))
    for _ in range(max_iter):
        if best_res <= rtol * max(poly_scale(c, best), np.finfo(float).tiny):
            break
        slope = np.polyval(dc, z)
        if slope == 0:
            break
        z = z - np.polyval(c, z) / slope
        res = abs(np.polyval(c, z))
        if not np.isfinite(res):
            break
        if res < best_res:
            best, best_res = complex(z), res
        elif res > 10 * best_res:
            break
    return best


def solve_poly(coeffs, floor=LEADING_FLOOR):
    """All complex roots of a polynomial given highest-degree first.

    Roots come from the companion-matrix eigenvalues and are then
    Newton-polished until the residual is at most ``1e-11`` times
    ``sum |c_k| |z|^k`` (multiple roots may stop short of that, at the
    best iterate found).

    Raises
    ------
    ZeroPolynomial
        If every coefficient vanishes.
    DegreeZero
        If only a nonzero constant remains after stripping.
    """
    c = _strip(coeffs, floor)
    c = c / c[0]
    if c.size == 2:
        return [complex(-c[1])]
    roots = np.roots(c)
    return [polish_root(c, z) for z in roots]


def singular_values(m):
    """Singular values of a small complex matrix, descending."""
    return np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)


def rank_ratio(m):
    """sigma_min / sigma_max of a matrix with min(shape) rows; 0 for the zero matrix."""
    s = singular_values(m)
    if s[0] == 0:
        return 0.0
    return float(s[-1] / s[0])


def lstsq_2x2(a, rhs, rtol=1e-12):
    """Least-squares solution of a real 2x2 system.

    Nonsingular matrices are solved by Cramer's rule. If
    ``|det| <= rtol * ||A||_F^2`` the matrix is treated as rank one and the
    minimum-norm solution ``A^T rhs / ||A||_F^2`` is returned (the
    pseudo-inverse of a rank-one matrix); the zero matrix gives zero.
    """
    (a11, a12), (a21, a22) = np.asarray(a, dtype=float)
    r1, r2 = np.asarray(rhs, dtype=float)
    fro2 = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22
    if fro2 == 0:
        return np.zeros(2)
    det = a11 * a22 - a12 * a21
    if abs(det) > rtol * fro2:
        return np.array([(a22 * r1 - a12 * r2) / det, (a11 * r2 - a21 * r1) / det])
    return np.array([a11 * r1 + a21 * r2, a12 * r1 + a22 * r2]) / fro2


def sylvester_resultant(p, q):
    """Resultant of two polynomials (highest degree first) via the Sylvester matrix."""
    p = np.trim_zeros(np.asarray(p, dtype=complex), "f")
    q = np.trim_zeros(np.asarray(q, dtype=complex), "f")
    m, n = p.size - 1, q.size - 1
    if m < 0 or n < 0:
        return 0j
    if m == 0:
        return p[0] ** n
    if n == 0:
        return q[0] ** m
    s = np.zeros((m + n, m + n), dtype=complex)
    for i in range(n):
        s[i, i:i + m + 1] = p
    for i in range(m):
        s[n + i, i:i + n + 1] = q
    return complex(np.linalg.det(s))
