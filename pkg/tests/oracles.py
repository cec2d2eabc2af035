"""Independent reference computations used only by the tests."""

import numpy as np

from quadlines.quadrics import QuadricParams, evaluate


def grid_min_imaginary_norm(a_full, b_full, n=400, max_levels=12, rtol=1e-10, radius=None):
    """Minimum over complex t of ||Im(a + t b)||^2 by zooming grid search.

    Each level evaluates the six coordinates directly on an n x n grid.
    While the best node sits on the window edge the window moves there
    (it is doubled instead on the first level); otherwise it recentres on
    the best node and shrinks to four grid cells. Zooming stops once a
    level improves the minimum by less than ``rtol`` relative. The starting
    window is the disk bound |t| <= 4 (1 + |a|/|b|).
    """
    a = np.asarray(a_full, dtype=complex)
    b = np.asarray(b_full, dtype=complex)
    if radius is None:
        bmax = np.max(np.abs(b))
        radius = 4.0 * (1.0 + np.max(np.abs(a)) / bmax) if bmax > 0 else 1.0
    centre = 0j
    best = np.inf
    for level in range(max_levels):
        previous = best
        for _ in range(200):
            xs = np.linspace(centre.real - radius, centre.real + radius, n)
            ys = np.linspace(centre.imag - radius, centre.imag + radius, n)
            vals = np.zeros((n, n))
            for k in range(a.size):
                # Im(a_k + (x + iy) b_k), coordinate by coordinate
                im = a[k].imag + xs[:, None] * b[k].imag + ys[None, :] * b[k].real
                vals += im * im
            i, j = np.unravel_index(np.argmin(vals), vals.shape)
            best = min(best, vals[i, j])
            centre = complex(xs[i], ys[j])
            if i not in (0, n - 1) and j not in (0, n - 1):
                break
            if level == 0:
                radius *= 2
        if previous - best <= rtol * best:
            break
        radius = 4 * (2 * radius / (n - 1))
    return float(best)


def finite_difference_jacobian(params, x, h=1e-6):
    x = np.asarray(x, dtype=float)
    out = np.zeros((3, 6))
    for i in range(6):
        e = np.zeros(6)
        e[i] = h
        out[:, i] = (evaluate(params, x + e) - evaluate(params, x - e)) / (2 * h)
    return out


def eigen_singular_values(m):
    """Singular values via the eigenvalues of M M^H."""
    m = np.asarray(m, dtype=complex)
    ev = np.linalg.eigvalsh(m @ m.conj().T)
    return np.sqrt(np.clip(ev[::-1], 0, None))


def indicator_expanded(c):
    """The integrability cubic multiplied out term by term (a different association)."""
    c1, c2, c3, c4, c5, c6 = c
    terms = [
        c1 * c2 * c4, c1 * c4 * c5, -c1 * c3 * c4, -c1 * c4 * c6,
        c2 * c3 * c5, c2 * c5 * c6, -c1 * c2 * c5, -c2 * c4 * c5,
        c1 * c3 * c6, c3 * c4 * c6, -c2 * c3 * c6, -c3 * c5 * c6,
    ]
    return float(np.sum(np.sort(terms)))


def degenerate_instance(a, b, r, squares):
    """Parameters with a prescribed real common b-root and a real singular point.

    With c_k = a + b r_k and c_{k+3} = a + b / r_k every pair satisfies
    (c_k - a)(c_{k+3} - a) = b^2; choosing d from the squares X_k of a
    point with x_{k+3} = r_k x_k puts that point on the level set.
    """
    r = np.asarray(r, dtype=float)
    x2 = np.asarray(squares, dtype=float)
    c = np.concatenate([a + b * r, a + b / r])
    d1 = float(np.sum(x2 * (1 + r * r)))
    d2 = float(np.sum(x2 * r))
    d3 = a * d1 + 2 * b * d2
    return QuadricParams(c, (d1, d2, d3))


def random_params(rng, c_scale=3.0):
    c = rng.uniform(-c_scale, c_scale, 6)
    d = (rng.uniform(0.5, 6.0), rng.uniform(-2.0, 2.0), rng.uniform(-6.0, 6.0))
    return QuadricParams(c, d)
