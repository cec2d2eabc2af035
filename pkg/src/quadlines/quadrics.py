"""The three quadratic forms, their level data, and derived evaluators.

The forms are fixed:

    f1(x) = x1^2 + ... + x6^2
    f2(x) = x1 x4 + x2 x5 + x3 x6
    f3(x) = c1 x1^2 + ... + c6 x6^2

and the level set is ``{f1 = d1, f2 = d2, f3 = d3}``. Points are numpy
arrays whose last axis has length 6; every evaluator broadcasts over
leading axes and accepts real or complex input.
"""

import math
from dataclasses import dataclass

import numpy as np

SWAP = np.array([3, 4, 5, 0, 1, 2])


@dataclass(frozen=True)
class QuadricParams:
    c: tuple
    d: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.c)
        d = tuple(float(v) for v in self.d)
        if len(c) != 6 or len(d) != 3:
            raise ValueError(f"need 6 c values and 3 d values, got {len(c)} and {len(d)}")
        if not all(math.isfinite(v) for v in c + d):
            raise ValueError("parameters must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def c_array(self):
        return np.array(self.c)

    @property
    def d_array(self):
        return np.array(self.d)

    @property
    def scale(self):
        """max(1, |c|_inf, |d|_inf)."""
        return max(1.0, max(abs(v) for v in self.c), max(abs(v) for v in self.d))

    def swapped(self):
        """Parameters after the relabelling (x1,x2,x3) <-> (x4,x5,x6)."""
        return QuadricParams(self.c[3:] + self.c[:3], self.d)

    def with_d(self, d):
        return QuadricParams(self.c, d)


def swap_halves(x):
    return np.asarray(x)[..., SWAP]


def evaluate(params, x):
    """(f1(x), f2(x), f3(x)) stacked on the last axis."""
    x = np.asarray(x)
    f1 = np.sum(x * x, axis=-1)
    f2 = x[..., 0] * x[..., 3] + x[..., 1] * x[..., 4] + x[..., 2] * x[..., 5]
    f3 = np.sum(params.c_array * x * x, axis=-1)
    return np.stack([f1, f2, f3], axis=-1)


def residuals(params, x):
    return evaluate(params, x) - params.d_array


def jacobian(params, x):
    """3x6 matrix of partial derivatives at a single point."""
    x = np.asarray(x)
    return np.stack([2 * x, swap_halves(x), 2 * params.c_array * x], axis=-2)


def _commuting_product(x, v):
    """Elementwise x * v that is bit-identical under swapping x and v.

    numpy's complex multiply may fuse operations differently for the two
    argument orders; building it from real products avoids that.
    """
    if not (np.iscomplexobj(x) or np.iscomplexobj(v)):
        return x * v
    xr, xi, vr, vi = x.real, x.imag, v.real, v.imag
    return (xr * vr - xi * vi) + 1j * (xr * vi + xi * vr)


def polarize(params, x, v):
    """Symmetric bilinear forms B_j with f_j(x + t v) = f_j(x) + 2t B_j(x, v) + t^2 f_j(v)."""
    x = np.asarray(x)
    v = np.asarray(v)
    xv = _commuting_product(x, v)
    cross = _commuting_product(x[..., :3], v[..., 3:]) + _commuting_product(x[..., 3:], v[..., :3])
    b1 = np.sum(xv, axis=-1)
    b2 = 0.5 * np.sum(cross, axis=-1)
    b3 = np.sum(params.c_array * xv, axis=-1)
    return np.stack([b1, b2, b3], axis=-1)


def gram_matrices(params):
    """Read-only 3x6x6 stack of the symmetric matrices with f_j(x) = x^T G_j x."""
    g = np.zeros((3, 6, 6))
    g[0] = np.eye(6)
    for i in range(3):
        g[1, i, i + 3] = g[1, i + 3, i] = 0.5
    g[2] = np.diag(params.c_array)
    g.setflags(write=False)
    return g


def evaluate_homogeneous(params, big_x):
    """Homogenized forms F_j(X0..X6) = f_j(X1..X6) - d_j X0^2."""
    big_x = np.asarray(big_x)
    x0 = big_x[..., 0]
    return evaluate(params, big_x[..., 1:]) - params.d_array * (x0 * x0)[..., None]


def jacobian_homogeneous(params, big_x):
    """3x7 Jacobian of the homogenized forms with respect to (X0, ..., X6)."""
    big_x = np.asarray(big_x)
    x0 = big_x[0]
    col0 = -2 * params.d_array * x0
    return np.concatenate([col0[:, None], jacobian(params, big_x[1:])], axis=1)


def project_to_level_set(params, x0, tol=1e-10, max_iter=60, homogeneous=False, fixed=()):
    """Gauss-Newton projection of a start point onto the level set.

    Each step is the minimum-norm solution of the linearized system, so a
    real start stays real and a complex start explores the complex set.

    Parameters
    ----------
    params : QuadricParams
    x0 : array_like
        Start point, length 6 (or 7 with ``homogeneous=True``).
    tol : float
        Convergence bound on ``max |residual|`` divided by ``params.scale``.
    homogeneous : bool
        Work with the homogenized forms in seven coordinates.
    fixed : sequence of int
        Coordinates held fixed (used for affine charts X_i = 1 and for
        the hyperplane at infinity X0 = 0).

    Returns
    -------
    x : ndarray
    converged : bool
    """
    x = np.array(x0, dtype=np.result_type(np.asarray(x0).dtype, float))
    if homogeneous:
        res_fn, jac_fn = evaluate_homogeneous, jacobian_homogeneous
    else:
        res_fn, jac_fn = residuals, jacobian
    free = np.setdiff1d(np.arange(x.size), np.asarray(fixed, dtype=int))
    bound = tol * params.scale
    for _ in range(max_iter):
        r = res_fn(params, x)
        if np.max(np.abs(r)) <= bound:
            return x, True
        j = jac_fn(params, x)[:, free]
        step, *_ = np.linalg.lstsq(j, -r, rcond=None)
        if not np.all(np.isfinite(step)):
            return x, False
        x[free] += step
        if np.max(np.abs(x)) > 1e8:
            return x, False
    return x, bool(np.max(np.abs(res_fn(params, x))) <= bound)
