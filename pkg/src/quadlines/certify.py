"""Certificates that a constructed line carries no real point.

Two independent routes are combined. The structural route checks the
five sufficient hypotheses on (c, d, lam, mu, a). The oracle route
minimizes ``F(t) = sum_k Im(A_k + t B_k)^2`` over t in C: each imaginary
part is affine in (Re t, Im t), so F is a convex quadratic whose minimum
is found exactly by a 2x2 least-squares solve, and ``min F = 0`` exactly
when the line meets R^6.

The structural argument also needs lam to be real (multiplying the first
half by lam must preserve realness); that holds whenever d1 > 2|d2|, and
is tracked separately as ``lambda_real``.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .numerics import lstsq_2x2
from .tolerances import DEFAULT

log = logging.getLogger(__name__)

CERTIFIED = "Certified"
REFUTED = "Refuted"
INCONCLUSIVE = "Inconclusive"

HYPOTHESIS_NAMES = ("energy_nonzero", "not_c1c2_c4c5", "not_c1c3_c4c6", "mu_not_pm_lambda", "a_not_all_real")


@dataclass(frozen=True)
class RealnessCertificate:
    hypotheses: tuple
    lambda_real: bool
    oracle_min: float
    oracle_argmin: complex
    threshold: float
    verdict: str
    notes: tuple = ()

    @property
    def hypotheses_hold(self):
        return all(self.hypotheses)


def check_hypotheses(params, line, tol=None):
    """Five booleans, in the order of ``HYPOTHESIS_NAMES``.

    Equalities are decided with ``tol.eq`` scaled by ``params.scale`` (for
    the c and d tests), ``max(1, |lam|)`` (for mu = +-lam) and
    ``max(1, |a|_inf)`` (for the realness of a).
    """
    tols = tol or DEFAULT
    c1, c2, c3, c4, c5, c6 = params.c
    _, d2, d3 = params.d
    lam, mu = line.lam, line.mu
    eq = tols.eq * params.scale
    h1 = abs(d2 / lam * (c2 + lam * lam * c5) - d3) > eq
    h2 = not (abs(c1 - c2) <= eq and abs(c4 - c5) <= eq)
    h3 = not (abs(c1 - c3) <= eq and abs(c4 - c6) <= eq)
    lam_eq = tols.eq * max(1.0, abs(lam))
    h4 = abs(mu - lam) > lam_eq and abs(mu + lam) > lam_eq
    a = line.a_vec
    h5 = bool(np.any(np.abs(a.imag) > tols.eq * max(1.0, np.max(np.abs(a)))))
    return (bool(h1), bool(h2), bool(h3), bool(h4), h5)


def min_imaginary_norm_coords(a_full, b_full):
    """Exact minimum over complex t of ||Im(a + t b)||^2.

    Returns
    -------
    t_star : complex
    value : float
    """
    a = np.asarray(a_full, dtype=complex)
    b = np.asarray(b_full, dtype=complex)
    base = a.imag
    # Im((x + iy) b) = x Im b + y Re b
    u = b.imag
    v = b.real
    h = np.array([[u @ u, u @ v], [u @ v, v @ v]])
    g = -np.array([base @ u, base @ v])
    x, y = lstsq_2x2(h, g)
    r = base + x * u + y * v
    return complex(x, y), float(r @ r)


def min_imaginary_norm(line):
    return min_imaginary_norm_coords(line.a_full, line.b_full)


def certify_no_real_points(params, line, tol=None):
    """Combine the hypothesis check with the imaginary-norm oracle.

    Verdicts:

    * ``Certified``: all hypotheses hold, lam is real, and the oracle
      minimum is at least ``tol.r * (1 + |a|_inf^2)``.
    * ``Refuted``: the oracle minimum is at most a tenth of that
      threshold, i.e. the line has a real point.
    * ``Inconclusive``: anything else, with a note.
    """
    tols = tol or DEFAULT
    flags = check_hypotheses(params, line, tols)
    lam_real = abs(complex(line.lam).imag) <= tols.eq * max(1.0, abs(line.lam))
    t_star, value = min_imaginary_norm(line)
    threshold = tols.r * (1.0 + float(np.max(np.abs(line.a_full))) ** 2)
    notes = []
    hyps = all(flags) and lam_real
    if value <= threshold / 10:
        verdict = REFUTED
        if hyps:
            notes.append("contradiction: hypotheses hold but a real point was found")
            log.error("hypotheses hold but the oracle found a real point at t=%s", t_star)
    elif hyps and value >= threshold:
        verdict = CERTIFIED
    else:
        verdict = INCONCLUSIVE
        if not hyps and value >= threshold:
            notes.append("hypotheses fail but the oracle finds no real point; the hypotheses are only sufficient")
        elif hyps:
            notes.append("oracle minimum lies in the ambiguous band")
        if not lam_real:
            notes.append("lambda is not real")
    return RealnessCertificate(flags, bool(lam_real), value, t_star, threshold, verdict, tuple(notes))


def best_certified(params, lines, tol=None):
    """First line whose certificate is Certified, preferring the largest oracle margin."""
    best = None
    for line in lines:
        cert = certify_no_real_points(params, line, tol)
        if cert.verdict != CERTIFIED:
            continue
        margin = cert.oracle_min / cert.threshold
        if best is None or margin > best[2]:
            best = (line, cert, margin)
    return None if best is None else best[:2]
