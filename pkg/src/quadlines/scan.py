"""Parameter search and the heuristic scan for lines meeting a constructed line.

Both parts are experiments rather than decision procedures. The search
looks for (c, d) where every structural condition holds and the line is
certified. The scan samples points of a certified line, finds the
directions of all lines of the level set through each point, and tests
every line found for real points with the imaginary-norm oracle. A clean
scan is evidence, not a proof.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .certify import CERTIFIED, INCONCLUSIVE, best_certified, certify_no_real_points, min_imaginary_norm_coords
from .errors import BudgetExhausted, QuadLinesError
from .line import construct_line
from .quadrics import QuadricParams, evaluate, gram_matrices, polarize, swap_halves
from .smoothness import complex_smoothness, real_smoothness
from .tolerances import DEFAULT

log = logging.getLogger(__name__)

PARAM_NAMES = ("c1", "c2", "c3", "c4", "c5", "c6", "d1", "d2", "d3")
DEFAULT_RANGES = {
    "c1": (-3.0, 3.0), "c2": (-3.0, 3.0), "c3": (-3.0, 3.0),
    "c4": (-3.0, 3.0), "c5": (-3.0, 3.0), "c6": (-3.0, 3.0),
    "d1": (0.5, 6.0), "d2": (-2.0, 2.0), "d3": (-6.0, 6.0),
}
STRATEGIES = ("uniform-random", "grid", "coordinate-refine")
INTEGRABILITY = ("either", "integrable", "non-integrable")
STAGES = ("integrability", "real_smooth", "complex_smooth", "line", "certify")


def integrability_indicator(c):
    """c1c4(c2+c5-c3-c6) + c2c5(c3+c6-c1-c4) + c3c6(c1+c4-c2-c5).

    Zero on the locus where the underlying Hamiltonian flow is Liouville
    integrable.
    """
    c1, c2, c3, c4, c5, c6 = c
    return (c1 * c4 * (c2 + c5 - c3 - c6)
            + c2 * c5 * (c3 + c6 - c1 - c4)
            + c3 * c6 * (c1 + c4 - c2 - c5))


def indicator_scale(c):
    return max(1.0, max(abs(v) for v in c)) ** 3


def solve_integrable_c6(c5_prefix):
    """c6 that puts (c1..c5, c6) on the integrable locus; None if undetermined.

    The indicator is affine in c6: I = I(c6=0) + c6 * slope.
    """
    c1, c2, c3, c4, c5 = c5_prefix
    base = integrability_indicator((c1, c2, c3, c4, c5, 0.0))
    slope = integrability_indicator((c1, c2, c3, c4, c5, 1.0)) - base
    if abs(slope) <= 1e-12 * indicator_scale(c5_prefix):
        return None
    return -base / slope


@dataclass(frozen=True)
class SearchSpec:
    ranges: dict = field(default_factory=lambda: dict(DEFAULT_RANGES))
    strategy: str = "uniform-random"
    budget: int = 1000
    seed: int = 0
    require_real_smooth: bool = True
    require_complex_smooth: bool = True
    integrability: str = "either"
    max_results: int = None
    workers: int = 1

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.integrability not in INTEGRABILITY:
            raise ValueError(f"unknown integrability filter {self.integrability!r}")
        merged = dict(DEFAULT_RANGES)
        merged.update({k: (float(lo), float(hi)) for k, (lo, hi) in self.ranges.items()})
        for name, (lo, hi) in merged.items():
            if name not in DEFAULT_RANGES:
                raise ValueError(f"unknown parameter {name!r}")
            if not lo <= hi:
                raise ValueError(f"empty range for {name}: [{lo}, {hi}]")
        object.__setattr__(self, "ranges", merged)

    def bounds(self):
        return np.array([self.ranges[n] for n in PARAM_NAMES])


@dataclass(frozen=True)
class Hit:
    index: int
    params: QuadricParams
    line: object
    certificate: object


@dataclass(frozen=True)
class SearchResult:
    hits: tuple
    evaluations: int
    rejections: dict


def _draw(bounds, rng):
    lo, hi = bounds[:, 0], bounds[:, 1]
    return lo + (hi - lo) * rng.random(len(lo))


def _to_params(values, integrability):
    values = np.array(values, dtype=float)
    if integrability == "integrable":
        c6 = solve_integrable_c6(values[:5])
        if c6 is None:
            return None
        values[5] = c6
    return QuadricParams(values[:6], values[6:])


def evaluate_candidate(params, spec, tol=None):
    """Run every filter; returns (failed stage or None, line, certificate)."""
    tols = tol or DEFAULT
    if params is None:
        return "integrability", None, None
    ind = integrability_indicator(params.c)
    if spec.integrability == "integrable" and abs(ind) > 1e-9 * indicator_scale(params.c):
        return "integrability", None, None
    if spec.integrability == "non-integrable" and abs(ind) < 1e-6 * indicator_scale(params.c):
        return "integrability", None, None
    if spec.require_real_smooth and real_smoothness(params, tols.b)[0].smooth is not True:
        return "real_smooth", None, None
    if spec.require_complex_smooth and complex_smoothness(params, tols.b)[0].smooth is not True:
        return "complex_smooth", None, None
    try:
        lines = construct_line(params, tols, check_smooth=False)
    except QuadLinesError:
        return "line", None, None
    best = best_certified(params, lines, tols)
    if best is None:
        return "certify", None, None
    return None, best[0], best[1]


def _grid_values(spec, index):
    """Cell midpoints of an n^9 grid, visited with a coprime stride.

    Lexicographic order would vary only the last coordinates within a
    small budget; the stride (close to the golden section of the node
    count) spreads consecutive visits over all axes and still reaches
    every node exactly once.
    """
    bounds = spec.bounds()
    n = max(2, math.ceil(spec.budget ** (1 / len(PARAM_NAMES))))
    total = n ** len(PARAM_NAMES)
    stride = int(total * 0.6180339887)
    while math.gcd(stride, total) != 1:
        stride -= 1
    digits = np.unravel_index((index * stride) % total, (n,) * len(PARAM_NAMES))
    frac = (np.array(digits) + 0.5) / n
    return bounds[:, 0] + (bounds[:, 1] - bounds[:, 0]) * frac


def _candidate_values(spec, index):
    if spec.strategy == "grid":
        return _grid_values(spec, index)
    return _draw(spec.bounds(), np.random.default_rng([spec.seed, index]))


def _run_index(args):
    spec, index, tol = args
    params = _to_params(_candidate_values(spec, index), spec.integrability)
    return (index, params) + evaluate_candidate(params, spec, tol)


def _summarize(outcomes, spec):
    hits = []
    rejections = {s: 0 for s in STAGES}
    count = 0
    for index, params, stage, line, cert in outcomes:
        count += 1
        if stage is None:
            hits.append(Hit(index, params, line, cert))
            if spec.max_results is not None and len(hits) >= spec.max_results:
                break
        else:
            rejections[stage] += 1
    return hits, count, rejections


def _independent_outcomes(spec, tol):
    if spec.workers <= 1:
        for index in range(spec.budget):
            yield _run_index((spec, index, tol))
        return
    chunk = 8 * spec.workers
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        found = 0
        for start in range(0, spec.budget, chunk):
            batch = [(spec, i, tol) for i in range(start, min(start + chunk, spec.budget))]
            for outcome in pool.map(_run_index, batch):
                found += outcome[2] is None
                yield outcome
            if spec.max_results is not None and found >= spec.max_results:
                return


def _refine_outcomes(spec, tol):
    bounds = spec.bounds()
    width = bounds[:, 1] - bounds[:, 0]
    anchor = None
    for index in range(spec.budget):
        rng = np.random.default_rng([spec.seed, index])
        if anchor is None:
            values = _draw(bounds, rng)
        else:
            values = np.array(anchor[0])
            k = index % len(PARAM_NAMES)
            step = 0.1 / (1 + anchor[2] // len(PARAM_NAMES))
            values[k] = np.clip(values[k] + step * width[k] * rng.normal(), bounds[k, 0], bounds[k, 1])
            anchor = (anchor[0], anchor[1], anchor[2] + 1)
        params = _to_params(values, spec.integrability)
        outcome = (index, params) + evaluate_candidate(params, spec, tol)
        if outcome[2] is None:
            margin = outcome[4].oracle_min / outcome[4].threshold
            if anchor is None or margin > anchor[1]:
                anchor = (np.concatenate([params.c, params.d]), margin, 0)
        yield outcome


def parameter_search(spec, tol=None):
    """Search (c, d) space for instances with a certified line.

    Every candidate draws from its own stream ``default_rng([seed, index])``
    (or a fixed grid node), so results depend only on (spec, seed) and
    parallel runs reproduce the sequential hits. Coordinate refinement
    perturbs one coordinate at a time around the hit with the largest
    certificate margin and always runs sequentially.

    Raises
    ------
    BudgetExhausted
        If no candidate passes; ``exc.stats`` holds the rejection counts.
    """
    if spec.strategy == "coordinate-refine":
        outcomes = _refine_outcomes(spec, tol)
    else:
        outcomes = _independent_outcomes(spec, tol)
    hits, count, rejections = _summarize(outcomes, spec)
    result = SearchResult(tuple(hits), count, rejections)
    if not hits:
        raise BudgetExhausted(f"no instance found in {count} evaluations", result)
    log.info("search: %d hits in %d evaluations, rejections %s", len(hits), count, rejections)
    return result


# --- lines through a point -------------------------------------------------


@dataclass(frozen=True)
class Direction:
    v: tuple
    residual: float
    is_base: bool = False
    seeded: bool = False


@dataclass(frozen=True)
class IntersectingLine:
    t: complex
    direction: tuple
    residual: float
    oracle_min: float
    oracle_argmin: complex
    real_point: bool


@dataclass(frozen=True)
class BasePoint:
    t: complex
    directions: tuple
    base_recovered: bool
    base_oracle_min: float
    base_verdict: str


@dataclass(frozen=True)
class IntersectionReport:
    window_radius: float
    samples: tuple
    intersecting: tuple
    joint: tuple
    coverage: int
    real_point_found: bool
    heuristic: bool = True


def _canonical(v):
    """Projective representative with the largest-magnitude entry equal to 1."""
    v = np.asarray(v, dtype=complex)
    return v / v[int(np.argmax(np.abs(v)))]


def _tangent_basis(params, p):
    lin = np.stack([p, 0.5 * swap_halves(p), params.c_array * p])
    _, s, vh = np.linalg.svd(lin)
    rank = int(np.sum(s > 1e-12 * max(s[0], 1.0)))
    return vh[rank:].conj().T


def _membership(params, p, v):
    return np.concatenate([evaluate(params, v), polarize(params, p, v)])


def _membership_scale(params, p):
    return max(1.0, max(abs(x) for x in params.c)) * max(1.0, float(np.max(np.abs(p))))


def _batched_lm(residual_fn, jac_fn, y, iters=80, tol=1e-13):
    """Levenberg-Marquardt on a batch of complex starts; rows are independent."""
    damping = np.full(y.shape[0], 1e-3)
    r = residual_fn(y)
    cost = np.sum(np.abs(r) ** 2, axis=1)
    eye = np.eye(y.shape[1])
    for _ in range(iters):
        active = cost > tol ** 2
        if not np.any(active):
            break
        j = jac_fn(y)
        jh = np.conj(np.swapaxes(j, 1, 2))
        a = jh @ j + damping[:, None, None] * eye
        g = (jh @ r[:, :, None])[:, :, 0]
        step = np.linalg.solve(a, -g[:, :, None])[:, :, 0]
        trial = y + step
        r_trial = residual_fn(trial)
        cost_trial = np.sum(np.abs(r_trial) ** 2, axis=1)
        good = active & np.isfinite(cost_trial) & (cost_trial < cost)
        y = np.where(good[:, None], trial, y)
        r = np.where(good[:, None], r_trial, r)
        cost = np.where(good, cost_trial, cost)
        damping = np.where(good, damping / 3, np.minimum(damping * 4, 1e12))
    return y


def directions_through_point(params, p, n_starts=200, seed=0, known=(), tol=None):
    """Directions v of lines {p + s v} contained in the complex level set.

    v must satisfy f_j(v) = 0 and B_j(p, v) = 0 for j = 1, 2, 3. The
    linear conditions confine v to a 3-dimensional subspace; in a random
    affine chart of that subspace the three quadratic conditions are solved
    by multistart Levenberg-Marquardt. Directions are normalized so that
    the largest entry equals 1 and deduplicated at 1e-6.

    Directions listed in ``known`` are labelled ``is_base``; one that the
    multistart missed is polished from the known value and added with
    ``seeded=True``.
    """
    tols = tol or DEFAULT
    p = np.asarray(p, dtype=complex)
    basis = _tangent_basis(params, p)
    if basis.shape[1] == 0:
        return []
    grams = np.stack([basis.T @ g @ basis for g in gram_matrices(params)])
    rng = np.random.default_rng(seed)
    h = rng.normal(size=basis.shape[1]) + 1j * rng.normal(size=basis.shape[1])
    starts = rng.normal(size=(n_starts, basis.shape[1])) + 1j * rng.normal(size=(n_starts, basis.shape[1]))
    starts = starts / (starts @ h)[:, None]

    def res(y):
        quad = np.einsum("ni,jik,nk->nj", y, grams, y)
        return np.concatenate([quad, (y @ h - 1)[:, None]], axis=1)

    def jac(y):
        quad = 2 * np.einsum("jik,nk->nji", grams, y)
        return np.concatenate([quad, np.broadcast_to(h, (y.shape[0], 1, h.size))], axis=1)

    ys = _batched_lm(res, jac, starts) if n_starts else np.zeros((0, basis.shape[1]))
    bound = tols.membership * _membership_scale(params, p)
    known_c = [_canonical(k) for k in known]
    found = []
    for y in ys:
        v = _canonical(basis @ y)
        if not np.all(np.isfinite(v)):
            continue
        resid = float(np.max(np.abs(_membership(params, p, v))))
        if resid > bound:
            continue
        if any(np.max(np.abs(v - np.array(d.v))) <= 1e-6 for d in found):
            continue
        is_base = any(np.max(np.abs(v - k)) <= 1e-6 for k in known_c)
        found.append(Direction(tuple(complex(x) for x in v), resid, is_base))
    for k in known_c:
        if any(np.max(np.abs(np.array(d.v) - k)) <= 1e-6 for d in found):
            continue
        y0, *_ = np.linalg.lstsq(basis, k, rcond=None)
        y = _batched_lm(res, jac, (y0 / (y0 @ h))[None, :])[0]
        v = _canonical(basis @ y)
        resid = float(np.max(np.abs(_membership(params, p, v))))
        if resid <= bound:
            found.append(Direction(tuple(complex(x) for x in v), resid, True, True))
    return found


def meeting_lines(params, line, n_starts=400, seed=0, tol=None, max_abs_t=None):
    """Lines of the level set meeting ``line`` away from its own direction.

    Solves for the meeting parameter t and the direction v together: the
    seven equations B_j(a + t b, v) = 0, f_j(v) = 0 and h.v = 1 (random
    chart) in seven unknowns, by multistart Levenberg-Marquardt.
    Solutions parallel to the line itself are discarded, as are those with
    ``|t| > max_abs_t``: iterates drifting to infinity satisfy the scaled
    residual test without describing a finite meeting point.
    """
    tols = tol or DEFAULT
    a_full = line.a_full
    b_full = line.b_full
    c = params.c_array
    rng = np.random.default_rng(seed)
    h = rng.normal(size=6) + 1j * rng.normal(size=6)
    z = rng.normal(size=(n_starts, 7)) + 1j * rng.normal(size=(n_starts, 7))
    z[:, 1:] /= (z[:, 1:] @ h)[:, None]

    def res(z):
        t, v = z[:, :1], z[:, 1:]
        p = a_full + t * b_full
        return np.concatenate([polarize(params, p, v), evaluate(params, v), (v @ h - 1)[:, None]], axis=1)

    def jac(z):
        t, v = z[:, :1], z[:, 1:]
        p = a_full + t * b_full
        n = z.shape[0]
        out = np.zeros((n, 7, 7), dtype=complex)
        out[:, :3, 0] = polarize(params, np.broadcast_to(b_full, v.shape), v)
        out[:, 0, 1:] = p
        out[:, 1, 1:] = 0.5 * swap_halves(p)
        out[:, 2, 1:] = c * p
        out[:, 3, 1:] = 2 * v
        out[:, 4, 1:] = swap_halves(v)
        out[:, 5, 1:] = 2 * c * v
        out[:, 6, 1:] = h
        return out

    zs = _batched_lm(res, jac, z, iters=120)
    base = _canonical(b_full)
    out = []
    for t, *v in zs:
        v = _canonical(np.array(v))
        if not np.all(np.isfinite(v)) or np.max(np.abs(v - base)) <= 1e-6:
            continue
        if max_abs_t is not None and abs(t) > max_abs_t:
            continue
        p = a_full + t * b_full
        resid = float(np.max(np.abs(_membership(params, p, v))))
        if resid > tols.membership * _membership_scale(params, p):
            continue
        if any(abs(t - m.t) <= 1e-4 * max(1.0, abs(t)) and np.max(np.abs(v - np.array(m.direction))) <= 1e-4
               for m in out):
            continue
        out.append(_intersecting(p, complex(t), v, resid, tols))
    return out


def _intersecting(p, t, v, resid, tols):
    t_star, value = min_imaginary_norm_coords(p, v)
    threshold = tols.r * (1.0 + float(np.max(np.abs(p))) ** 2)
    return IntersectingLine(t, tuple(complex(x) for x in v), resid, value, t_star, value <= threshold / 10)


def sample_window(line, n, radius=None):
    """n low-discrepancy points in the disk |t| <= 4 (1 + |a|_inf / |b|_inf)."""
    if radius is None:
        radius = 4.0 * (1.0 + float(np.max(np.abs(line.a_full)) / np.max(np.abs(line.b_full))))
    if n == 0:
        return radius, []
    u = qmc.Halton(d=2, scramble=False).random(n)
    r = radius * np.sqrt(u[:, 0])
    return radius, [complex(x) for x in r * np.exp(2j * np.pi * u[:, 1])]


def scan_intersecting_lines(params, line, n_base_points=64, n_starts=200, joint_starts=400, seed=0, tol=None):
    """HEURISTIC: look for real points on lines of the level set meeting ``line``.

    At each sampled point p = line(t) the directions through p are found
    with :func:`directions_through_point`; every direction other than the
    line's own is tested with the imaginary-norm oracle. A joint solve over
    (t, v) (:func:`meeting_lines`) complements the sampling, since lines
    meeting ``line`` do so only at isolated values of t.
    """
    tols = tol or DEFAULT
    radius, ts = sample_window(line, n_base_points)
    b_full = line.b_full
    cert = certify_no_real_points(params, line, tols)
    samples = []
    intersecting = []
    for k, t in enumerate(ts):
        p = line.point(t)
        dirs = directions_through_point(params, p, n_starts, seed=[seed, k], known=[b_full], tol=tols)
        # the minimum over the line does not depend on the base point
        base_min = min_imaginary_norm_coords(p, b_full)[1]
        same = abs(base_min - cert.oracle_min) <= 1e-6 * max(1.0, cert.oracle_min)
        verdict = CERTIFIED if same and cert.verdict == CERTIFIED else INCONCLUSIVE
        samples.append(BasePoint(t, tuple(dirs), any(d.is_base for d in dirs), base_min, verdict))
        for d in dirs:
            if not d.is_base:
                intersecting.append(_intersecting(p, t, np.array(d.v), d.residual, tols))
    joint = []
    if joint_starts:
        joint = meeting_lines(params, line, joint_starts, seed=seed, tol=tols, max_abs_t=10 * radius)
    real = any(m.real_point for m in intersecting) or any(m.real_point for m in joint)
    if real:
        log.warning("an intersecting line with a real point was found")
    return IntersectionReport(radius, tuple(samples), tuple(intersecting), tuple(joint), len(ts), real)
