"""Command-line front end.

Subcommands::

    check      smoothness over R, C and chart-sampled P^6
    line       every constructed complex line with its residual table
    certify    realness certificate for each line
    scan       parameter search for certified instances
    intersect  heuristic scan of lines meeting the best certified line

Parameters come from a ``key = value`` config file (``--config``) holding
c1..c6, d1..d3 and optionally ``seed`` and ``tol_<name>``, or inline from
six ``--c`` and three ``--d`` flags. Inline values override the file.

Exit codes: 0 success, 2 negative result (not smooth, no line, nothing
certified, search budget exhausted, no certified line to scan), 3
inconclusive smoothness, 4 real point found on an intersecting line, 64
unusable configuration.
"""

import argparse
import logging
import sys
from dataclasses import dataclass

import numpy as np

from . import report
from .certify import CERTIFIED, certify_no_real_points
from .errors import BudgetExhausted, ConfigError, NoLineFound, QuadLinesError
from .line import construct_line, line_residuals
from .quadrics import QuadricParams
from .scan import DEFAULT_RANGES, INTEGRABILITY, STRATEGIES, SearchSpec, parameter_search, scan_intersecting_lines
from .smoothness import analyze_smoothness
from .tolerances import DEFAULT, Tolerances

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 2
EXIT_INCONCLUSIVE = 3
EXIT_REAL_POINT = 4
EXIT_CONFIG = 64

C_KEYS = tuple(f"c{i}" for i in range(1, 7))
D_KEYS = ("d1", "d2", "d3")


@dataclass(frozen=True)
class RunConfig:
    params: QuadricParams
    tolerances: Tolerances
    seed: int = 0
    output_path: str = None


def parse_config_text(text):
    """Parse ``key = value`` lines; ``#`` starts a comment.

    Returns
    -------
    dict
        Keys as written, values as float (``seed`` as int).
    """
    allowed = set(C_KEYS + D_KEYS) | {"seed"} | {f"tol_{n}" for n in Tolerances.names()}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in allowed:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            out[key] = int(value) if key == "seed" else float(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    return out


def build_config(args, need_params=True):
    """Merge the config file and inline flags into a :class:`RunConfig`."""
    values = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                values = parse_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    if args.c is not None:
        if len(args.c) != 6:
            raise ConfigError(f"need exactly six --c values, got {len(args.c)}")
        values.update(zip(C_KEYS, args.c))
    if args.d is not None:
        if len(args.d) != 3:
            raise ConfigError(f"need exactly three --d values, got {len(args.d)}")
        values.update(zip(D_KEYS, args.d))
    params = None
    if need_params:
        missing = [k for k in C_KEYS + D_KEYS if k not in values]
        if missing:
            raise ConfigError(f"missing parameters: {', '.join(missing)}")
        try:
            params = QuadricParams([values[k] for k in C_KEYS], [values[k] for k in D_KEYS])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    overrides = {k[4:]: v for k, v in values.items() if k.startswith("tol_")}
    for name in Tolerances.names():
        flag = getattr(args, f"tol_{name}", None)
        if flag is not None:
            overrides[name] = flag
    try:
        tols = DEFAULT.with_overrides(**overrides)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    seed = args.seed if args.seed is not None else values.get("seed", 0)
    if seed < 0:
        raise ConfigError("seed must be nonnegative")
    return RunConfig(params, tols, int(seed), args.json)


def _fmt(z):
    z = complex(z)
    return f"{z.real:+.10g}{z.imag:+.10g}j"


def _emit(config, kind, payload, **extra):
    if config.output_path is None:
        return
    text = report.dumps(report.document(kind, payload, **extra))
    if config.output_path == "-":
        sys.stdout.write(text)
    else:
        with open(config.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_check(config, projective=True, samples=40):
    rng = np.random.default_rng(config.seed)
    rep = analyze_smoothness(config.params, rng, config.tolerances, projective, samples)
    print(f"real:    smooth={rep.real.smooth} ({rep.real.reason})")
    print(f"complex: smooth={rep.complex.smooth} ({rep.complex.reason})")
    for w in rep.witnesses:
        print(f"  witness b={_fmt(w.b)} a={_fmt(w.a)}")
    for x in rep.degenerate_points:
        print("  degenerate point " + " ".join(f"{v:+.8g}" for v in x))
    for ch in rep.projective:
        ratio = "-" if ch.min_ratio is None else f"{ch.min_ratio:.3g}"
        print(f"  chart X{ch.chart}=1: {ch.verdict} ({ch.converged}/{ch.samples} samples, min ratio {ratio})")
    _emit(config, "check", rep, params=config.params, seed=config.seed)
    # an undecided real verdict always comes with a complex b-root, so
    # inconclusive has to take precedence to be reported at all
    if rep.inconclusive:
        return EXIT_INCONCLUSIVE, rep
    if rep.smooth_both:
        return EXIT_OK, rep
    return EXIT_NEGATIVE, rep


def _lines_or_report(config, kind):
    try:
        return construct_line(config.params, config.tolerances)
    except NoLineFound as exc:
        print(f"no line: {exc}; rejections by stage: {dict(exc.stages)}")
        _emit(config, kind, (), params=config.params, stages=exc.stages, error=str(exc))
    except QuadLinesError as exc:
        print(f"no line: {exc}")
        _emit(config, kind, (), params=config.params, error=str(exc))
    return None


def cmd_line(config):
    lines = _lines_or_report(config, "line")
    if lines is None:
        return EXIT_NEGATIVE, []
    for i, ln in enumerate(lines):
        print(f"line {i}: lambda={_fmt(ln.lam)} mu={_fmt(ln.mu)} branch={ln.branch} "
              f"residual={ln.max_residual(config.params):.3g}")
        print("  a = " + " ".join(_fmt(v) for v in ln.a_full))
        print("  b = " + " ".join(_fmt(v) for v in ln.b_full))
        table = np.abs(line_residuals(config.params, ln))
        for j, row in enumerate(table, 1):
            print(f"  f{j}: t^2 {row[0]:.2e}  t^1 {row[1]:.2e}  t^0 {row[2]:.2e}")
    _emit(config, "line", tuple(lines), params=config.params)
    return EXIT_OK, lines


def cmd_certify(config):
    lines = _lines_or_report(config, "certify")
    if lines is None:
        return EXIT_NEGATIVE, []
    certs = [certify_no_real_points(config.params, ln, config.tolerances) for ln in lines]
    for i, (ln, cert) in enumerate(zip(lines, certs)):
        print(f"line {i}: {cert.verdict} oracle_min={cert.oracle_min:.6g} threshold={cert.threshold:.3g} "
              f"hypotheses={cert.hypotheses} lambda_real={cert.lambda_real}")
        for note in cert.notes:
            print(f"  note: {note}")
    pairs = tuple(zip(lines, certs))
    _emit(config, "certify", pairs, params=config.params)
    ok = any(c.verdict == CERTIFIED for c in certs)
    return (EXIT_OK if ok else EXIT_NEGATIVE), pairs


def cmd_scan(config, spec):
    try:
        result = parameter_search(spec, config.tolerances)
    except BudgetExhausted as exc:
        print(f"{exc}; rejections by stage: {exc.stats.rejections}")
        _emit(config, "scan", exc.stats, spec=spec)
        return EXIT_NEGATIVE, exc.stats
    for hit in result.hits:
        p = hit.params
        print(f"hit {hit.index}: c={p.c} d={p.d} oracle_min={hit.certificate.oracle_min:.6g}")
    print(f"{len(result.hits)} hits in {result.evaluations} evaluations; rejections {result.rejections}")
    _emit(config, "scan", result, spec=spec)
    return EXIT_OK, result


def cmd_intersect(config, n_base_points=64, n_starts=200, joint_starts=400):
    lines = _lines_or_report(config, "intersect")
    if lines is None:
        return EXIT_NEGATIVE, None
    certified = [(ln, c) for ln in lines
                 if (c := certify_no_real_points(config.params, ln, config.tolerances)).verdict == CERTIFIED]
    if not certified:
        print("no certified line to scan")
        _emit(config, "intersect", None, params=config.params, error="no certified line")
        return EXIT_NEGATIVE, None
    line, cert = max(certified, key=lambda lc: lc[1].oracle_min / lc[1].threshold)
    rep = scan_intersecting_lines(config.params, line, n_base_points, n_starts, joint_starts,
                                  seed=config.seed, tol=config.tolerances)
    print("HEURISTIC: sampling evidence, not a proof")
    print(f"window |t| <= {rep.window_radius:.4g}, {rep.coverage} base points, "
          f"base direction recovered at {sum(s.base_recovered for s in rep.samples)}")
    print(f"intersecting lines via sampling: {len(rep.intersecting)}, via joint solve: {len(rep.joint)}")
    found = list(rep.intersecting) + list(rep.joint)
    if found:
        print(f"smallest oracle minimum among them: {min(m.oracle_min for m in found):.6g}")
    if rep.real_point_found:
        print("REAL POINT FOUND on an intersecting line")
    _emit(config, "intersect", rep, params=config.params, line=line, certificate=cert)
    return (EXIT_REAL_POINT if rep.real_point_found else EXIT_OK), rep


def _range_arg(text):
    try:
        name, bounds = text.split("=", 1)
        lo, hi = (float(v) for v in bounds.split(":", 1))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected name=lo:hi, got {text!r}") from exc
    if name not in DEFAULT_RANGES:
        raise argparse.ArgumentTypeError(f"unknown parameter {name!r}")
    return name, (lo, hi)


def _common(suppress):
    """Flags accepted both before and after the subcommand."""
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", default=default, help="key = value parameter file")
    p.add_argument("--c", action="append", type=float, default=default, help="c_k, repeat six times")
    p.add_argument("--d", action="append", type=float, default=default, help="d_j, repeat three times")
    p.add_argument("--seed", type=int, default=default)
    p.add_argument("--json", default=default, help="write the JSON report here ('-' for stdout)")
    p.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS if suppress else 0)
    for name in Tolerances.names():
        p.add_argument(f"--tol-{name}", type=float, default=default, dest=f"tol_{name}")
    return p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="quadlines", description=__doc__.split("\n\n")[0], parents=[_common(False)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    shared = [_common(True)]
    check = sub.add_parser("check", parents=shared, help="smoothness verdicts")
    check.add_argument("--no-projective", action="store_true", help="skip chart sampling in P^6")
    check.add_argument("--samples", type=int, default=40, help="samples per projective chart")
    sub.add_parser("line", parents=shared, help="construct the complex lines")
    sub.add_parser("certify", parents=shared, help="certify lines without real points")
    scan = sub.add_parser("scan", parents=shared, help="search parameter space")
    scan.add_argument("--strategy", choices=STRATEGIES, default="uniform-random")
    scan.add_argument("--budget", type=int, default=1000)
    scan.add_argument("--range", action="append", type=_range_arg, default=[], metavar="NAME=LO:HI")
    scan.add_argument("--integrability", choices=INTEGRABILITY, default="either")
    scan.add_argument("--allow-real-singular", action="store_true")
    scan.add_argument("--allow-complex-singular", action="store_true")
    scan.add_argument("--max-results", type=int, default=None)
    scan.add_argument("--workers", type=int, default=1)
    inter = sub.add_parser("intersect", parents=shared, help="scan lines meeting the certified line")
    inter.add_argument("--base-points", type=int, default=64)
    inter.add_argument("--starts", type=int, default=200)
    inter.add_argument("--joint-starts", type=int, default=400)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        config = build_config(args, need_params=args.command != "scan")
        if args.command == "scan":
            spec = SearchSpec(ranges=dict(args.range), strategy=args.strategy, budget=args.budget,
                              seed=config.seed, require_real_smooth=not args.allow_real_singular,
                              require_complex_smooth=not args.allow_complex_singular,
                              integrability=args.integrability, max_results=args.max_results,
                              workers=args.workers)
    except (ConfigError, ValueError) as exc:
        print(f"quadlines: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "check":
        code, _ = cmd_check(config, not args.no_projective, args.samples)
    elif args.command == "line":
        code, _ = cmd_line(config)
    elif args.command == "certify":
        code, _ = cmd_certify(config)
    elif args.command == "scan":
        code, _ = cmd_scan(config, spec)
    else:
        code, _ = cmd_intersect(config, args.base_points, args.starts, args.joint_starts)
    return code


if __name__ == "__main__":
    sys.exit(main())
