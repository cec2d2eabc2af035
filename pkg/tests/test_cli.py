import json

import pytest

from quadlines import report
from quadlines.cli import (
    EXIT_CONFIG,
    EXIT_NEGATIVE,
    EXIT_OK,
    build_parser,
    main,
    parse_config_text,
)
from quadlines.errors import ConfigError

GENERIC = "c1 = 0.3\nc2 = -1.1\nc3 = 2.2\nc4 = 1.7\nc5 = -0.6\nc6 = 0.9\nd1 = 5\nd2 = 1\nd3 = 0.7\n"


def inline(c, d):
    args = []
    for v in c:
        args += ["--c", str(v)]
    for v in d:
        args += ["--d", str(v)]
    return args


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "generic.cfg"
    path.write_text("# generic instance\n" + GENERIC + "seed = 7\ntol_r = 1e-9\n", encoding="utf-8")
    return path


def test_parse_config_text():
    values = parse_config_text(GENERIC + "seed = 3  # trailing comment\n")
    assert values["c2"] == -1.1 and values["seed"] == 3


@pytest.mark.parametrize("text", ["c1 = 1\nc1 = 2\n", "c7 = 1\n", "c1 1\n", "c1 = abc\n"])
def test_parse_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_check_generic_smooth(config_file, tmp_path, capsys):
    out = tmp_path / "check.json"
    code = main(["check", "--config", str(config_file), "--samples", "4", "--json", str(out)])
    assert code == EXIT_OK
    text = capsys.readouterr().out
    assert "real:" in text and "complex:" in text
    doc = report.loads(out.read_text())
    rep = report.from_dict(doc["result"])
    assert rep.real.smooth is True and rep.complex.smooth is True
    assert doc["seed"] == 7


def test_check_equal_c(capsys):
    code = main(["check", "--no-projective"] + inline([2] * 6, [5, 2, 1]))
    assert code == EXIT_NEGATIVE
    assert "witness" in capsys.readouterr().out


def test_check_condition_a():
    code = main(["check", "--no-projective", "--json", "-"] + inline([1, 2, 3, 4, 5, 6], [4, 2, 1]))
    assert code == EXIT_NEGATIVE


def test_check_inconclusive():
    # every b-quadratic vanishes: the real verdict is undecided
    assert main(["check", "--no-projective"] + inline([1] * 6, [2, 0.5, 2])) == 3


def test_line_and_certify(capsys, tmp_path):
    args = inline([1, 2, 3, 4, 5, 6], [5, 2, 1])
    assert main(["line"] + args) == EXIT_OK
    assert "residual" in capsys.readouterr().out
    out = tmp_path / "cert.json"
    assert main(["certify", "--json", str(out)] + args) == EXIT_OK
    pairs = report.from_dict(json.loads(out.read_text())["result"])
    assert any(cert.verdict == "Certified" for _, cert in pairs)


def test_line_no_line(capsys):
    assert main(["line"] + inline([2] * 6, [5, 2, 1])) == EXIT_NEGATIVE
    assert "rejections" in capsys.readouterr().out
    assert main(["certify"] + inline([2] * 6, [5, 2, 1])) == EXIT_NEGATIVE


@pytest.mark.parametrize("argv", [
    ["check", "--c", "1"],
    ["check", "--config", "/nonexistent/path.cfg"],
    ["check", "--c", "1", "--c", "2", "--c", "3", "--c", "4", "--c", "5", "--c", "6"],
    ["check", "--tol-b", "-1"] + inline([1] * 6, [5, 2, 1]),
    ["scan", "--budget", "0"],
    ["scan", "--range", "c9=0:1"],
    ["frobnicate"],
])
def test_config_errors_exit_64(argv):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(main(argv))
    assert info.value.code == EXIT_CONFIG


def test_global_flags_before_subcommand(config_file):
    args = build_parser().parse_args(["--config", str(config_file), "--seed", "3", "line"])
    assert args.config == str(config_file) and args.seed == 3


def test_tolerance_flags(config_file):
    from quadlines.cli import build_config

    args = build_parser().parse_args(["check", "--config", str(config_file), "--tol-mu", "1e-6"])
    cfg = build_config(args)
    assert cfg.tolerances.mu == 1e-6 and cfg.tolerances.r == 1e-9 and cfg.seed == 7


def test_scan_json_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["scan", "--budget", "10", "--seed", "5"]
    assert main(argv + ["--json", str(a)]) == EXIT_OK
    assert main(argv + ["--json", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_scan_budget_exhausted(tmp_path):
    out = tmp_path / "s.json"
    ranges = [arg for i in range(1, 7) for arg in ("--range", f"c{i}=2:2")]
    assert main(["scan", "--budget", "3", "--json", str(out)] + ranges) == EXIT_NEGATIVE
    stats = report.from_dict(json.loads(out.read_text())["result"])
    assert stats.evaluations == 3 and not stats.hits


def test_intersect(config_file, tmp_path, capsys):
    out = tmp_path / "i.json"
    code = main(["intersect", "--config", str(config_file), "--base-points", "4", "--starts", "40",
                 "--joint-starts", "40", "--json", str(out)])
    assert code in (0, 4)
    assert "HEURISTIC" in capsys.readouterr().out
    doc = json.loads(out.read_text())
    rep = report.from_dict(doc["result"])
    assert rep.coverage == 4 and rep.heuristic


def test_intersect_without_certified_line():
    assert main(["intersect"] + inline([2] * 6, [5, 2, 1])) == EXIT_NEGATIVE
