import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from staticdec import ConfigError, DefectReport, SuiteConfig, SuiteReport, run_suite
from staticdec.cli import emit_report, main, parse_report, strip_timing
from staticdec.config import build_field, build_space, field_from_exprs, scalar_from_expr
from staticdec.suites import DEFAULT_GRID, SUITES, CheckResult

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
EXPECTED_FAILURES = {"prop31_perturbed.json"}


def run_cli(capsysbinary, *argv):
    code = main(list(argv))
    out = capsysbinary.readouterr()
    return code, out.out, out.err


def write_config(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


class TestShippedConfigs:
    @pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.json")), ids=lambda p: p.stem)
    def test_exit_code(self, path, capsysbinary):
        suite = json.loads(path.read_text())["suite"]
        code, out, _ = run_cli(capsysbinary, suite, "--config", str(path))
        report = json.loads(out)
        expected = 1 if path.name in EXPECTED_FAILURES else 0
        assert code == expected, [c for c in report["checks"] if not c["pass"]]
        assert report["pass"] is (expected == 0)

    def test_perturbed_field_reports_every_projection_residual(self, capsysbinary):
        code, out, _ = run_cli(capsysbinary, "prop31", "--config", str(CONFIGS / "prop31_perturbed.json"))
        checks = {c["name"]: c for c in json.loads(out)["checks"]}
        assert code == 1
        assert "projection_killing_t" in checks
        assert checks["projection_killing_warp"]["sup_defect"] > 0.05


class TestExitCodes:
    def test_ode_suite_passes(self, tmp_path, capsysbinary):
        path = write_config(tmp_path, {"ode": {"k": 1.0, "eps": -1}})
        code, out, _ = run_cli(capsysbinary, "ode", "--config", path)
        assert code == 0 and json.loads(out)["pass"] is True

    def test_unknown_suite(self, capsysbinary):
        code, _, err = run_cli(capsysbinary, "lemma9")
        assert code == 2 and "unknown suite" in err.decode()

    def test_missing_file(self, tmp_path, capsysbinary):
        code, _, _ = run_cli(capsysbinary, "ode", "--config", str(tmp_path / "nope.json"))
        assert code == 2

    def test_invalid_json(self, tmp_path, capsysbinary):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run_cli(capsysbinary, "ode", "--config", str(path))[0] == 2

    @pytest.mark.parametrize(
        "data",
        [
            {"space": {"kind": "Sphere"}},
            {"space": {"kind": "H2eps", "eps": 0}},
            {"space": {"kind": "H2eps", "r": -1}},
            {"grid": {"samples": 0}},
            {"grid": {"bogus": 3}},
            {"tolerances": {"lemma1": -1}},
            {"tolerances": {"unknown": 1e-3}},
            {"seed": -4},
            {"space": {"kind": "StaticProduct", "base": {"kind": "flat", "dim": 1, "domain": [[-1, 1]]}, "f": "q+1"}},
            [],
        ],
    )
    def test_bad_config_exits_two(self, tmp_path, capsysbinary, data):
        path = write_config(tmp_path, data)
        assert run_cli(capsysbinary, "lemma1", "--config", path)[0] == 2

    def test_suite_without_space(self, capsysbinary):
        assert run_cli(capsysbinary, "lemma1")[0] == 2

    def test_missing_argument(self, capsysbinary):
        assert run_cli(capsysbinary)[0] == 2

    def test_module_entry_point(self, tmp_path):
        path = write_config(tmp_path, {"ode": {"k": 0.0, "eps": 1}})
        proc = subprocess.run(
            [sys.executable, "-m", "staticdec", "ode", "--config", path], capture_output=True, check=False
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["suite"] == "ode"


class TestOutput:
    def test_text_format_and_out_file(self, tmp_path, capsysbinary):
        path = write_config(tmp_path, {"ode": {"k": 1.0, "eps": 1}})
        out_path = tmp_path / "report.txt"
        code, out, _ = run_cli(capsysbinary, "ode", "--config", path, "--format", "text", "--out", str(out_path))
        assert code == 0 and out == b""
        text = out_path.read_text()
        assert text.startswith("suite ode: PASS")
        assert "[PASS]" in text

    def test_seed_flag_overrides_config(self, tmp_path, capsysbinary):
        path = write_config(tmp_path, {"seed": 3, "space": {"kind": "H2eps", "eps": -1}, "grid": {"samples": 5}})
        _, out, _ = run_cli(capsysbinary, "lemma1", "--config", path, "--seed", "9")
        assert json.loads(out)["config"]["seed"] == 9

    def test_same_seed_gives_identical_bytes(self, tmp_path, capsysbinary):
        path = write_config(tmp_path, {"space": {"kind": "H2eps", "eps": -1}, "grid": {"samples": 5}, "seed": 4})
        first = run_cli(capsysbinary, "lemma1", "--config", path)[1]
        second = run_cli(capsysbinary, "lemma1", "--config", path)[1]
        assert strip_timing(first) == strip_timing(second)

    def test_key_order_is_stable(self):
        rep = SuiteReport("ode", True, (CheckResult("a", 0.0, 1.0, True, (1.0,)),), {"suite": "ode"}, 3.0)
        d = json.loads(emit_report(rep))
        assert list(d) == ["suite", "pass", "checks", "config", "ms"]
        assert list(d["checks"][0]) == ["name", "sup_defect", "tolerance", "pass", "worst_point"]

    def test_seventeen_significant_digits(self):
        rep = SuiteReport("ode", True, (CheckResult("a", 0.1, 1e-4, True, (1 / 3,)),), {}, 0.0)
        raw = emit_report(rep).decode()
        assert "0.10000000000000001" in raw and "0.33333333333333331" in raw


class TestReportSemantics:
    def test_empty_check_list_passes(self):
        d = json.loads(emit_report(SuiteReport.from_reports("ode", [], {}, 0.0)))
        assert d["pass"] is True and d["checks"] == []

    def test_one_failing_check_fails_the_suite(self):
        reps = [
            DefectReport.from_samples("good", [[0.0]], [0.0], 1e-4),
            DefectReport.from_samples("bad", [[1.0]], [1.0], 1e-4),
        ]
        assert json.loads(emit_report(SuiteReport.from_reports("ode", reps, {}, 0.0)))["pass"] is False


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
check_results = st.builds(
    CheckResult,
    name=st.text(max_size=12),
    sup_defect=finite,
    tolerance=finite,
    passed=st.booleans(),
    worst_point=st.lists(finite, max_size=4).map(tuple),
)


@settings(max_examples=100, deadline=None)
@given(
    st.sampled_from(SUITES),
    st.lists(check_results, max_size=4),
    st.dictionaries(st.text(max_size=5), st.one_of(finite, st.integers(-10, 10), st.text(max_size=5)), max_size=3),
    finite,
)
def test_parse_inverts_emit(suite, checks, config, ms):
    rep = SuiteReport(suite, all(c.passed for c in checks), tuple(checks), config, ms)
    assert parse_report(emit_report(rep)) == rep


class TestConfigBuilding:
    def test_defaults_and_echo(self):
        cfg = SuiteConfig.from_dict({"suite": "ode", "ode": {"k": 1}})
        assert cfg.grid == DEFAULT_GRID and cfg.seed == 0
        d = cfg.to_dict()
        assert list(d)[:2] == ["suite", "seed"] and d["ode"] == {"k": 1}

    def test_scalar_expression_has_exact_derivatives(self):
        f = scalar_from_expr("cosh(x)*sin(y)", 2, ("x", "y"))
        p = np.array([0.3, 0.7])
        np.testing.assert_allclose(f.grad(p), [np.sinh(0.3) * np.sin(0.7), np.cosh(0.3) * np.cos(0.7)])
        assert f.hess(p)[0, 0] == pytest.approx(f(p))

    def test_unknown_symbol_is_rejected(self):
        with pytest.raises(ConfigError):
            scalar_from_expr("x + z", 2, ("x", "y"))

    def test_code_injection_is_rejected(self):
        with pytest.raises(ConfigError):
            scalar_from_expr("__import__('os').getcwd()", 1)

    def test_field_component_count(self):
        with pytest.raises(ConfigError):
            field_from_exprs(["1"], 2)

    def test_surface_coordinates_are_named(self):
        space = build_space({"kind": "H2eps", "eps": -1})
        V = build_field({"kind": "expr", "components": ["0", "s"]}, space)
        assert V([0.5, 0.0])[1] == 0.5
        W = build_field({"kind": "coordinate", "axis": "t"}, space)
        np.testing.assert_array_equal(W([0.0, 0.0]), [0.0, 1.0])

    def test_tod_domain_is_validated(self):
        with pytest.raises(ConfigError):
            build_space({"kind": "TodSurface", "k": [1, -1, 0], "domain": [[-1, 1], [-1, 1]]})

    def test_run_suite_reports_timing(self):
        rep = run_suite(SuiteConfig.from_dict({"suite": "ode", "ode": {"k": 0.0, "eps": 1}}))
        assert rep.passed and rep.ms >= 0 and not math.isnan(rep.ms)


class TestThreads:
    def test_thread_count_parsing(self, monkeypatch):
        from staticdec.report import thread_count

        monkeypatch.setenv("STATICDEC_THREADS", "4")
        assert thread_count() == 4
        monkeypatch.setenv("STATICDEC_THREADS", "zero")
        assert thread_count() == 1
        monkeypatch.setenv("STATICDEC_THREADS", "-3")
        assert thread_count() == 1

    def test_threaded_run_matches_serial_bytes(self, monkeypatch):
        data = json.loads((CONFIGS / "lemma1_h2.json").read_text())
        data["grid"] = {"samples": 12}
        serial = strip_timing(emit_report(run_suite(SuiteConfig.from_dict(data))))
        monkeypatch.setenv("STATICDEC_THREADS", "4")
        threaded = strip_timing(emit_report(run_suite(SuiteConfig.from_dict(data))))
        assert serial == threaded
