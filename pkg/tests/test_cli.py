import json
import math

import pytest

from qtaylor import cli
from qtaylor.errors import ConfigError
from qtaylor.suites import (SuiteConfig, decay_rows, format_complex,
                            parse_complex, run_suites)


class TestComplexText:
    @pytest.mark.parametrize("z", [0.45, -0.3 + 0.2j, 1e-3 - 2.5j, 2.0 + 0.0j])
    def test_round_trip(self, z):
        assert parse_complex(format_complex(complex(z))) == complex(z)

    def test_i_suffix(self):
        assert parse_complex("0.5+0.3i") == 0.5 + 0.3j
        assert parse_complex("-0.2-0.1i") == -0.2 - 0.1j
        assert parse_complex("0.7") == 0.7 + 0j

    def test_rejects_garbage(self):
        with pytest.raises(ConfigError):
            parse_complex("not-a-number")


class TestRunner:
    def test_qcore_smoke(self):
        cfg = SuiteConfig(suites=("qcore",), seed=3, draws=6)
        report = run_suites(cfg)
        assert report.all_passed
        assert len(report.records) >= 4  # at least four check families

    def test_unknown_suite_rejected(self):
        with pytest.raises(ConfigError):
            run_suites(SuiteConfig(suites=("nope",)))

    def test_determinism(self):
        cfg = SuiteConfig(suites=("qcore", "hyper"), seed=11, draws=6)
        r1 = run_suites(cfg)
        r2 = run_suites(cfg)
        s1 = [json.dumps(r.to_dict(), sort_keys=True) for r in r1.records]
        s2 = [json.dumps(r.to_dict(), sort_keys=True) for r in r2.records]
        assert s1 == s2

    def test_negative_control_reports_failure(self):
        cfg = SuiteConfig(suites=("kernel",), seed=5, draws=4,
                          negative_controls=True)
        report = run_suites(cfg)
        sabotaged = [r for r in report.records
                     if r.check == "two-basis-identity-sabotaged"]
        assert len(sabotaged) == 1 and not sabotaged[0].passed
        assert not report.all_passed

    def test_summary_structure(self):
        cfg = SuiteConfig(suites=("qcore",), seed=3, draws=6)
        summary = run_suites(cfg).summary()
        assert summary["passed"] is True
        assert summary["suites"]["qcore"]["failures"] == 0

    def test_full_run_covers_every_operation(self):
        # every library operation surfaces in at least one check of "all"
        report = run_suites(SuiteConfig(seed=2, draws=6))
        seen = {(r.suite, r.check) for r in report.records}
        catalog = {
            ("qcore", "recurrence"), ("qcore", "infinite-shift"),
            ("qcore", "multi-factorwise"), ("qcore", "theta-symmetry"),
            ("qcore", "theta-grid-zero"), ("qcore", "weierstrass-addition"),
            ("hyper", "phi-z0"), ("hyper", "phi-terminating"),
            ("hyper", "phi-vs-long-sum"), ("hyper", "vwp-telescoping"),
            ("hyper", "vwp-expanded-roots"), ("hyper", "rogers-summation"),
            ("hyper", "jackson-summation"),
            ("operator", "dq-basics"), ("operator", "dcq-c0-reduction"),
            ("operator", "phi1-lowering"), ("operator", "iterated-lowering"),
            ("operator", "closed-form-vs-recursion"),
            ("operator", "delta-property"), ("operator", "branch-invariance"),
            ("operator", "grid-functional-weights"),
            ("taylor", "coefficient-recovery"), ("taylor", "first-reexpansion"),
            ("taylor", "linearity"), ("taylor", "remainder-consistency"),
            ("taylor", "flat-function"), ("taylor", "basis-boundedness"),
            ("kernel", "factorisation"), ("kernel", "involution"),
            ("kernel", "g-equals-involuted-f"), ("kernel", "f-ratio-geometric"),
            ("kernel", "taylor-crosscheck"), ("kernel", "two-basis-identity"),
            ("kernel", "negative-control-Hb"), ("kernel", "remainder-gap-ratio"),
            ("kernel", "lowering-laws"), ("kernel", "E-grid-zeros"),
            ("kernel", "pole-clearing-paths"), ("kernel", "truncated-flatness"),
            ("kernel", "vwp-rewriting"),
            ("laurent", "monomial"), ("laurent", "quadruple-vs-contour"),
            ("laurent", "E-negative-coefficients"),
            ("laurent", "structured-cancellation"),
            ("profiles", "annular-factorisation"), ("profiles", "profile-quotient"),
            ("profiles", "scalar-profile-sums"), ("profiles", "leading-profile"),
            ("profiles", "profile-kernel"), ("profiles", "kernel-coefficients"),
            ("profiles", "generating-residual"), ("profiles", "bridge-identity"),
            ("profiles", "contiguous-moments"),
            ("profiles", "coefficient-hierarchy"),
            ("profiles", "exponential-profile-limits"),
            ("profiles", "canonical-growth"),
            ("quadratic", "watson-type-expansion"),
            ("quadratic", "companion-expansion"),
            ("quadratic", "unit-leading-coefficients"),
            ("quadratic", "coefficient-decay"),
            ("quadratic", "taylor-identification"), ("quadratic", "tail-decay"),
            ("quadratic", "companion-vwp-form"), ("quadratic", "folding"),
        }
        assert catalog <= seen
        assert report.all_passed


class TestDecayCurves:
    def test_remainder_gap_ratio(self):
        cfg = SuiteConfig(q=0.4, seed=5)
        rows = decay_rows(cfg, "remainder_gap")
        fitted = rows[0][3]
        assert abs(fitted - 0.4) < 0.25 * 0.4

    def test_two_basis_tail_monotone(self):
        cfg = SuiteConfig(seed=5)
        rows = decay_rows(cfg, "two_basis_tail")
        tail = [r[1] for r in rows if r[0] > 10]
        assert all(a > b for a, b in zip(tail, tail[1:]))

    def test_quadratic_tail_and_profile_scaling(self):
        cfg = SuiteConfig(seed=5)
        for target in ("quadratic_tail", "profile_scaling"):
            rows = decay_rows(cfg, target)
            assert len(rows) > 3 and math.isfinite(rows[0][3])

    def test_unknown_target(self):
        with pytest.raises(ConfigError):
            decay_rows(SuiteConfig(), "nope")


class TestCommandLine:
    def test_exit_zero_on_pass(self, tmp_path, capsys):
        report = tmp_path / "report.jsonl"
        code = cli.main(["--suite", "qcore", "--seed", "3", "--draws", "6",
                         "--report", str(report)])
        assert code == 0
        lines = report.read_text().strip().splitlines()
        assert json.loads(lines[-1])["summary"]["passed"] is True
        assert "PASS" in capsys.readouterr().out

    def test_reports_identical_for_same_seed(self, tmp_path):
        paths = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
        for p in paths:
            cli.main(["--suite", "taylor", "--seed", "21", "--draws", "6",
                      "--report", str(p)])
        assert paths[0].read_text() == paths[1].read_text()

    def test_negative_controls_exit_one(self, tmp_path):
        code = cli.main(["--suite", "kernel", "--seed", "5", "--draws", "4",
                         "--negative-controls"])
        assert code == 1

    def test_config_file_and_overrides(self, tmp_path):
        cfgfile = tmp_path / "params.json"
        cfgfile.write_text(json.dumps({"q": "0.4", "seed": 9, "draws": 6,
                                       "suite": "qcore"}))
        code = cli.main(["--params", str(cfgfile)])
        assert code == 0

    def test_explicit_kernel_parameters(self, tmp_path):
        cfgfile = tmp_path / "params.json"
        cfgfile.write_text(json.dumps({
            "suite": "kernel", "q": "0.4", "seed": 9, "draws": 4,
            "explicit": [{"b": "0.55+0.2i", "c": "0.62-0.25i",
                          "d": "0.48+0.33i", "e": "0.71-0.12i"}]}))
        report = tmp_path / "r.jsonl"
        code = cli.main(["--params", str(cfgfile), "--report", str(report)])
        assert code == 0
        recs = [json.loads(l) for l in report.read_text().splitlines()[:-1]]
        two_basis = [r for r in recs if r["check"] == "two-basis-identity"]
        assert two_basis[0]["params"]["explicit"] is True
        assert two_basis[0]["params"]["draws"] == 1

    def test_empty_explicit_params_is_config_error(self, tmp_path):
        cfgfile = tmp_path / "params.json"
        cfgfile.write_text(json.dumps({"explicit": []}))
        assert cli.main(["--params", str(cfgfile)]) == 2

    def test_bad_q_is_config_error(self):
        assert cli.main(["--q", "1.5"]) == 2

    def test_env_override_max_terms(self, monkeypatch):
        # a 16-factor cap cannot reach the tail target: checks must fail
        monkeypatch.setenv("QTAYLOR_MAX_TERMS", "16")
        code = cli.main(["--suite", "qcore", "--seed", "3", "--draws", "4"])
        assert code == 1

    def test_emit_csv(self, tmp_path):
        out = tmp_path / "gap.csv"
        code = cli.main(["--emit-csv", f"remainder_gap:{out}", "--q", "0.4",
                         "--seed", "5"])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "order,residual,scale,fitted_ratio"
        assert len(lines) == 8

    def test_emit_csv_bad_target(self, tmp_path):
        assert cli.main(["--emit-csv", f"nope:{tmp_path / 'x.csv'}"]) == 2
