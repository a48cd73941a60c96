import dataclasses
import json

import numpy as np
import pytest

from src.grid.grid_state import TruncationLevel
from src.harness import experiment
from src.harness.experiment import ErrorReport, SchemeErrors, run_comparison
from src.harness.suites import run_suite
from src.integrator.stiff_integrator import IntegrationStatus
from src.main import main
from src.save_system import ResultWriter, plot_script
from src.settings import ExperimentConfig, InitialConditionSpec

OUTPUT_FILES = [
    "config.json", "errors.csv", "report.txt", "plot_contours.py",
    "fields_conventional.csv", "fields_first.csv", "fields_second.csv",
    "fields_eq3.csv", "fields_oracle.csv",
]


@pytest.fixture(scope="module")
def default_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("comparison")
    return out, run_comparison(ExperimentConfig(), out)


class TestDefaultComparison:
    """The default comparison of the four models against the reference."""

    def test_run_succeeds(self, default_run):
        _, report = default_run
        assert report.succeeded
        assert report.exit_status == 0
        assert report.oracle_resolved
        assert [s.scheme for s in report.schemes] == ["conventional", "first", "second", "eq3"]

    def test_corrections_beat_conventional(self, default_run):
        """The holistic corrections are overall more accurate."""
        _, report = default_run
        conventional = report.get(TruncationLevel.CONVENTIONAL)
        assert report.get(TruncationLevel.FIRST_CORRECTION).max_l2 < conventional.max_l2
        assert report.get(TruncationLevel.SECOND_CORRECTION).max_l2 < conventional.max_l2

    def test_corrections_beat_conventional_near_peak(self, default_run):
        _, report = default_run
        conventional = report.get(TruncationLevel.CONVENTIONAL)
        assert report.get(TruncationLevel.FIRST_CORRECTION).peak_linf < conventional.peak_linf
        assert report.get(TruncationLevel.SECOND_CORRECTION).peak_linf < conventional.peak_linf

    def test_errors_are_recorded_at_every_output(self, default_run):
        _, report = default_run
        for entry in report.schemes:
            assert len(entry.times) == 51
            assert entry.l2[0] == pytest.approx(0.0, abs=1e-12)
            assert all(e >= 0 for e in entry.l2 + entry.linf)

    def test_output_files(self, default_run):
        out, _ = default_run
        for name in OUTPUT_FILES:
            assert (out / name).exists(), name

    def test_field_file_layout(self, default_run):
        out, report = default_run
        lines = (out / "fields_first.csv").read_text(encoding="utf-8").split("\n")
        assert lines[0] == "t,x_0,x_1,x_2,x_3,x_4,x_5,x_6,x_7"
        assert len(lines) == 53  # header, 51 rows, trailing newline
        first_row = [float(v) for v in lines[1].split(",")]
        assert first_row[0] == 0.0
        assert np.allclose(first_row[1:], report.fields["first"].states[0].values, rtol=0, atol=0)

    def test_error_file_layout(self, default_run):
        out, report = default_run
        lines = (out / "errors.csv").read_text(encoding="utf-8").strip().split("\n")
        assert lines[0] == "t,scheme,L2,Linf"
        assert len(lines) == 1 + 4 * 51
        t, scheme, l2, linf = lines[-1].split(",")
        assert float(t) == 1.0
        assert float(l2) == report.get(scheme).l2[-1]

    def test_report_has_no_wall_time(self, default_run):
        out, report = default_run
        text = (out / "report.txt").read_text(encoding="utf-8")
        assert report.config_hash in text
        assert "result: success" in text
        assert report.wall_time > 0

    def test_plot_script_uses_contour_interval(self, default_run):
        out, _ = default_run
        text = (out / "plot_contours.py").read_text(encoding="utf-8")
        assert "CONTOUR_INTERVAL = 3.0" in text
        assert "fields_oracle.csv" in text
        compile(text, "plot_contours.py", "exec")

    def test_reproducible_files(self, default_run, tmp_path):
        """Identical configurations give byte-identical output."""
        out, _ = default_run
        run_comparison(ExperimentConfig(), tmp_path)
        for name in OUTPUT_FILES:
            assert (tmp_path / name).read_bytes() == (out / name).read_bytes(), name


class TestComparisonEdgeCases:
    """Degenerate and failing comparisons."""

    def test_zero_amplitude(self):
        cfg = ExperimentConfig(ic=InitialConditionSpec(amplitude=0.0), plot_script=False)
        report = run_comparison(cfg)
        assert report.succeeded
        for entry in report.schemes:
            assert entry.max_l2 == 0.0
            assert entry.max_linf == 0.0
            assert entry.peak_linf == 0.0

    def test_decoupled_elements_smoke(self):
        """gamma = 0 freezes the conventional model; the run still completes."""
        cfg = ExperimentConfig(gamma=0.0, schemes=["conventional"])
        a = run_comparison(cfg)
        b = run_comparison(cfg)
        assert a.succeeded
        frozen = a.fields["conventional"]
        assert np.array_equal(frozen.states[-1].values, frozen.states[0].values)
        assert a.get("conventional").l2 == b.get("conventional").l2

    def test_integration_failure_sets_exit_status(self, monkeypatch, tmp_path):
        real_integrate = experiment.integrate

        def starved(rhs_fn, u0, cfg):
            return real_integrate(rhs_fn, u0, dataclasses.replace(cfg, max_steps=1))

        monkeypatch.setattr(experiment, "integrate", starved)
        report = run_comparison(ExperimentConfig(schemes=["first"]), tmp_path)
        assert not report.succeeded
        assert report.exit_status == 1
        assert report.failed_schemes == ["first"]
        assert "FAILED (first)" in (tmp_path / "report.txt").read_text(encoding="utf-8")

    def test_report_rejects_duplicate_schemes(self):
        entry = SchemeErrors("first", [0.0], [0.0], [0.0], 0.0, IntegrationStatus.SUCCESS, True)
        with pytest.raises(ValueError):
            ErrorReport("hash", 1e-8, 1e-10, 128, IntegrationStatus.SUCCESS, True, 0.0, 0.0, 1,
                        schemes=[entry, entry])

    def test_errors_must_be_nonnegative(self):
        with pytest.raises(ValueError):
            SchemeErrors("first", [0.0], [-1.0], [0.0], 0.0, IntegrationStatus.SUCCESS, True)


class TestResultWriter:
    def test_csv_format(self, tmp_path):
        writer = ResultWriter(tmp_path / "nested")
        assert writer.write_csv("x.csv", ["a", "b"], [(0.1, "s"), (1e-20, 3)])
        assert (tmp_path / "nested" / "x.csv").read_bytes() == b"a,b\n0.1,s\n1e-20,3\n"

    def test_failed_write_returns_false(self, tmp_path):
        writer = ResultWriter(tmp_path)
        (tmp_path / "taken").mkdir()
        assert not writer.write_text("taken", "text")

    def test_output_path_is_a_file(self, tmp_path):
        """A file in place of the output directory makes every write report failure."""
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")
        writer = ResultWriter(blocker)
        assert not writer.write_text("report.txt", "text")
        assert not writer.write_csv("x.csv", ["a"], [(1,)])

    def test_plot_script_lists_fields(self):
        text = plot_script(["first", "oracle"], ExperimentConfig(contour_interval=1.5))
        assert "'fields_first.csv', 'fields_oracle.csv'" in text
        assert "CONTOUR_INTERVAL = 1.5" in text


class TestSuites:
    """Machine-readable suite summaries."""

    def test_properties_suite(self, tmp_path):
        assert run_suite("properties", tmp_path) == 0
        summary = json.loads((tmp_path / "suite_properties.json").read_text(encoding="utf-8"))
        assert summary["passed"] is True
        assert summary["failures"] == []
        names = [c["name"] for c in summary["checks"]]
        assert "first_matches_low_order" in names
        assert "printed_forms_detected" in names

    def test_consistency_suite(self, tmp_path):
        assert run_suite("consistency", tmp_path) == 0
        summary = json.loads((tmp_path / "suite_consistency.json").read_text(encoding="utf-8"))
        orders = {c["name"]: c["detail"].get("order") for c in summary["checks"]}
        assert 3.8 <= orders["order_first_linear-R"] <= 4.2
        for level in ("conventional", "first", "eq3"):
            assert 1.8 <= orders[f"amplitude_order_{level}_nonlinear"] <= 2.2

    def test_figure1_suite(self, tmp_path):
        assert run_suite("figure1", tmp_path) == 0
        summary = json.loads((tmp_path / "suite_figure1.json").read_text(encoding="utf-8"))
        assert summary["passed"] is True
        assert (tmp_path / "errors.csv").exists()

    def test_unknown_suite(self, tmp_path):
        with pytest.raises(ValueError):
            run_suite("benchmarks", tmp_path)


class TestCommandLine:
    """Exit codes and outputs of the command-line entry point."""

    def test_coefficients(self, capsys):
        assert main(["coefficients", "--max-order", "6"]) == 0
        out = capsys.readouterr().out
        assert out == "order,numerator,denominator\n0,1,1\n2,1,12\n4,-1,720\n6,1,30240\n"

    def test_coefficients_bad_order(self):
        assert main(["coefficients", "--max-order", "5"]) == 2

    def test_consistency_csv(self, tmp_path):
        out = tmp_path / "orders.csv"
        status = main(["consistency", "--schemes", "conventional", "first", "--m", "16,32,64",
                       "--probe", "linear-R", "--out", str(out)])
        assert status == 0
        lines = out.read_text(encoding="utf-8").strip().split("\n")
        assert lines[0] == "scheme,probe,m,residual,fitted_order,amplitude_order"
        assert len(lines) == 1 + 2 * 3
        assert 3.8 <= float(lines[-1].split(",")[4]) <= 4.2
        assert lines[-1].split(",")[5] == "nan"

    def test_consistency_amplitude_scan(self, tmp_path):
        out = tmp_path / "nonlinear.csv"
        status = main(["consistency", "--schemes", "conventional", "--m", "16,32,64",
                       "--probe", "nonlinear", "--amplitudes", "1,0.5", "--out", str(out)])
        assert status == 0
        lines = out.read_text(encoding="utf-8").strip().split("\n")
        for line in lines[1:]:
            assert float(line.split(",")[5]) == pytest.approx(2.0, abs=1e-6)

    def test_consistency_bad_amplitudes(self):
        assert main(["consistency", "--probe", "nonlinear", "--amplitudes", "1,-1"]) == 2

    def test_compare_with_overrides(self, tmp_path):
        status = main(["compare", "--scheme", "first", "--t-end", "0.2", "--out", str(tmp_path)])
        assert status == 0
        config = json.loads((tmp_path / "config.json").read_text(encoding="utf-8"))
        assert config["schemes"] == ["first"]
        assert config["t_end"] == 0.2

    def test_compare_from_config_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        ExperimentConfig(t_end=0.1, schemes=["eq3"]).save(path)
        assert main(["compare", "--config", str(path), "--out", str(tmp_path / "run")]) == 0
        assert (tmp_path / "run" / "fields_eq3.csv").exists()

    def test_configuration_errors(self, tmp_path):
        assert main(["compare", "--config", str(tmp_path / "missing.json")]) == 2
        assert main(["compare", "--m", "3", "--out", str(tmp_path)]) == 2
        assert main(["compare", "--m", "64", "--out", str(tmp_path)]) == 2

    def test_compare_into_a_file_path(self, tmp_path):
        blocker = tmp_path / "results"
        blocker.write_text("", encoding="utf-8")
        status = main(["compare", "--scheme", "first", "--t-end", "0.1", "--out", str(blocker)])
        assert status == 1

    def test_invalid_choice_exits_with_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["compare", "--scheme", "third"])
        assert excinfo.value.code == 2
