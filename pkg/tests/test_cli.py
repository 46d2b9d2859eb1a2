"""End-to-end tests of the command-line surface and its exit codes."""

import json
import re

import numpy as np
import pytest

from qbalance import core
from qbalance.cli import main
from qbalance.datasets import REFERENCE_ASSIGNMENTS


def scatter_point_counts(svg: str) -> list[int]:
    groups = re.findall(r'<g id="(PathCollection_\d+)">(.*?)</g>', svg, re.S)
    return [body.count("<use") for _, body in groups]


class TestExitCodes:
    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "gen" in capsys.readouterr().out

    def test_missing_command_is_a_usage_error(self, capsys):
        assert main([]) == 1

    def test_unknown_method_is_a_usage_error(self, tmp_path, capsys):
        code = main(["run", "--method", "annealer", "--out", str(tmp_path / "r.json")])
        assert code == 1

    def test_bad_phi_is_a_usage_error(self, tmp_path, capsys):
        code = main(["run", "--method", "random", "--phi", "1.5",
                     "--out", str(tmp_path / "r.json")])
        assert code == 1
        assert "phi" in capsys.readouterr().err

    def test_missing_input_file_is_a_usage_error(self, tmp_path, capsys):
        code = main(["run", "--method", "random", "--input",
                     str(tmp_path / "nope.csv"), "--out", str(tmp_path / "r.json")])
        assert code == 1


class TestGen:
    def test_writes_deterministic_csv(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert main(["gen", "--m", "8", "--seed", "3", "--out", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()
        x = core.load_covariates_csv(a)
        assert (x.m, x.n) == (8, 2)

    def test_zero_sigma_repeats_the_component_means(self, tmp_path):
        out = tmp_path / "exact.csv"
        assert main(["gen", "--m", "4", "--mean", "-3,3", "--mean", "3,3",
                     "--sigma", "0", "--seed", "0", "--out", str(out)]) == 0
        x = core.load_covariates_csv(out)
        np.testing.assert_array_equal(
            x.x.T, [[-3, 3], [-3, 3], [3, 3], [3, 3]])

    def test_cluster_means_land_near_the_targets(self, tmp_path):
        out = tmp_path / "sampled.csv"
        assert main(["gen", "--m", "12", "--seed", "1", "--out", str(out)]) == 0
        x = core.load_covariates_csv(out)
        # 4-sigma band for a 6-point cluster mean at sigma = 1
        band = 1.3 + 1e-12
        np.testing.assert_allclose(x.x.T[:6].mean(axis=0), [-3, 3], atol=band)
        np.testing.assert_allclose(x.x.T[6:].mean(axis=0), [3, 3], atol=band)

    def test_indivisible_m_is_a_usage_error(self, tmp_path, capsys):
        assert main(["gen", "--m", "5", "--out", str(tmp_path / "x.csv")]) == 1

    def test_bad_mean_literal_is_a_usage_error(self, tmp_path, capsys):
        assert main(["gen", "--mean", "3;4", "--out", str(tmp_path / "x.csv")]) == 1


class TestRun:
    def test_exhaustive_on_the_bundled_dataset(self, tmp_path, capsys):
        out = tmp_path / "best.json"
        assert main(["run", "--method", "exhaustive", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["method"] == "exhaustive"
        assert doc["imbalance"] == pytest.approx(2.4496, abs=5e-4)
        reference = np.asarray(REFERENCE_ASSIGNMENTS["optimal"])
        omega = np.asarray(doc["omega"])
        assert (np.array_equal(omega, reference)
                or np.array_equal(omega, -reference))
        assert "2.4496" in capsys.readouterr().out

    def test_equal_split_halves_the_groups(self, tmp_path):
        out = tmp_path / "split.json"
        assert main(["run", "--method", "exhaustive", "--equal-split",
                     "--out", str(out)]) == 0
        omega = np.asarray(json.loads(out.read_text())["omega"])
        assert int((omega > 0).sum()) == 6

    def test_equal_split_outside_exhaustive_is_a_usage_error(self, tmp_path, capsys):
        assert main(["run", "--method", "random", "--equal-split",
                     "--out", str(tmp_path / "r.json")]) == 1

    def test_random_is_seed_reproducible(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            assert main(["run", "--method", "random", "--seed", "11",
                         "--out", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_gsw_run_writes_valid_signs(self, tmp_path):
        out = tmp_path / "walk.json"
        assert main(["run", "--method", "gsw", "--seed", "2",
                     "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert all(v in (-1, 1) for v in doc["omega"])
        assert doc["expectation"] is None

    def test_imbalance_round_trips_through_evaluate(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert main(["run", "--method", "random", "--seed", "5",
                     "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        capsys.readouterr()
        omega_text = ",".join(str(v) for v in doc["omega"])
        assert main(["evaluate", "--omega", omega_text]) == 0
        printed = capsys.readouterr().out
        assert f"imbalance         = {doc['imbalance']:.4f}" in printed

    def test_small_vqe_run_through_the_cli(self, tmp_path):
        data = tmp_path / "small.csv"
        assert main(["gen", "--m", "4", "--seed", "9", "--out", str(data)]) == 0
        out = tmp_path / "vqe.json"
        assert main(["run", "--method", "vqe", "--input", str(data),
                     "--reps", "1", "--shots", "1024", "--seed", "3",
                     "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["ansatz"] == {"kind": "two_local", "reps": 1, "parameters": 16}
        x = core.load_covariates_csv(data)
        design = core.build_augmented(x, doc["phi"])
        assert doc["imbalance"] == pytest.approx(
            core.assignment_imbalance(design, np.asarray(doc["omega"], float)),
            abs=1e-12)

    def test_shot_based_optimization_through_the_cli(self, tmp_path):
        data = tmp_path / "small.csv"
        assert main(["gen", "--m", "4", "--seed", "9", "--out", str(data)]) == 0
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            assert main(["run", "--method", "qaoa", "--input", str(data),
                         "--p", "1", "--shots", "512", "--seed", "6",
                         "--shots-during-opt", "--out", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert json.loads(a.read_text())["expectation"] is not None


class TestEvaluate:
    def test_prints_the_three_quantities(self, capsys):
        omega = ",".join(str(v) for v in REFERENCE_ASSIGNMENTS["optimal"])
        assert main(["evaluate", "--omega", omega]) == 0
        out = capsys.readouterr().out
        assert "imbalance         = 2.4496" in out
        assert "floor sqrt(phi*m) = 2.4495" in out
        assert "discrepancy       = 0.2399" in out

    def test_accepts_space_separated_entries(self, capsys):
        omega = " ".join(str(v) for v in REFERENCE_ASSIGNMENTS["gsw"])
        assert main(["evaluate", "--omega", omega]) == 0
        assert "imbalance         = 2.4517" in capsys.readouterr().out

    def test_rejects_bad_entries(self, capsys):
        assert main(["evaluate", "--omega", "1,2,1"]) == 1
        assert main(["evaluate", "--omega", "1,one,-1"]) == 1

    def test_rejects_wrong_length(self, capsys):
        assert main(["evaluate", "--omega", "1,-1"]) == 1


class TestPlot:
    def test_assignment_figure_has_six_points_per_group(self, tmp_path):
        result = tmp_path / "r.json"
        assert main(["run", "--method", "exhaustive", "--out", str(result)]) == 0
        out = tmp_path / "fig.svg"
        assert main(["plot", "--result", str(result), "--out", str(out)]) == 0
        svg = out.read_text()
        assert svg.startswith("<?xml")
        assert scatter_point_counts(svg)[:2] == [6, 6]
        assert "imbalance = 2.4496" in svg

    def test_plain_data_figure_has_all_points_unclassified(self, tmp_path):
        out = tmp_path / "data.svg"
        assert main(["plot", "--out", str(out)]) == 0
        assert scatter_point_counts(out.read_text())[0] == 12

    def test_malformed_result_json_writes_nothing(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        out = tmp_path / "fig.svg"
        assert main(["plot", "--result", str(bad), "--out", str(out)]) == 1
        assert not out.exists()

    def test_non_planar_covariates_are_rejected(self, tmp_path, capsys):
        data = tmp_path / "wide.csv"
        assert main(["gen", "--m", "4", "--mean", "0,0,0", "--mean", "1,1,1",
                     "--out", str(data)]) == 0
        assert main(["plot", "--input", str(data),
                     "--out", str(tmp_path / "fig.svg")]) == 1

    def test_figures_are_byte_identical_across_runs(self, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        for path in (a, b):
            assert main(["plot", "--out", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestRepro:
    def test_reports_the_known_mismatches_and_exits_two(self, tmp_path, capsys):
        out_dir = tmp_path / "report"
        code = main(["repro", "--out", str(out_dir)])
        assert code == 2
        printed = capsys.readouterr()
        lines = printed.out.splitlines()
        assert any("gsw assignment" in line and "MISMATCH" in line for line in lines)
        assert any("qaoa assignment" in line and "MISMATCH" in line for line in lines)
        assert any("exhaustive optimum" in line and line.rstrip().endswith("ok")
                   for line in lines)
        assert any("vqe assignment" in line and line.rstrip().endswith("ok")
                   for line in lines)
        assert "matching the recorded 2.4497" in printed.out
        # summary table and one figure per reference assignment, plus the data
        assert (out_dir / "summary.csv").exists()
        assert sorted(p.name for p in out_dir.glob("*.svg")) == [
            "data.svg", "gsw.svg", "optimal.svg", "qaoa.svg", "random.svg",
            "vqe.svg"]

    def test_summary_rows_match_the_printed_table(self, tmp_path):
        out_dir = tmp_path / "report"
        main(["repro", "--out", str(out_dir)])
        rows = (out_dir / "summary.csv").read_text().splitlines()
        assert rows[0] == "check,expected,computed,status"
        statuses = [line.rsplit(",", 1)[1] for line in rows[1:]]
        assert statuses.count("mismatch") == 2
        assert statuses.count("ok") == len(statuses) - 2

    def test_repro_is_deterministic(self, capsys):
        assert main(["repro"]) == 2
        first = capsys.readouterr().out
        assert main(["repro"]) == 2
        assert capsys.readouterr().out == first
