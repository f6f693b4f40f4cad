import csv
import json

import pytest

from galpha.cli import build_parser, run


def run_cli(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.strip(), captured.err.strip()


def summary_file(out_line: str) -> str:
    fields = dict(part.split("=", 1) for part in out_line.split())
    return fields["file"]


class TestParams:
    def test_writes_json(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "params", "--k", "2", "--rho", "0.5,0.5", "--out", str(tmp_path)
        )
        assert code == 0
        data = json.loads(open(summary_file(out)).read())
        assert data["k"] == 2
        assert data["alpha"] == [1.3333333333333333, 1.0]
        assert data["alpha_f"] == 0.6666666666666666

    def test_reruns_are_byte_identical(self, tmp_path, capsys):
        argv = ("params", "--k", "1", "--rho", "0.8", "--out", str(tmp_path))
        _, out1, _ = run_cli(capsys, *argv)
        first = open(summary_file(out1), "rb").read()
        _, out2, _ = run_cli(capsys, *argv)
        assert summary_file(out1) == summary_file(out2)
        assert open(summary_file(out2), "rb").read() == first

    def test_different_flags_different_files(self, tmp_path, capsys):
        _, out1, _ = run_cli(capsys, "params", "--k", "1", "--rho", "0.5", "--out", str(tmp_path))
        _, out2, _ = run_cli(capsys, "params", "--k", "1", "--rho", "0.6", "--out", str(tmp_path))
        assert summary_file(out1) != summary_file(out2)


class TestSimulate:
    def test_writes_trajectory(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--k", "2", "--rho", "0.5,0.5",
            "--lambda", "39.478417604357434", "--u0", "1", "--v0", "0",
            "--tau", "0.0625", "--steps", "16", "--out", str(tmp_path),
        )
        assert code == 0
        assert "final_u=" in out
        with open(summary_file(out)) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "d0", "d1", "d2", "d3", "d4", "d5"]
        assert len(rows) == 18
        # full period: back near u = 1
        assert abs(float(rows[-1][1]) - 1.0) < 1e-2

    def test_negative_lambda_exits_1(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "simulate", "--k", "1", "--rho", "0.5",
            "--lambda", "-1", "--u0", "1", "--v0", "0",
            "--tau", "0.1", "--steps", "4", "--out", str(tmp_path),
        )
        assert code == 1
        assert "error:" in err


class TestConverge:
    def test_summary_reports_fitted_orders(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "converge", "--k", "2", "--rho", "0.5,0.5",
            "--lambda", "39.478417604357434", "--T", "1",
            "--steps", "8,16,32,64", "--out", str(tmp_path),
        )
        assert code == 0
        assert "fitted_order_v=" in out
        fields = dict(part.split("=", 1) for part in out.split())
        assert abs(float(fields["fitted_order_v"]) - 4.0) < 0.2
        summary = json.loads(open(fields["summary"]).read())
        assert summary["k"] == 2


class TestSpectrum:
    def test_sweep_csv_and_matrix_dump(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "spectrum", "--k", "2", "--rho", "0.1,0.4",
            "--sigma-min", "1e-4", "--sigma-max", "1e4", "--points", "5",
            "--dump-matrices-sigma", "1.0", "--out", str(tmp_path),
        )
        assert code == 0
        with open(summary_file(out)) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["sigma", "block", "idx", "re", "im", "abs"]
        assert len(rows) == 1 + 5 * 6
        names = [p.name for p in tmp_path.iterdir()]
        for suffix in ("_A.csv", "_B.csv", "_G.csv"):
            assert any(name.endswith(suffix) for name in names)

    def test_max_radius_reported(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "spectrum", "--k", "1", "--rho", "1.0",
            "--sigma-min", "1e-3", "--sigma-max", "1e3", "--points", "9",
            "--out", str(tmp_path),
        )
        assert code == 0
        fields = dict(part.split("=", 1) for part in out.split())
        assert abs(float(fields["max_radius"]) - 1.0) < 1e-9


class TestStabilityMap:
    def test_grid_classification(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "stability-map", "--k", "2", "--fix", "alpha1=2",
            "--vary", "alpha_f:0.5:1.0:3", "--vary", "alpha2:1.0:2.0:3",
            "--sigma-points", "10", "--out", str(tmp_path),
        )
        assert code == 0
        with open(summary_file(out)) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x_name", "x", "y_name", "y", "max_radius", "stable"]
        assert len(rows) == 10
        # entire sampled region satisfies 1/2 <= alpha_f <= alpha_2
        assert all(r[5] == "1" for r in rows[1:])

    def test_requires_two_axes(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "stability-map", "--k", "2", "--fix", "alpha1=2",
            "--vary", "alpha_f:0:1:3", "--out", str(tmp_path),
        )
        assert code == 2
        assert "error:" in err


class TestLimits:
    def test_writes_both_limits(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "limits", "--k", "2", "--rho", "0.1,0.4", "--out", str(tmp_path)
        )
        assert code == 0
        data = json.loads(open(summary_file(out)).read())
        assert data["sigma_inf"] == [0.1, 0.1, 0.0, 0.4, 0.4, 0.4]
        assert data["sigma_zero"][0] == 1.0


class TestFlagValidation:
    def test_rho_count_mismatch_exits_2(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "params", "--k", "2", "--rho", "0.5", "--out", str(tmp_path)
        )
        assert code == 2
        assert "rho" in err

    def test_rho_out_of_range_exits_2(self, tmp_path, capsys):
        code, _, _ = run_cli(
            capsys, "params", "--k", "1", "--rho", "1.5", "--out", str(tmp_path)
        )
        assert code == 2

    def test_nonpositive_tau_exits_2(self, tmp_path, capsys):
        code, _, _ = run_cli(
            capsys, "simulate", "--k", "1", "--rho", "0.5",
            "--lambda", "1", "--u0", "1", "--v0", "0",
            "--tau", "0", "--steps", "4", "--out", str(tmp_path),
        )
        assert code == 2

    def test_unknown_subcommand_exits_2(self, capsys):
        assert run_cli(capsys, "bogus")[0] == 2

    def test_malformed_vary_exits_2(self, tmp_path, capsys):
        code, _, _ = run_cli(
            capsys, "stability-map", "--k", "2", "--vary", "alpha_f:0:1",
            "--out", str(tmp_path),
        )
        assert code == 2


def test_parser_builds():
    parser = build_parser()
    args = parser.parse_args(["params", "--k", "1", "--rho", "0.5"])
    assert args.k == 1 and args.rho == [0.5]
