"""Command-line interface: dispatch, formats, exit codes, determinism."""

import json

import pytest

import clutterstats as cs
from clutterstats.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestScalarCommands:
    def test_phi_example(self, capsys):
        code, out, _ = invoke(
            capsys, "phi", "--model", "gamma", "--L", "2", "--mu", "3", "--s", "2"
        )
        assert code == 0
        assert float(out.strip()) == pytest.approx(3.0, rel=1e-12)

    def test_moments_example(self, capsys):
        code, out, _ = invoke(
            capsys, "moments", "--model", "exponential", "--mu", "2", "--n", "3"
        )
        assert code == 0
        assert float(out.strip()) == 48.0

    def test_pdf(self, capsys):
        code, out, _ = invoke(
            capsys, "pdf", "--model", "rayleigh", "--z", "1", "--x", "1"
        )
        assert code == 0
        assert float(out.strip()) == pytest.approx(
            cs.pdf(cs.Rayleigh(1.0), 1.0), rel=1e-15
        )

    def test_json_format(self, capsys):
        code, out, _ = invoke(
            capsys,
            "phi",
            "--model",
            "weibull",
            "--b",
            "2",
            "--z",
            "1.5",
            "--s",
            "3",
            "--format",
            "json",
        )
        assert code == 0
        record = json.loads(out)
        assert record["value"] == pytest.approx(2.25, rel=1e-12)


class TestCumulantsCommand:
    def test_csv_output(self, capsys):
        code, out, _ = invoke(
            capsys, "cumulants", "--model", "gamma", "--L", "1", "--mu", "1", "--n", "2"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "order,value"
        assert len(lines) == 3
        order, value = lines[1].split(",")
        assert order == "1"
        assert float(value) == pytest.approx(-0.5772156649, abs=1e-9)

    def test_json_output(self, capsys):
        code, out, _ = invoke(
            capsys,
            "cumulants",
            "--model",
            "gamma",
            "--L",
            "2",
            "--mu",
            "1",
            "--n",
            "4",
            "--format",
            "json",
        )
        assert code == 0
        record = json.loads(out)
        assert record["kind"] == "log_cumulants"
        assert record["convention"] == "standard"
        assert len(record["values"]) == 4

    def test_paper_convention_differs_at_fourth_order(self, capsys):
        base = ["cumulants", "--model", "gamma", "--L", "2", "--mu", "1", "--n", "4",
                "--format", "json"]
        _, out_std, _ = invoke(capsys, *base)
        _, out_pap, _ = invoke(capsys, *base, "--convention", "paper-eq6")
        std = json.loads(out_std)["values"]
        pap = json.loads(out_pap)["values"]
        assert std[:3] == pytest.approx(pap[:3], rel=1e-12)
        assert std[3] != pytest.approx(pap[3], rel=1e-6)

    def test_numeric_oracle(self, capsys):
        code, out, _ = invoke(
            capsys,
            "cumulants",
            "--model",
            "weibull",
            "--b",
            "2",
            "--z",
            "1",
            "--n",
            "2",
            "--numeric",
            "--format",
            "json",
        )
        assert code == 0
        values = json.loads(out)["values"]
        assert values[1] == pytest.approx(0.4112335, abs=1e-5)


class TestExitCodes:
    def test_domain_error_is_three(self, capsys):
        code, _, err = invoke(
            capsys, "pdf", "--model", "gamma", "--L", "-1", "--mu", "1", "--x", "1"
        )
        assert code == 3
        assert "parameter L" in err

    def test_moment_divergence_is_three(self, capsys):
        code, _, err = invoke(
            capsys,
            "moments",
            "--model",
            "fisher",
            "--L",
            "2",
            "--M",
            "1.5",
            "--mu",
            "1",
            "--n",
            "2",
        )
        assert code == 3
        assert "moment diverges" in err

    def test_unknown_flag_is_one(self, capsys):
        code, _, _ = invoke(capsys, "pdf", "--model", "gamma", "--nope", "1")
        assert code == 1

    def test_unknown_family_is_one(self, capsys):
        code, _, err = invoke(capsys, "phi", "--model", "cauchy", "--s", "1")
        assert code == 1
        assert "unknown model family" in err

    def test_missing_parameter_is_one(self, capsys):
        code, _, err = invoke(capsys, "phi", "--model", "gamma", "--L", "2", "--s", "1")
        assert code == 1
        assert "requires parameters" in err

    def test_wrong_parameter_is_one(self, capsys):
        code, _, err = invoke(
            capsys, "phi", "--model", "gamma", "--L", "2", "--mu", "1",
            "--sigma", "3", "--s", "1"
        )
        assert code == 1
        assert "does not take" in err

    def test_unknown_subcommand_is_one(self, capsys):
        code, _, _ = invoke(capsys, "transmogrify")
        assert code == 1

    def test_missing_input_file_is_usage(self, capsys):
        code, _, _ = invoke(capsys, "fit", "--family", "gamma", "--input", "/no/such")
        assert code == 1


class TestSimulateCommand:
    def test_writes_csv(self, capsys, tmp_path):
        out_path = tmp_path / "samples.csv"
        code, _, err = invoke(
            capsys,
            "simulate", "--model", "gamma", "--L", "4", "--mu", "1",
            "--n", "100", "--seed", "7", "--out", str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == "value"
        assert len(lines) == 101

    def test_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = [
            "simulate", "--model", "k_amplitude", "--alpha", "2", "--b", "1",
            "--n", "500", "--seed", "42",
        ]
        assert invoke(capsys, *argv, "--out", str(a))[0] == 0
        assert invoke(capsys, *argv, "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_default_seed_announced(self, capsys, tmp_path):
        out_path = tmp_path / "s.csv"
        code, _, err = invoke(
            capsys,
            "simulate", "--model", "rayleigh", "--z", "1",
            "--n", "10", "--out", str(out_path),
        )
        assert code == 0
        assert "42" in err

    def test_stdout_output(self, capsys):
        code, out, _ = invoke(
            capsys,
            "simulate", "--model", "rayleigh", "--z", "1",
            "--n", "5", "--seed", "1",
        )
        assert code == 0
        assert out.splitlines()[0] == "value"
        assert len(out.splitlines()) == 6

    def test_json_single_document(self, capsys):
        code, out, _ = invoke(
            capsys,
            "simulate", "--model", "rayleigh", "--z", "1",
            "--n", "5", "--seed", "1", "--format", "json",
        )
        assert code == 0
        record = json.loads(out)
        assert len(record["values"]) == 5


class TestFitCommand:
    def test_fit_from_simulated_file(self, capsys, tmp_path):
        path = tmp_path / "gamma.csv"
        code, _, _ = invoke(
            capsys,
            "simulate", "--model", "gamma", "--L", "4", "--mu", "1",
            "--n", "1000000", "--seed", "42", "--out", str(path),
        )
        assert code == 0
        code, out, _ = invoke(capsys, "fit", "--family", "gamma", "--input", str(path))
        assert code == 0
        record = json.loads(out)
        assert record["family"] == "gamma"
        assert record["converged"] is True
        assert record["L"] == pytest.approx(4.0, rel=0.02)
        assert record["mu"] == pytest.approx(1.0, rel=0.02)
        assert {"iterations", "residual"} <= set(record)


class TestFigure1Command:
    def test_csv_table(self, capsys, tmp_path):
        out_path = tmp_path / "table.csv"
        code, _, _ = invoke(
            capsys,
            "figure1", "--L", "4", "--mu", "1", "--m-grid", "0.5:8:5",
            "--n", "5000", "--seed", "11", "--out", str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0].startswith("M,m2_data_theory")
        assert len(lines) == 6

    def test_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = [
            "figure1", "--m-grid", "0.5:8:4", "--n", "2000", "--seed", "42",
        ]
        assert invoke(capsys, *argv, "--out", str(a))[0] == 0
        assert invoke(capsys, *argv, "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_json_format(self, capsys):
        code, out, _ = invoke(
            capsys,
            "figure1", "--m-grid", "1:4:3", "--n", "2000", "--seed", "3",
            "--format", "json",
        )
        assert code == 0
        records = json.loads(out)
        assert [r["M"] for r in records] == pytest.approx([1.0, 2.0, 4.0])

    def test_bad_grid_is_usage_error(self, capsys):
        code, _, err = invoke(capsys, "figure1", "--m-grid", "oops", "--n", "10")
        assert code == 1
        assert "m-grid" in err


class TestVerifyCommand:
    def test_passes_at_default_tolerance(self, capsys):
        code, out, _ = invoke(capsys, "verify")
        assert code == 0
        assert "PASS" in out
        assert "FAIL" not in out

    def test_json_format(self, capsys):
        code, out, _ = invoke(capsys, "verify", "--format", "json")
        assert code == 0
        record = json.loads(out)
        assert record["passed"] is True
        assert all(check["passed"] for check in record["checks"])

    def test_impossible_tolerance_fails(self, capsys):
        code, out, _ = invoke(capsys, "verify", "--tolerance", "1e-15")
        assert code == 2
        assert "FAIL" in out
