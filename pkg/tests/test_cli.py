import csv
import io
import json
import math

import numpy as np
import pytest

from quantumness import cli, records
from quantumness.criticality import SweepRecord

SQRT2 = math.sqrt(2)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


class TestWitnessCheck:
    def test_quantum(self, capsys):
        doc = run_json(capsys, "witness-check", "--family", "plain", "--p", "0.8")
        assert doc["verdict"]["is_quantum"] is True
        assert doc["verdict"]["min_eigenvalue"] < 0

    def test_classical_exit_zero(self, capsys):
        doc = run_json(capsys, "witness-check", "--family", "plain", "--p", "0.5")
        assert doc["verdict"]["is_quantum"] is False

    def test_tensor_power_n1_is_plain(self, capsys):
        a = run_json(capsys, "witness-check", "--family", "tensor-power", "--n", "1", "--p", "0.9")
        b = run_json(capsys, "witness-check", "--family", "plain", "--p", "0.9")
        assert a["verdict"] == b["verdict"]

    def test_record_metadata(self, capsys):
        doc = run_json(capsys, "witness-check", "--p", "0.8")
        assert doc["tool_version"] and len(doc["config_hash"]) == 16
        assert doc["schema_version"] == records.SCHEMA_VERSION

    def test_correlated(self, capsys):
        doc = run_json(capsys, "witness-check", "--family", "correlated", "--n", "3", "--p", "0.45")
        assert doc["verdict"]["is_quantum"] is True and doc["dim"] == 8

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "v.json"
        code, out, _ = run(capsys, "witness-check", "--p", "0.8", "--output", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["verdict"]["is_quantum"]


class TestSweep:
    def test_values(self, capsys):
        code, out, _ = run(capsys, "sweep", "--family", "tensor-power", "--n-max", "3")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert list(rows[0])[: len(records.SWEEP_COLUMNS)] == list(records.SWEEP_COLUMNS)
        p = [float(r["p_c"]) for r in rows]
        assert p[0] == pytest.approx(1 / SQRT2, abs=1e-6)
        assert p[1] == pytest.approx(0.644, abs=1e-3)
        assert p[2] == pytest.approx(0.578, abs=1e-3)

    def test_correlated_n1_matches_tensor(self, capsys):
        _, a, _ = run(capsys, "sweep", "--family", "tensor-power", "--n-max", "1", "--format", "json")
        _, b, _ = run(capsys, "sweep", "--family", "correlated", "--n-max", "1", "--format", "json")
        ra, rb = json.loads(a)["records"][0], json.loads(b)["records"][0]
        ra.pop("family"), rb.pop("family")
        assert ra == rb

    def test_byte_identical(self, capsys, tmp_path):
        paths = [tmp_path / f"s{i}.csv" for i in range(2)]
        for pth in paths:
            assert run(capsys, "sweep", "--family", "correlated", "--n-max", "4", "--output", str(pth))[0] == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_parallel_same_output(self, capsys):
        _, serial, _ = run(capsys, "sweep", "--family", "tensor-power", "--n-max", "4")
        _, par, _ = run(capsys, "sweep", "--family", "tensor-power", "--n-max", "4", "--workers", "2")
        assert serial == par

    def test_plot_data(self, capsys, tmp_path):
        plot = tmp_path / "plot.dat"
        run(capsys, "sweep", "--family", "tensor-power", "--n-max", "2", "--plot-data", str(plot))
        lines = plot.read_text().splitlines()
        assert lines[0] == "n p_c" and len(lines) == 3

    def test_csv_round_trip(self, capsys, tmp_path):
        path = tmp_path / "s.csv"
        run(capsys, "sweep", "--family", "tensor-power", "--n-max", "3", "--output", str(path))
        recs = records.read_sweep(path)
        assert [r.n for r in recs] == [1, 2, 3]
        assert records.sweep_to_csv(recs, {}).splitlines()[1].split(",")[:8] == \
            path.read_text().splitlines()[1].split(",")[:8]

    def test_error_rows_flagged(self, capsys, monkeypatch):
        from quantumness import criticality
        monkeypatch.setattr(criticality, "_min_eig", lambda *a: 1.0)
        code, out, _ = run(capsys, "sweep", "--family", "tensor-power", "--n-max", "2")
        assert code == 0
        assert {r["status"] for r in csv.DictReader(io.StringIO(out))} == {"error"}


def _write_sweep(tmp_path, recs, name="sweep.csv"):
    path = tmp_path / name
    path.write_text(records.sweep_to_csv(recs, {"source": "test"}))
    return str(path)


class TestFit:
    def test_synthetic_recovery(self, capsys, tmp_path):
        c = (0.1, 0.9, -0.4, 0.2)
        recs = [SweepRecord("tensor-power", n, c[0] + c[1] / n + c[2] / n**2 + c[3] / n**3, 1e-6)
                for n in range(1, 9)]
        doc = run_json(capsys, "fit", "--sweep", _write_sweep(tmp_path, recs))
        assert np.allclose(doc["fit"]["coefficients"], c, atol=1e-10)
        assert doc["fit"]["residual_rms"] < 1e-12

    def test_tensor_unreachable(self, capsys, tmp_path, desk_sweeps):
        doc = run_json(capsys, "fit", "--sweep", _write_sweep(tmp_path, desk_sweeps["tensor-power"]))
        ext = doc["extrapolation"]
        assert ext["reachable"] is False and ext["n_required"] is None and not ext["c0_zeroed"]

    def test_correlated_n_required(self, capsys, tmp_path, desk_sweeps):
        doc = run_json(capsys, "fit", "--sweep", _write_sweep(tmp_path, desk_sweeps["correlated"]))
        ext = doc["extrapolation"]
        assert ext["c0_zeroed"] and ext["coefficients"][0] == 0.0
        assert 1.0e5 <= ext["n_required"] <= 1.8e5

    def test_json_sweep_input(self, capsys, tmp_path):
        recs = [SweepRecord("correlated", n, 1.0 / n, 1e-6) for n in range(1, 7)]
        path = tmp_path / "s.json"
        path.write_text(records.dumps(records.envelope(
            "sweep", {"records": [records.sweep_record_dict(r) for r in recs]}, {})))
        doc = run_json(capsys, "fit", "--sweep", str(path))
        assert doc["extrapolation"]["n_required"] == 100_001

    def test_malformed(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("n,value\n1,2\n")
        assert run(capsys, "fit", "--sweep", str(bad))[0] == cli.EXIT_INPUT
        assert run(capsys, "fit", "--sweep", str(tmp_path / "missing.csv"))[0] == cli.EXIT_INPUT

    def test_too_few_rows(self, capsys, tmp_path):
        recs = [SweepRecord("tensor-power", n, 1.0 / n, 1e-6) for n in range(1, 4)]
        assert run(capsys, "fit", "--sweep", _write_sweep(tmp_path, recs))[0] == cli.EXIT_INPUT

    def test_rank_deficient(self, capsys, tmp_path):
        recs = [SweepRecord("tensor-power", n, 1.0 / n, 1e-6) for n in (1, 1, 2, 2, 2)]
        assert run(capsys, "fit", "--sweep", _write_sweep(tmp_path, recs))[0] == cli.EXIT_INPUT


class TestCircuitSim:
    def test_j1_pure(self, capsys):
        doc = run_json(capsys, "circuit-sim", "--p", "1", "--L", "1")
        assert doc["j"][0] == pytest.approx(0.5, abs=1e-12)

    def test_shots_zero_exact_only(self, capsys):
        doc = run_json(capsys, "circuit-sim", "--p", "1", "--L", "2")
        for row in doc["moments"]:
            assert "exact" in row
            assert "estimate" not in row and "standard_error" not in row

    def test_sampled_deterministic(self, capsys):
        argv = ("circuit-sim", "--p", "0.9", "--L", "3", "--shots", "5000", "--seed", "11")
        a, b = run(capsys, *argv)[1], run(capsys, *argv)[1]
        assert a == b
        assert all("estimate" in row for row in json.loads(a)["moments"])

    def test_spectrum_restricted(self, capsys):
        doc = run_json(capsys, "circuit-sim", "--p", "1", "--spectrum")
        assert np.allclose(sorted(doc["spectrum"]["reconstructed"]), [(1 - SQRT2) / 2, (1 + SQRT2) / 2], atol=1e-9)

    def test_spectrum_embedded(self, capsys):
        doc = run_json(capsys, "circuit-sim", "--p", "1", "--spectrum", "--embed-dim", "4")
        vals = sorted(doc["spectrum"]["reconstructed"])
        assert np.allclose(vals, [(1 - SQRT2) / 2, 0, 0, (1 + SQRT2) / 2], atol=1e-6)
        assert np.allclose(vals, doc["spectrum"]["dense"], atol=1e-6)

    def test_tensor_copies(self, capsys):
        doc = run_json(capsys, "circuit-sim", "--p", "0.7", "--n", "2", "--spectrum")
        assert doc["dim"] == 4
        assert np.allclose(sorted(doc["spectrum"]["reconstructed"]), doc["spectrum"]["dense"], atol=1e-6)


class TestExitCodes:
    def test_usage(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["witness-check", "--p", "1.5"])
        assert exc.value.code == cli.EXIT_USAGE

    def test_missing_state(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["witness-check"])
        assert exc.value.code == cli.EXIT_USAGE

    def test_unknown_family(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["sweep", "--family", "bogus", "--n-max", "2"])
        assert exc.value.code == cli.EXIT_USAGE

    def test_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("QUANTUMNESS_DIM_CAP", "16")
        assert run(capsys, "sweep", "--family", "tensor-power", "--n-max", "5")[0] == cli.EXIT_RESOURCE
        assert run(capsys, "witness-check", "--family", "tensor-power", "--n", "5", "--p", "0.5")[0] == cli.EXIT_RESOURCE

    def test_solver_failure(self, capsys, monkeypatch):
        from quantumness import witness
        from quantumness.errors import SolverError

        def boom(self):
            raise SolverError("no convergence")
        monkeypatch.setattr(witness.WitnessOperator, "min_eigenvalue", boom)
        assert run(capsys, "witness-check", "--p", "0.8")[0] == cli.EXIT_SOLVER
