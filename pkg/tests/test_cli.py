"""Command-line interface: commands, exit codes, file outputs, determinism."""
import json

import numpy as np
import pytest

from molphase import cli, ipea, molham

from conftest import H2_GROUND_ENERGY, H2_PHASE


def read_csv(path):
    lines = path.read_text().strip().split("\n")
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


class TestParseAngle:
    def test_degree_suffix(self):
        assert cli.parse_angle("5deg") == pytest.approx(5.0 / 360.0)

    def test_bare_turns(self):
        assert cli.parse_angle("0.01") == 0.01

    def test_junk_rejected(self):
        with pytest.raises(Exception, match="angle"):
            cli.parse_angle("fivedeg")


class TestEig:
    def test_h2(self, tmp_path, capsys):
        assert cli.main(["eig", "--hamiltonian", "h2", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "-1.8516" in out
        report = json.loads((tmp_path / "eig_report.json").read_text())
        assert report["energies"][0] == pytest.approx(H2_GROUND_ENERGY, abs=1e-9)
        assert report["label"] == "H2/STO-3G"

    def test_identity_document(self, tmp_path, capsys):
        doc = tmp_path / "identity.json"
        doc.write_text('{"label": "id", "dim": 2, "matrix_re": [[1.0, 0.0], [0.0, 1.0]]}')
        assert cli.main(["eig", "--hamiltonian", str(doc), "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "eig_report.json").read_text())
        np.testing.assert_allclose(report["energies"], [1.0, 1.0], atol=1e-12)

    def test_malformed_document_exits_2(self, tmp_path, capsys):
        doc = tmp_path / "bad.json"
        doc.write_text('{"label": "x", "dim": 2, "matrix_re": [[0.0, 1.0], [1.0]]}')
        assert cli.main(["eig", "--hamiltonian", str(doc), "--out", str(tmp_path)]) == 2
        assert "matrix_re" in capsys.readouterr().err

    def test_missing_document_exits_2(self, tmp_path, capsys):
        assert cli.main(["eig", "--hamiltonian", str(tmp_path / "nope.json")]) == 2


class TestIpeaCommand:
    def test_defaults_noiseless(self, tmp_path, capsys):
        assert cli.main(["ipea", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        energy = float(out.split("energy: ")[1].split()[0])
        assert energy == pytest.approx(-1.851571, abs=1e-6)
        assert energy == pytest.approx(H2_GROUND_ENERGY, abs=1e-9)
        bits = int(out.split("correct bits vs oracle: ")[1].split()[0])
        assert bits >= 50
        header, rows = read_csv(tmp_path / "ipea_trace.csv")
        assert header[:4] == ["k", "measured_phase", "clipped_phase", "operator_power"]
        assert len(rows) == 7  # six iterations plus summary
        table = (tmp_path / "ipea_table.txt").read_text()
        assert table.count("k=") == 6
        assert "oracle" in table

    def test_jittered_run_keeps_17_bits(self, tmp_path, capsys):
        assert cli.main(
            ["ipea", "--jitter", "5deg", "--seed", "7", "--out", str(tmp_path)]
        ) == 0
        bits = int(capsys.readouterr().out.split("correct bits vs oracle: ")[1].split()[0])
        assert bits >= 17

    def test_single_iteration_trace(self, tmp_path):
        assert cli.main(["ipea", "--iterations", "1", "--out", str(tmp_path)]) == 0
        _, rows = read_csv(tmp_path / "ipea_trace.csv")
        assert len(rows) == 2  # one iteration plus summary
        assert rows[0][0] == "0"
        assert rows[1][0] == "final"

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        args = ["ipea", "--jitter", "5deg", "--seed", "11"]
        assert cli.main(args + ["--out", str(a)]) == 0
        assert cli.main(args + ["--out", str(b)]) == 0
        assert (a / "ipea_trace.csv").read_bytes() == (b / "ipea_trace.csv").read_bytes()
        assert (a / "ipea_table.txt").read_bytes() == (b / "ipea_table.txt").read_bytes()

    def test_inadmissible_errbd_exits_2_without_output(self, tmp_path, capsys):
        out = tmp_path / "o"
        assert cli.main(["ipea", "--errbd", "0.2", "--out", str(out)]) == 2
        assert "inadmissible" in capsys.readouterr().err
        assert not out.exists()

    def test_explicit_tau(self, tmp_path, capsys):
        assert cli.main(["ipea", "--tau", "1.0", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        energy = float(out.split("energy: ")[1].split()[0])
        assert energy == pytest.approx(H2_GROUND_ENERGY, abs=1e-6)


class TestAspCommand:
    def test_six_step_scan(self, tmp_path, capsys):
        assert cli.main(
            ["asp", "--steps", "6", "--scan", "1:30:0.5", "--out", str(tmp_path)]
        ) == 0
        out = capsys.readouterr().out
        best = float(out.split("fidelity = ")[1].split()[0])
        assert best >= 0.99
        _, rows = read_csv(tmp_path / "asp_scan.csv")
        assert len(rows) == 59
        assert max(float(r[1]) for r in rows) == pytest.approx(best)

    def test_dense_single_point(self, tmp_path, capsys):
        assert cli.main(
            ["asp", "--steps", "200", "--total-time", "50", "--out", str(tmp_path)]
        ) == 0
        best = float(capsys.readouterr().out.split("fidelity = ")[1].split()[0])
        assert best >= 0.999

    def test_sigma_x_target_is_stationary(self, tmp_path):
        doc = tmp_path / "sx.json"
        doc.write_text('{"label": "sx", "dim": 2, "matrix_re": [[0.0, 1.0], [1.0, 0.0]]}')
        assert cli.main(
            ["asp", "--hamiltonian", str(doc), "--steps", "4", "--scan", "1:10:1", "--out", str(tmp_path)]
        ) == 0
        _, rows = read_csv(tmp_path / "asp_scan.csv")
        assert all(float(r[1]) == pytest.approx(1.0, abs=1e-12) for r in rows)

    def test_requires_time_argument(self, tmp_path, capsys):
        assert cli.main(["asp", "--out", str(tmp_path)]) == 2

    def test_bad_scan_spec(self, tmp_path):
        assert cli.main(["asp", "--scan", "30:1:0.5", "--out", str(tmp_path)]) == 2

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        args = ["asp", "--steps", "6", "--scan", "2:12:2"]
        assert cli.main(args + ["--out", str(a)]) == 0
        assert cli.main(args + ["--out", str(b)]) == 0
        assert (a / "asp_scan.csv").read_bytes() == (b / "asp_scan.csv").read_bytes()


class TestNoiseSweepCommand:
    def test_sweep_outputs(self, tmp_path, capsys):
        assert cli.main(
            ["noise-sweep", "--epsilons", "0,1e-5,1e-4,1e-3", "--out", str(tmp_path)]
        ) == 0
        header, rows = read_csv(tmp_path / "noise_sweep.csv")
        assert header == ["epsilon", "k", "phase_error", "growth_ratio", "attainable_bits"]
        assert len(rows) == 4 * 6
        zero_rows = [r for r in rows if float(r[0]) == 0.0]
        assert all(float(r[2]) < 1e-10 for r in zero_rows)
        ratio = next(float(r[3]) for r in rows if float(r[0]) == 1e-4 and r[3])
        assert 6.0 <= ratio <= 10.0
        bits = {float(r[0]): int(r[4]) for r in rows}
        ordered = [bits[e] for e in (0.0, 1e-5, 1e-4, 1e-3)]
        assert all(a >= b for a, b in zip(ordered, ordered[1:]))
        assert ordered[0] > ordered[-1]

    def test_bad_epsilon_grid(self, tmp_path):
        assert cli.main(["noise-sweep", "--epsilons", "1e-4,x", "--out", str(tmp_path)]) == 2
        assert cli.main(["noise-sweep", "--epsilons=-1e-4", "--out", str(tmp_path)]) == 2

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        args = ["noise-sweep", "--epsilons", "0,1e-4", "--seed", "3"]
        assert cli.main(args + ["--out", str(a)]) == 0
        assert cli.main(args + ["--out", str(b)]) == 0
        assert (a / "noise_sweep.csv").read_bytes() == (b / "noise_sweep.csv").read_bytes()


class TestSpectraCommand:
    def test_produces_reference_and_per_iteration_files(self, tmp_path):
        assert cli.main(["spectra", "--iterations", "6", "--out", str(tmp_path)]) == 0
        files = sorted(p.name for p in tmp_path.glob("spectrum_*.csv"))
        assert len(files) == 7  # k = -1 .. 5
        assert "spectrum_k-1.csv" in files
        manifest = json.loads((tmp_path / "spectra_manifest.json").read_text())
        assert manifest["k=-1"]["extracted_phase"] == 0.0
        assert ipea.phase_distance(manifest["k=0"]["extracted_phase"], H2_PHASE) <= 0.0003

    def test_extracted_phases_match_trace(self, tmp_path):
        assert cli.main(["spectra", "--iterations", "3", "--out", str(tmp_path)]) == 0
        assert cli.main(["ipea", "--iterations", "3", "--out", str(tmp_path)]) == 0
        manifest = json.loads((tmp_path / "spectra_manifest.json").read_text())
        _, rows = read_csv(tmp_path / "ipea_trace.csv")
        for row in rows[:-1]:
            k = int(row[0])
            measured = float(row[1])
            assert ipea.phase_distance(
                manifest[f"k={k}"]["extracted_phase"], measured
            ) <= 0.0003

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        args = ["spectra", "--iterations", "2", "--jitter", "5deg", "--seed", "4"]
        assert cli.main(args + ["--out", str(a)]) == 0
        assert cli.main(args + ["--out", str(b)]) == 0
        for name in ("spectrum_k-1.csv", "spectrum_k0.csv", "spectra_manifest.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes()


class TestGeneralHamiltonianDocuments:
    def test_auto_tau_range_error_exits_2(self, tmp_path, capsys):
        doc = tmp_path / "deep.json"
        doc.write_text(
            json.dumps({"label": "deep", "dim": 2,
                        "matrix_re": [[-10.0, 0.0], [0.0, -10.0 + np.pi]]})
        )
        assert cli.main(["ipea", "--hamiltonian", str(doc), "--out", str(tmp_path)]) == 2
        assert "supply tau" in capsys.readouterr().err

    def test_four_level_system_with_explicit_tau(self, tmp_path, capsys):
        doc = tmp_path / "diag4.json"
        diag = [-4.0, -2.5, -1.0, -0.5]
        doc.write_text(
            json.dumps({"label": "diag4", "dim": 4,
                        "matrix_re": [[diag[i] if i == j else 0.0 for j in range(4)]
                                      for i in range(4)]})
        )
        assert cli.main(
            ["ipea", "--hamiltonian", str(doc), "--tau", "1.0", "--out", str(tmp_path)]
        ) == 0
        out = capsys.readouterr().out
        energy = float(out.split("energy: ")[1].split()[0])
        assert energy == pytest.approx(-4.0, abs=1e-9)
