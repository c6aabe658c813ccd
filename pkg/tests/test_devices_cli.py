import json
import math

import numpy as np
import pytest

from conftest import GHZ, MHZ
from tunablezz.cli import main
from tunablezz.csvio import read_data_rows
from tunablezz.devices import (
    DEVICE_DIR_ENV,
    bundled_device,
    device_source_hash,
    interference_configs,
    load_device,
    resolve_device,
)
from tunablezz.errors import DeviceFileError

VALID_FILE = {
    "name": "custom",
    "omega1_ghz": 5.0,
    "omega2_ghz": 5.2,
    "omega_plus_ghz": 7.0,
    "omega_minus_max_ghz": 7.2,
    "alpha1_ghz": 0.3,
    "alpha2_ghz": 0.3,
    "alpha_plus_ghz": 0.0,
    "alpha_minus_ghz": 0.5,
    "g1_plus_ghz": 0.1,
    "g2_plus_ghz": 0.1,
    "g1_minus_ghz": 0.08,
    "g2_minus_ghz": 0.08,
    "t1_1_us": 15.0,
    "t1_2_us": 12.0,
    "t2_1_us": 4.0,
    "t2_2_us": 4.0,
}


class TestDeviceLoading:
    def test_bundled_device_a_values(self):
        p = bundled_device("device_a")
        assert p.omega1 == pytest.approx(2 * math.pi * 4.973e9)
        assert p.g1_plus == pytest.approx(2 * math.pi * 135e6)
        assert p.alpha_minus == pytest.approx(2 * math.pi * 750e6)
        assert p.t2_1 == pytest.approx(4.2e-6)

    def test_bundled_device_b_values(self):
        p = bundled_device("device_b")
        assert p.omega_minus_max == pytest.approx(2 * math.pi * 7.19e9)
        assert p.alpha_minus == pytest.approx(2 * math.pi * 290e6)
        assert p.t1_2 == pytest.approx(7.0e-6)

    def test_load_valid_file(self, tmp_path):
        path = tmp_path / "dev.json"
        path.write_text(json.dumps(VALID_FILE))
        p = load_device(path)
        assert p.name == "custom"
        assert p.omega2 == pytest.approx(2 * math.pi * 5.2e9)

    def test_unknown_key_rejected(self, tmp_path):
        data = dict(VALID_FILE, omega3_ghz=6.0)
        path = tmp_path / "dev.json"
        path.write_text(json.dumps(data))
        with pytest.raises(DeviceFileError, match="omega3_ghz"):
            load_device(path)

    def test_missing_key_rejected(self, tmp_path):
        data = dict(VALID_FILE)
        del data["g1_minus_ghz"]
        path = tmp_path / "dev.json"
        path.write_text(json.dumps(data))
        with pytest.raises(DeviceFileError, match="g1_minus_ghz"):
            load_device(path)

    def test_t2_violation_names_qubit(self, tmp_path):
        data = dict(VALID_FILE, t2_2_us=30.0)
        path = tmp_path / "dev.json"
        path.write_text(json.dumps(data))
        with pytest.raises(DeviceFileError, match="qubit 2"):
            load_device(path)

    def test_non_numeric_field_rejected(self, tmp_path):
        data = dict(VALID_FILE, t1_1_us="fast")
        path = tmp_path / "dev.json"
        path.write_text(json.dumps(data))
        with pytest.raises(DeviceFileError, match="t1_1_us"):
            load_device(path)

    def test_resolve_order(self, tmp_path, monkeypatch):
        search_dir = tmp_path / "devices"
        search_dir.mkdir()
        (search_dir / "mydev.json").write_text(json.dumps(VALID_FILE))
        monkeypatch.setenv(DEVICE_DIR_ENV, str(search_dir))
        params, source = resolve_device("mydev")
        assert params.name == "custom"
        assert source.endswith("mydev.json")
        params, source = resolve_device("device_a")
        assert source == "builtin:device_a"
        with pytest.raises(DeviceFileError, match="cannot resolve"):
            resolve_device("missing_device")

    def test_interference_configs_shape(self):
        configs = interference_configs()
        assert sorted(configs) == ["a", "b", "c", "d"]
        assert configs["b"].params.g1_plus > 0
        assert configs["c"].params.g1_plus == 0.0
        for cfg in configs.values():
            assert cfg.omega_lo < cfg.omega_hi


def run_cli(*argv) -> int:
    return main(list(argv))


class TestCli:
    def test_zeta_sweep_csv(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = run_cli(
            "zeta-sweep", "--device", "device_a", "--method", "pert",
            "--from-ghz", "-1.6", "--to-ghz", "-1.0", "--points", "7",
            "--csv", str(out),
        )
        assert code == 0
        columns, rows = read_data_rows(out)
        assert columns == ["detuning_ghz", "omega_minus_ghz", "zeta_mhz", "min_overlap"]
        assert len(rows) == 7
        assert float(rows[0][0]) == pytest.approx(-1.6)

    def test_zeta_sweep_rerun_byte_identical(self, tmp_path):
        args = [
            "zeta-sweep", "--device", "device_a", "--method", "pert",
            "--from-ghz", "-1.5", "--to-ghz", "-1.2", "--points", "5",
        ]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(*args, "--csv", str(out1)) == 0
        assert run_cli(*args, "--csv", str(out2)) == 0
        a = out1.read_text().replace(str(out1), "OUT")
        b = out2.read_text().replace(str(out2), "OUT")
        assert a == b

    def test_metadata_header(self, tmp_path):
        out = tmp_path / "sweep.csv"
        run_cli(
            "zeta-sweep", "--device", "device_a", "--method", "pert",
            "--from-ghz", "-1.5", "--to-ghz", "-1.2", "--points", "3",
            "--seed", "42", "--csv", str(out),
        )
        header = [l for l in out.read_text().splitlines() if l.startswith("#")]
        text = "\n".join(header)
        assert "tunablezz" in text
        assert "command:" in text
        assert "seed: 42" in text
        assert "sha256=" in text

    def test_exact_sweep_threads_match_serial(self, tmp_path):
        base = [
            "zeta-sweep", "--device", "device_b", "--method", "exact",
            "--from-ghz", "-1.0", "--to-ghz", "-0.8", "--points", "5",
        ]
        out1, out2 = tmp_path / "serial.csv", tmp_path / "threaded.csv"
        run_cli(*base, "--csv", str(out1))
        run_cli(*base, "--csv", str(out2), "--threads", "4")
        _, rows1 = read_data_rows(out1)
        _, rows2 = read_data_rows(out2)
        assert rows1 == rows2

    def test_find_zero_zeta_prints_roots(self, capsys):
        code = run_cli("find-zero-zeta", "--device", "device_b", "--method", "pert")
        assert code == 0
        captured = capsys.readouterr().out
        assert "zero-crosstalk point" in captured
        assert "default operating point" in captured
        assert "Phi0" in captured

    def test_rb_csv(self, tmp_path):
        out = tmp_path / "rb.csv"
        code = run_cli(
            "rb", "--device", "device_a", "--zeta-mhz", "0", "--mode", "simultaneous",
            "--seed", "3", "--trials", "4", "--lengths", "2,4,8",
            "--csv", str(out),
        )
        assert code == 0
        columns, rows = read_data_rows(out)
        assert columns == ["m", "mean_p0_q1", "mean_p0_q2", "sem"]
        assert [int(r[0]) for r in rows] == [2, 4, 8]
        assert all(0.9 < float(r[1]) <= 1.0 for r in rows)

    def test_rb_individual_mode_blank_spectator(self, tmp_path):
        out = tmp_path / "rb.csv"
        run_cli(
            "rb", "--device", "device_a", "--zeta-mhz", "1.0", "--mode", "individual_q2",
            "--seed", "3", "--trials", "3", "--lengths", "2,4",
            "--csv", str(out),
        )
        _, rows = read_data_rows(out)
        assert all(r[1] == "nan" for r in rows)
        assert all(r[2] != "nan" for r in rows)

    def test_ptm_ideal_matches_library(self, tmp_path):
        from tunablezz.tomography import SQRT_ISWAP, ptm_of_unitary

        out = tmp_path / "ptm.csv"
        code = run_cli("ptm", "--channel", "ideal", "--csv", str(out))
        assert code == 0
        columns, rows = read_data_rows(out)
        assert len(columns) == 17 and len(rows) == 16
        r = np.array([[float(v) for v in row[1:]] for row in rows])
        assert np.allclose(r, ptm_of_unitary(SQRT_ISWAP).r, atol=1e-9)

    def test_ptm_decohered_requires_device(self, capsys):
        assert run_cli("ptm", "--channel", "decohered", "--csv", "/tmp/x.csv") == 2

    def test_spectrum_command(self, tmp_path, capsys):
        out = tmp_path / "spec.csv"
        code = run_cli(
            "spectrum", "--device", "device_a", "--detuning-ghz", "-1.47",
            "--levels", "5", "--csv", str(out),
        )
        assert code == 0
        assert "zeta/2pi" in capsys.readouterr().out
        columns, rows = read_data_rows(out)
        assert columns == ["level", "frequency_ghz", "bare_label", "overlap"]
        assert rows[0][2] == "0000"

    def test_convergence_command(self, tmp_path):
        out = tmp_path / "conv.csv"
        code = run_cli(
            "convergence", "--device", "device_a", "--detuning-ghz", "-1.0",
            "--dims-list", "3,3,2,3;4,4,3,4", "--csv", str(out),
        )
        assert code == 0
        columns, rows = read_data_rows(out)
        assert columns == ["dims", "zeta_mhz", "abs_deviation_mhz"]
        assert len(rows) == 2

    def test_unknown_device_error_exit(self, capsys):
        code = run_cli("find-zero-zeta", "--device", "no_such_device")
        assert code == 2
        assert "cannot resolve" in capsys.readouterr().err

    def test_figure_recipe_figs4(self, tmp_path):
        outdir = tmp_path / "report"
        code = run_cli("figure", "figS4", "--outdir", str(outdir))
        assert code == 0
        assert (outdir / "figS4.csv").exists()
        assert (outdir / "figS4.png").exists()
        summary = (outdir / "figS4_summary.txt").read_text()
        assert "PASS" in summary and "FAIL" not in summary
