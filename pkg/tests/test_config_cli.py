"""Configuration parsing, CSV output, and CLI behaviour tests."""

import numpy as np
import pytest

from qraman.cli import main
from qraman.config import RunConfig, parse_config
from qraman.errors import ConfigError
from qraman.runner import default_horizon, run, run_dynamics, run_spectrum

SMALL_SPECTRUM = """
[scan]
mode = spectrum
omega_min = -0.25
omega_max = 0.25
omega_count = 21
t_min = 0
t_max = 300
t_count = 4
"""


class TestConfigParsing:
    def test_defaults_round_trip(self):
        cfg = RunConfig()
        again = parse_config(cfg.to_text())
        assert again.to_text() == cfg.to_text()

    def test_modified_round_trip(self):
        cfg = parse_config(
            """
[molecule]
site_energies = 2.0, 2.4
hopping = 0.05
rates = 2->1:0.004
pure_dephasing = 0.001
initial_state = eigen:2

[photons]
kind = uncorrelated
tau0 = 40

[numerics]
engine = numeric
workers = 2
"""
        )
        assert cfg.molecule.site_energies == (2.0, 2.4)
        assert cfg.molecule.rates == {(2, 1): 0.004}
        assert cfg.photons.kind == "uncorrelated"
        assert cfg.numerics.engine == "numeric"
        again = parse_config(cfg.to_text())
        assert again.to_text() == cfg.to_text()

    def test_empty_text_gives_defaults(self):
        assert parse_config("").to_text() == RunConfig().to_text()

    @pytest.mark.parametrize(
        "text,fragment",
        [
            ("[scan]\nmode = bogus\n", "mode"),
            ("[molecule]\nhopping = -0.1\n", "hopping"),
            ("[molecule]\nrates = 1->2:0.1\n", "downhill"),
            ("[molecule]\nrates = 2->1:-0.1\n", "negative"),
            ("[molecule]\nrates = 9->1:0.1\n", "outside"),
            ("[molecule]\ninitial_state = orbital:1\n", "initial_state"),
            ("[molecule]\ninitial_state = site:9\n", "index"),
            ("[photons]\nkind = squeezed\n", "kind"),
            ("[photons]\nsigma0 = 0\n", "positive"),
            ("[scan]\nomega_min = 1\nomega_max = 0\n", "exceed"),
            ("[scan]\nomega_count = 0\n", ">= 1"),
            ("[scan]\nt_min = -5\n", "t_min"),
            ("[numerics]\ndt = 0\n", "dt"),
            ("[numerics]\nengine = magic\n", "engine"),
            ("[numerics]\nworkers = -1\n", "workers"),
            ("[numerics]\nexchange = flip\n", "exchange"),
            ("[mystery]\nx = 1\n", "unknown section"),
            ("[scan]\nwavelength = 800\n", "unknown key"),
            ("[scan]\nt_max = 10\nt_max = 20\n", "duplicate"),
        ],
    )
    def test_rejection(self, text, fragment):
        with pytest.raises(ConfigError, match=fragment):
            parse_config(text)

    def test_default_horizon_covers_scan(self):
        cfg = parse_config(SMALL_SPECTRUM)
        assert default_horizon(cfg) >= cfg.scan.t_max


class TestOutputs:
    def test_spectrum_csv_shape_and_rerun_identical(self, tmp_path):
        cfg = parse_config(SMALL_SPECTRUM)
        a = tmp_path / "a"
        b = tmp_path / "b"
        a.mkdir()
        b.mkdir()
        path_a = run_spectrum(cfg, str(a))
        path_b = run_spectrum(cfg, str(b))
        text_a = open(path_a).read()
        assert text_a == open(path_b).read()  # byte-identical reruns
        lines = text_a.splitlines()
        assert lines[0].startswith("# qraman ")
        assert "config=" in lines[0]
        assert lines[1] == "omega_minus_eV,T_fs,re,im,abs"
        assert len(lines) == 2 + 21 * 4

    def test_spectrum_values_parse_and_match_magnitude(self, tmp_path):
        cfg = parse_config(SMALL_SPECTRUM)
        path = run_spectrum(cfg, str(tmp_path))
        data = np.genfromtxt(path, delimiter=",", skip_header=2)
        re, im, mag = data[:, 2], data[:, 3], data[:, 4]
        assert np.allclose(np.hypot(re, im), mag, rtol=1e-10)

    def test_dynamics_columns_and_trace(self, tmp_path):
        cfg = parse_config("[scan]\nmode = dynamics\nt_max = 100\n")
        path = run_dynamics(cfg, str(tmp_path))
        lines = open(path).read().splitlines()
        header = lines[1].split(",")
        assert header[0] == "t_fs"
        assert "rho_1_1_re" in header and "rho_3_3_im" in header
        data = np.genfromtxt(path, delimiter=",", skip_header=2)
        trace = (
            data[:, header.index("rho_1_1_re")]
            + data[:, header.index("rho_2_2_re")]
            + data[:, header.index("rho_3_3_re")]
        )
        assert np.allclose(trace, 1.0, atol=1e-9)

    def test_effective_config_echo(self, tmp_path):
        cfg = parse_config(SMALL_SPECTRUM)
        run(cfg, str(tmp_path), mode="spectrum")
        echoed = (tmp_path / "effective_config.ini").read_text()
        assert parse_config(echoed).to_text() == cfg.to_text()

    def test_compare_writes_all_three_kinds(self, tmp_path):
        cfg = parse_config(
            SMALL_SPECTRUM.replace("omega_count = 21", "omega_count = 7").replace(
                "t_count = 4", "t_count = 2"
            )
        )
        run(cfg, str(tmp_path), mode="compare")
        for kind in ("entangled", "uncorrelated", "classical"):
            assert (tmp_path / f"spectrum_{kind}.csv").exists()

    def test_compare_classical_is_symmetric(self, tmp_path):
        # the classical baseline column must be magnitude-symmetric in omega
        cfg = parse_config(
            SMALL_SPECTRUM.replace("t_min = 0", "t_min = 300").replace(
                "t_count = 4", "t_count = 1"
            )
        )
        run(cfg, str(tmp_path), mode="compare")
        data = np.genfromtxt(
            tmp_path / "spectrum_classical.csv", delimiter=",", skip_header=2
        )
        mag = data[:, 4]
        assert np.max(np.abs(mag - mag[::-1])) < 1e-3 * mag.max()


class TestCli:
    @staticmethod
    def _write(tmp_path, text=SMALL_SPECTRUM):
        p = tmp_path / "run.ini"
        p.write_text(text)
        return str(p)

    def test_spectrum_success(self, tmp_path):
        cfg = self._write(tmp_path)
        out = tmp_path / "out"
        assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
        assert (out / "spectrum.csv").exists()
        assert (out / "effective_config.ini").exists()

    def test_homscan_success(self, tmp_path):
        cfg = self._write(
            tmp_path,
            "[scan]\nmode = homscan\ndt_min = -10\ndt_max = 10\ndt_count = 11\n"
            "t_fixed = 100\n",
        )
        out = tmp_path / "out"
        assert main(["homscan", "--config", cfg, "--out", str(out)]) == 0
        lines = (out / "homscan.csv").read_text().splitlines()
        assert lines[1] == "dT_fs,re,im,abs,envelope"
        assert len(lines) == 2 + 11

    def test_missing_config_file_exits_1(self, tmp_path):
        rc = main(
            ["spectrum", "--config", str(tmp_path / "nope.ini"), "--out", str(tmp_path)]
        )
        assert rc == 1

    def test_bad_config_exits_1(self, tmp_path, capsys):
        cfg = self._write(tmp_path, "[scan]\nmode = bogus\n")
        rc = main(["spectrum", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 1
        assert "config error" in capsys.readouterr().err

    def test_duplicate_key_exits_1(self, tmp_path):
        cfg = self._write(tmp_path, "[scan]\nt_max = 10\nt_max = 20\n")
        assert main(["spectrum", "--config", cfg, "--out", str(tmp_path / "o")]) == 1

    def test_unknown_mode_exits_1(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["teleport", "--out", str(tmp_path)])
        assert exc.value.code == 1

    def test_engine_override_recorded(self, tmp_path):
        cfg = self._write(
            tmp_path,
            SMALL_SPECTRUM.replace("omega_count = 21", "omega_count = 5").replace(
                "t_count = 4", "t_count = 1"
            ),
        )
        out = tmp_path / "out"
        rc = main(
            ["spectrum", "--config", cfg, "--out", str(out), "--engine", "numeric"]
        )
        assert rc == 0
        first = (out / "spectrum.csv").read_text().splitlines()[0]
        assert "engine=numeric" in first

    def test_threads_flag_does_not_change_output(self, tmp_path):
        cfg = self._write(tmp_path)
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        assert main(["spectrum", "--config", cfg, "--out", str(out1)]) == 0
        assert (
            main(
                ["spectrum", "--config", cfg, "--out", str(out2), "--threads", "3"]
            )
            == 0
        )
        # the provenance line hashes the effective config (worker count
        # included); the data rows must be bitwise identical
        rows1 = (out1 / "spectrum.csv").read_text().splitlines()[1:]
        rows2 = (out2 / "spectrum.csv").read_text().splitlines()[1:]
        assert rows1 == rows2
