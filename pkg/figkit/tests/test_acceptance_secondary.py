"""End-to-end acceptance: figkit sidecars on real qraman CSV outputs.

The figure kit talks to the simulator only through its CSV files, produced
here by invoking the ``qraman`` command line.
"""

import shutil
import subprocess

import numpy as np
import pytest

from figkit.cli import main

GAPS = (0.0591407535684438, 0.12941634734869867, 0.1885571009171425)

pytestmark = pytest.mark.skipif(
    shutil.which("qraman") is None, reason="qraman CLI not installed"
)


def run_qraman(mode, config_text, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text(config_text)
    out = tmp_path / "out"
    subprocess.run(
        ["qraman", mode, "--config", str(cfg), "--out", str(out)],
        check=True,
        capture_output=True,
    )
    return out


def test_spectrum_sidecar_lists_six_peaks(tmp_path):
    out = run_qraman(
        "spectrum",
        "[scan]\nmode = spectrum\nt_min = 550\nt_max = 650\nt_count = 3\n",
        tmp_path,
    )
    fig = tmp_path / "spectrum.png"
    rc = main(
        ["heatmap", "--in", str(out / "spectrum.csv"), "--value", "re", "--out", str(fig)]
    )
    assert rc == 0
    side = (tmp_path / "spectrum.png.stats.txt").read_text()
    peaks = [
        float(v)
        for v in side.split("peaks_omega_eV: ")[1].splitlines()[0].split(",")
    ]
    expected = sorted([g for g in GAPS] + [-g for g in GAPS])
    for e in expected:
        assert any(abs(p - e) <= 3e-3 for p in peaks), f"missing peak near {e}"


def test_homscan_sidecar_decay_matches_engine(tmp_path):
    out = run_qraman(
        "homscan",
        "[scan]\nmode = homscan\nomega_minus = 0.13\nt_fixed = 0\n"
        "dt_min = -75\ndt_max = 75\ndt_count = 601\n",
        tmp_path,
    )
    csv = out / "homscan.csv"
    fig = tmp_path / "hom.png"
    assert main(["delay-scan", "--in", str(csv), "--out", str(fig)]) == 0
    side = (tmp_path / "hom.png.stats.txt").read_text()
    fitted = float(side.split("decay_fs: ")[1].splitlines()[0])

    # reference decay from the engine's own envelope column: log-linear fit
    # over the positive-delay tail
    data = np.genfromtxt(csv, delimiter=",", skip_header=2)
    dt, env = data[:, 0], data[:, 4]
    tail = (dt > 0) & (env <= env.max() / np.e)
    reference = -1.0 / np.polyfit(dt[tail], np.log(env[tail]), 1)[0]
    assert abs(fitted - reference) / reference <= 0.05
