import json

import numpy as np
import pytest

from ctcbeam.cli import main
from ctcbeam.io import read_field_map

# fast custom configuration: small diffracting packet, quick convergence
SMALL_CFG = """
name=cli_smoke
grid.ny=256
grid.dy=0.625
grid.nt=512
grid.dt=0.05859375
grid.snapshot_stride=64
initial.kind=gaussian
initial.y0=0.0
initial.sigma=4.0
ctc.y_out=-20.0
ctc.w=5.0
ctc.alpha_mod=0.5
run.max_iter=100
"""

TOY = "toy_single_mode"


@pytest.fixture
def small_cfg(tmp_path):
    path = tmp_path / "smoke.cfg"
    path.write_text(SMALL_CFG)
    return path


class TestPresetsCommand:
    def test_lists_all_presets(self, capsys):
        assert main(["presets"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert len(out) == 6
        assert any(line.startswith("fig2_diffraction:") for line in out)

    def test_extra_args_usage_error(self, capsys):
        assert main(["presets", "extra"]) == 2


class TestRunCommand:
    def test_unknown_preset_exit_2(self, tmp_path, capsys):
        assert main(["run", "fig9_nonsense", "--out", str(tmp_path / "o")]) == 2
        assert "fig2_diffraction" in capsys.readouterr().err

    def test_small_config_runs_and_writes_outputs(self, small_cfg, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", str(small_cfg), "--out", str(out)]) == 0
        for name in (
            "converged_density.ctcb",
            "reference_density.ctcb",
            "difference_map.ctcb",
            "convergence.json",
            "manifest.cfg",
        ):
            assert (out / name).exists(), name
        report = json.loads((out / "convergence.json").read_text())
        assert report["status"] == "converged"
        assert report["residuals"][-1] < 1e-12
        conv = read_field_map(out / "converged_density.ctcb")
        ref = read_field_map(out / "reference_density.ctcb")
        diff = read_field_map(out / "difference_map.ctcb")
        assert conv.shape == ref.shape == diff.shape == (9, 256)
        assert np.allclose(diff, conv - ref)

    def test_alpha_zero_override_single_iteration(self, small_cfg, tmp_path):
        out = tmp_path / "out"
        assert main(["run", str(small_cfg), "--out", str(out), "--set", "ctc.alpha_mod=0"]) == 0
        report = json.loads((out / "convergence.json").read_text())
        assert report["iterations"] == 1

    def test_bad_override_exit_2(self, small_cfg, tmp_path):
        assert main(["run", str(small_cfg), "--out", str(tmp_path / "o"),
                     "--set", "grid.nz=1"]) == 2

    def test_diverged_exit_3(self, tmp_path):
        out = tmp_path / "out"
        code = main(["run", TOY, "--out", str(out), "--set", "ctc.alpha_mod=1.5"])
        assert code == 3

    def test_max_iterations_exit_4(self, tmp_path):
        out = tmp_path / "out"
        code = main(["run", TOY, "--out", str(out),
                     "--set", "ctc.alpha_mod=0.9", "--set", "run.max_iter=5"])
        assert code == 4

    def test_blowup_exit_5(self, tmp_path):
        out = tmp_path / "out"
        code = main(["run", TOY, "--out", str(out), "--set", "initial.n0=1e30"])
        assert code == 5

    def test_csv_emission(self, small_cfg, tmp_path):
        out = tmp_path / "out"
        assert main(["run", str(small_cfg), "--out", str(out), "--csv"]) == 0
        assert (out / "converged_density.csv").exists()

    def test_determinism_byte_identical(self, small_cfg, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["run", str(small_cfg), "--out", str(a)]) == 0
        assert main(["run", str(small_cfg), "--out", str(b)]) == 0
        for name in ("converged_density.ctcb", "reference_density.ctcb", "difference_map.ctcb"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_manifest_round_trips(self, small_cfg, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["run", str(small_cfg), "--out", str(a)]) == 0
        assert main(["run", str(a / "manifest.cfg"), "--out", str(b)]) == 0
        assert (a / "manifest.cfg").read_bytes() == (b / "manifest.cfg").read_bytes()
        assert (a / "converged_density.ctcb").read_bytes() == (
            b / "converged_density.ctcb"
        ).read_bytes()


class TestSweepCommand:
    def test_phase_sweep_constructive_beats_destructive(self, tmp_path, capsys):
        out = tmp_path / "sweep"
        code = main([
            "sweep", TOY, "--param", "alpha_phase",
            "--values", f"0,{np.pi}", "--out", str(out),
        ])
        assert code == 0
        rows = (out / "summary.csv").read_text().strip().splitlines()
        assert len(rows) == 3  # header + 2 points
        phase0 = rows[1].split(",")
        phasepi = rows[2].split(",")
        assert float(phase0[4]) > float(phasepi[4])

    def test_empty_values_exit_2(self, tmp_path):
        assert main(["sweep", TOY, "--param", "alpha_mod",
                     "--values", "", "--out", str(tmp_path / "s")]) == 2

    def test_alpha_zero_single_point(self, tmp_path):
        out = tmp_path / "sweep"
        assert main(["sweep", TOY, "--param", "alpha_mod",
                     "--values", "0", "--out", str(out)]) == 0
        rows = (out / "summary.csv").read_text().strip().splitlines()
        assert len(rows) == 2
        assert rows[1].split(",")[2] == "1"  # one iteration

    def test_unsweepable_parameter_exit_2(self, tmp_path):
        assert main(["sweep", TOY, "--param", "initial.kind",
                     "--values", "1,2", "--out", str(tmp_path / "s")]) == 2

    def test_parallel_jobs_match_sequential(self, tmp_path):
        seq, par = tmp_path / "seq", tmp_path / "par"
        args = ["sweep", TOY, "--param", "alpha_mod", "--values", "0.2,0.4,0.6"]
        assert main(args + ["--out", str(seq)]) == 0
        assert main(args + ["--out", str(par), "--jobs", "3"]) == 0
        assert (seq / "summary.csv").read_text() == (par / "summary.csv").read_text()
