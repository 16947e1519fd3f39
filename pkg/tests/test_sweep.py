import numpy as np
import pytest

from sqcavity import ConfigError, SweepConfig, load_config
from sqcavity.cli import main
from sqcavity.sweep import (
    default_r_grid,
    run_bogoliubov_check,
    run_distribution,
    run_moments_sweep,
    run_wigner,
)
from conftest import squeezed_photon_numbers


def write_config(path, text):
    path.write_text(text)
    return str(path)


BASE_CONFIG = """
# empty-cavity moments sweep
mode = moments_sweep
r_values = 0, 0.3
atom_present = false
fock_cutoff = 25
"""


class TestConfigParsing:
    def test_round_trip(self, tmp_path):
        cfg = load_config(write_config(tmp_path / "sweep.cfg", BASE_CONFIG))
        assert cfg.mode == "moments_sweep"
        assert cfg.r_values == (0.0, 0.3)
        assert cfg.atom_present is False
        assert cfg.fock_cutoff == 25
        assert cfg.g0 == 15.0  # default untouched

    def test_unknown_key_rejected(self, tmp_path):
        path = write_config(tmp_path / "bad.cfg", "fock_cutof = 10\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_bad_boolean_rejected(self, tmp_path):
        path = write_config(tmp_path / "bad.cfg", "atom_present = maybe\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_default_grid(self):
        cfg = SweepConfig().validate()
        grid = default_r_grid()
        assert len(grid) == 31
        assert cfg.r_values == tuple(grid)
        assert grid[0] == 0.0 and grid[-1] == 1.5

    def test_distribution_default_r_values(self):
        cfg = SweepConfig(mode="distribution").validate()
        assert cfg.r_values == (0.25, 0.5, 1.0)

    def test_invalid_mode(self):
        with pytest.raises(ConfigError):
            SweepConfig(mode="plot_everything").validate()

    def test_negative_r_rejected(self):
        with pytest.raises(ConfigError):
            SweepConfig(r_values=(-0.1,)).validate()


class TestMomentsSweep:
    def test_vacuum_row(self, tmp_path):
        cfg = SweepConfig(
            r_values=(0.0,), atom_present=False, fock_cutoff=20,
            output_path=str(tmp_path / "m.csv"),
        ).validate()
        (row,) = run_moments_sweep(cfg)
        assert row["mean_n"] == pytest.approx(0.0, abs=1e-10)
        assert row["P0"] == pytest.approx(1.0, abs=1e-10)
        assert row["abs_aa"] == pytest.approx(0.0, abs=1e-10)
        assert row["rho_ee"] == 0.0

    def test_squeezed_row_values(self, tmp_path):
        cfg = SweepConfig(
            r_values=(1.0,), atom_present=False, fock_cutoff=90, guard=10,
            output_path=str(tmp_path / "m.csv"),
        ).validate()
        (row,) = run_moments_sweep(cfg)
        assert row["mean_n"] == pytest.approx(np.sinh(1.0) ** 2, abs=1e-6)
        assert row["P1"] < 1e-10

    def test_output_is_deterministic(self, tmp_path):
        out = tmp_path / "m.csv"
        cfg = SweepConfig(
            r_values=(0.0, 0.3), atom_present=False, fock_cutoff=25,
            output_path=str(out),
        ).validate()
        run_moments_sweep(cfg)
        first = out.read_bytes()
        run_moments_sweep(cfg)
        assert out.read_bytes() == first

    def test_header_echoes_resolved_config(self, tmp_path):
        out = tmp_path / "m.csv"
        cfg = SweepConfig(
            r_values=(0.2,), atom_present=False, fock_cutoff=25, output_path=str(out)
        ).validate()
        run_moments_sweep(cfg)
        header = [l for l in out.read_text().splitlines() if l.startswith("#")]
        keys = {line.split("=")[0].strip("# ") for line in header if "=" in line}
        assert keys >= {"mode", "r_values", "g0", "gamma", "kappa", "fock_cutoff",
                        "guard", "epsilon", "atom_present", "output_path"}


class TestDistribution:
    def test_normalization_per_file(self, tmp_path):
        cfg = SweepConfig(
            mode="distribution", r_values=(0.8,), atom_present=False,
            fock_cutoff=60, guard=10, output_path=str(tmp_path / "dist"),
        ).validate()
        data = run_distribution(cfg)
        res = data[0.8]
        assert res["probabilities"].sum() + res["tail_mass"] == pytest.approx(1.0, abs=1e-8)
        assert (tmp_path / "dist" / "distribution_r0.8.csv").exists()

    def test_matches_closed_form(self, tmp_path):
        cfg = SweepConfig(
            mode="distribution", r_values=(1.0,), atom_present=False,
            fock_cutoff=90, guard=10, output_path=str(tmp_path / "dist"),
        ).validate()
        probs = run_distribution(cfg)[1.0]["probabilities"]
        expected = squeezed_photon_numbers(1.0, probs.size)
        assert np.abs(probs - expected).max() < 1e-6

    def test_odd_population_grows_with_r(self, tmp_path):
        cfg = SweepConfig(
            mode="distribution", r_values=(0.25, 0.5, 1.0), g0=15.0, gamma=1.0,
            fock_cutoff=90, guard=10, output_path=str(tmp_path / "dist"),
        ).validate()
        data = run_distribution(cfg)
        odd_mass = [data[r]["probabilities"][1::2].sum() for r in (0.25, 0.5, 1.0)]
        assert odd_mass[0] < odd_mass[1] < odd_mass[2]
        assert all(m > 1e-3 for m in odd_mass)


class TestWignerMode:
    def test_grid_file_layout(self, tmp_path):
        cfg = SweepConfig(
            mode="wigner", r_values=(0.0,), atom_present=False, fock_cutoff=15,
            wigner_extent=3.0, wigner_points=21, output_path=str(tmp_path / "wg"),
        ).validate()
        grids = run_wigner(cfg)
        assert grids[0.0].values[10, 10] == pytest.approx(1 / np.pi, abs=1e-8)
        path = tmp_path / "wg" / "wigner_r0_empty.csv"
        rows = [l for l in path.read_text().splitlines() if not l.startswith("#")]
        assert len(rows) == 22  # axis row + 21 value rows
        assert all(len(r.split(",")) == 22 for r in rows)


class TestBogoliubovMode:
    def test_cross_frame_agreement(self, tmp_path):
        cfg = SweepConfig(
            mode="bogoliubov_check", r_values=(0.0, 0.5), g0=5.0, gamma=1.0,
            fock_cutoff=50, output_path=str(tmp_path / "bog.csv"),
        ).validate()
        rows = run_bogoliubov_check(cfg)
        assert all(row["passed"] for row in rows)
        assert rows[0]["discrepancy"] < 1e-12  # identical generators at r=0

    def test_nonzero_phase_unsupported(self, tmp_path):
        cfg = SweepConfig(
            mode="bogoliubov_check", r_values=(0.2,), phi=0.3,
            fock_cutoff=20, output_path=str(tmp_path / "bog.csv"),
        ).validate()
        from sqcavity import UnsupportedFrameError

        with pytest.raises(UnsupportedFrameError):
            run_bogoliubov_check(cfg)


class TestCli:
    def test_successful_run(self, tmp_path):
        cfg_path = write_config(tmp_path / "sweep.cfg", BASE_CONFIG)
        out = tmp_path / "out.csv"
        assert main(["--config", cfg_path, "--out", str(out)]) == 0
        assert out.exists()

    def test_flag_overrides_file(self, tmp_path):
        cfg_path = write_config(tmp_path / "sweep.cfg", BASE_CONFIG)
        out = tmp_path / "out.csv"
        assert main(["--config", cfg_path, "--r", "0.1", "--out", str(out)]) == 0
        body = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert len(body) == 2  # column header + one row

    def test_config_error_exit_code(self, tmp_path):
        bad = write_config(tmp_path / "bad.cfg", "mode = nonsense\n")
        assert main(["--config", bad]) == 2

    def test_truncation_error_exit_code(self, tmp_path):
        assert main([
            "--mode", "moments_sweep", "--no-atom", "--r", "1.2",
            "--cutoff", "20", "--out", str(tmp_path / "x.csv"),
        ]) == 4
        assert not (tmp_path / "x.csv").exists()  # no partial output

    def test_solver_error_exit_code(self, tmp_path):
        # bogoliubov mode at nonzero phase surfaces an unsupported-frame error
        assert main([
            "--mode", "bogoliubov_check", "--no-atom", "--r", "0.3", "--phi", "0.5",
            "--cutoff", "20", "--out", str(tmp_path / "b.csv"),
        ]) == 3
