import math

import numpy as np
import pytest

from lrwp.config import parse_config
from lrwp.errors import AcceptanceViolation, AliasingError
from lrwp.runner import (
    COMPARISON_HEADER,
    OBSERVABLES_HEADER,
    SNAPSHOTS_HEADER,
    SWEEP_HEADER,
    run_analytic,
    run_momentum,
    run_sweep,
    run_validate,
    write_csv_atomic,
)

SMALL_GRID = "[grid]\nx_min = -20\nx_max = 20\nn = 256\ndt = 1e-3\nt_max = 0.5\noutput_every = 50\n"


def _read(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def _col(header, rows, name):
    i = header.index(name)
    return [row[i] for row in rows]


class TestFormatting:
    def test_seventeen_significant_digits(self, tmp_path):
        write_csv_atomic(tmp_path / "x.csv", ["a"], [[1.0 / 3.0]])
        cell = (tmp_path / "x.csv").read_text().splitlines()[1]
        assert cell == "3.3333333333333331e-01"

    def test_nan_and_negative_zero(self, tmp_path):
        write_csv_atomic(tmp_path / "x.csv", ["a", "b"], [[float("nan"), -0.0]])
        row = (tmp_path / "x.csv").read_text().splitlines()[1]
        assert row == "nan,0.0000000000000000e+00"

    def test_lf_endings(self, tmp_path):
        write_csv_atomic(tmp_path / "x.csv", ["a"], [[1.0], [2.0]])
        raw = (tmp_path / "x.csv").read_bytes()
        assert b"\r" not in raw


class TestAnalytic:
    def test_free_gaussian_width_column(self, tmp_path):
        cfg = parse_config(SMALL_GRID)
        run_analytic(cfg, tmp_path)
        header, rows = _read(tmp_path / "observables.csv")
        assert header == OBSERVABLES_HEADER
        T = 2.0
        for row in rows:
            t = float(row[0])
            dx = float(row[header.index("dx")])
            assert dx == pytest.approx(1.0 * math.sqrt(1 + (t / T) ** 2), abs=1e-12)

    def test_constant_force_center_column(self, tmp_path):
        cfg = parse_config("[force]\nkind = constant\namplitude = 1\n" + SMALL_GRID)
        run_analytic(cfg, tmp_path)
        header, rows = _read(tmp_path / "observables.csv")
        for row in rows:
            t = float(row[0])
            assert float(row[header.index("x_mean")]) == pytest.approx(
                0.5 * t * t, abs=1e-12
            )

    def test_plane_wave_snapshots_unit_modulus(self, tmp_path):
        cfg = parse_config("[packet]\nF0 = 0\np0 = 1.5\n" + SMALL_GRID)
        run_analytic(cfg, tmp_path)
        header, rows = _read(tmp_path / "snapshots.csv")
        assert header == SNAPSHOTS_HEADER
        for row in rows[:512]:
            prob = float(row[header.index("prob")])
            assert prob == pytest.approx(1.0, abs=1e-12)
        oh, orows = _read(tmp_path / "observables.csv")
        assert _col(oh, orows, "dx")[0] == "nan"
        assert float(_col(oh, orows, "p_mean")[-1]) == pytest.approx(1.5, abs=1e-12)

    def test_byte_identical_reruns(self, tmp_path):
        cfg = parse_config("[force]\nkind = constant\namplitude = 1\n" + SMALL_GRID)
        a, b = tmp_path / "a", tmp_path / "b"
        run_analytic(cfg, a)
        run_analytic(cfg, b)
        for name in ("observables.csv", "snapshots.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()


class TestValidate:
    CFG = "[force]\nkind = constant\namplitude = 1\n" + SMALL_GRID + "[run]\nmode = validate\n"

    def test_benchmark_passes(self, tmp_path):
        summary = run_validate(parse_config(self.CFG), tmp_path)
        assert summary.max_l2_ss < 1e-4
        assert summary.max_l2_cn < 1e-4
        assert summary.inv_drift < 1e-6
        assert summary.max_norm_dev < 1e-10
        header, rows = _read(tmp_path / "observables.csv")
        for cell in _col(header, rows, "norm"):
            assert abs(float(cell) - 1.0) < 1e-10

    def test_violation_still_writes_file(self, tmp_path):
        # a huge step makes the split-step global phase exceed the gate
        text = self.CFG.replace("dt = 1e-3", "dt = 5e-2").replace(
            "output_every = 50", "output_every = 5"
        )
        with pytest.raises(AcceptanceViolation, match="L2 error"):
            run_validate(parse_config(text), tmp_path)
        assert (tmp_path / "observables.csv").exists()


class TestMomentum:
    def test_constant_force_discrepancies(self, tmp_path):
        cfg = parse_config(
            "[force]\nkind = constant\namplitude = 1\n"
            "[grid]\nn = 1024\ndt = 1e-3\nt_max = 1.0\noutput_every = 500\n"
        )
        result = run_momentum(cfg, tmp_path)
        header, rows = _read(tmp_path / "comparison.csv")
        assert header == COMPARISON_HEADER
        assert float(rows[0][1]) < 1e-12  # t = 0: pure closed-form identity
        assert result["max_abs_diff"] < 1e-8

    def test_zero_force_discrepancies(self, tmp_path):
        cfg = parse_config("[grid]\nn = 1024\ndt = 1e-3\nt_max = 1.0\noutput_every = 250\n")
        result = run_momentum(cfg, tmp_path)
        assert result["max_abs_diff"] < 1e-10

    def test_aliasing_escalates_and_no_partial_file(self, tmp_path):
        cfg = parse_config("[packet]\nsigma = 0.02\n" + SMALL_GRID)
        with pytest.raises(AliasingError):
            run_momentum(cfg, tmp_path)
        assert not (tmp_path / "comparison.csv").exists()


class TestSweep:
    def test_dt_axis_order_two(self, tmp_path):
        cfg = parse_config(
            "[force]\nkind = constant\namplitude = 1\n"
            "[grid]\nn = 512\ndt = 1e-3\nt_max = 0.5\noutput_every = 50\n"
            "[run]\nmode = sweep\nsweep_axis = dt\nsweep_values = 2e-3, 1e-3, 5e-4\n"
            "sweep_mode = validate\n"
        )
        results = run_sweep(cfg, tmp_path, jobs=1)
        header, rows = _read(tmp_path / "sweep_summary.csv")
        assert header == SWEEP_HEADER
        errs = [float(r[header.index("final_l2_err_ss")]) for r in rows]
        assert 3.4 < errs[0] / errs[1] < 4.6
        assert 3.4 < errs[1] / errs[2] < 4.6
        assert all(r[-1] == "ok" for r in rows)
        assert (tmp_path / "dt=0.002" / "observables.csv").exists()

    def test_sigma_axis_width_column(self, tmp_path):
        cfg = parse_config(
            SMALL_GRID
            + "[run]\nmode = sweep\nsweep_axis = sigma\nsweep_values = 0.5, 1.0, 2.0\n"
            "sweep_mode = analytic\n"
        )
        run_sweep(cfg, tmp_path, jobs=2)
        for sigma in (0.5, 1.0, 2.0):
            header, rows = _read(tmp_path / f"sigma={sigma:g}" / "observables.csv")
            assert float(rows[0][header.index("dx")]) == pytest.approx(sigma, abs=1e-12)

    def test_f0_imag_axis_t_star_zeros(self, tmp_path):
        cfg = parse_config(
            "[packet]\nA0 = 1\nB0 = 0-1i\n" + SMALL_GRID
            + "[run]\nmode = sweep\nsweep_axis = F0_imag\nsweep_values = -0.5, -1, -2\n"
            "sweep_mode = analytic\n"
        )
        run_sweep(cfg, tmp_path, jobs=1)
        header, rows = _read(tmp_path / "sweep_summary.csv")
        for row in rows:
            assert float(row[header.index("t_star")]) == 0.0

    def test_failures_recorded_and_sweep_continues(self, tmp_path):
        cfg = parse_config(
            SMALL_GRID
            + "[run]\nmode = sweep\nsweep_axis = sigma\nsweep_values = -1, 1\n"
            "sweep_mode = analytic\n"
        )
        results = run_sweep(cfg, tmp_path, jobs=1)
        assert results[0][-1].startswith("error:")
        assert results[1][-1] == "ok"

    def test_threshold_violations_keep_their_metrics(self, tmp_path):
        # dt = 5e-2 completes but breaks the L2 gate; the sweep should still
        # report the measured errors instead of discarding the case
        cfg = parse_config(
            "[force]\nkind = constant\namplitude = 1\n"
            "[grid]\nn = 512\ndt = 1e-3\nt_max = 0.5\noutput_every = 10\n"
            "[run]\nmode = sweep\nsweep_axis = dt\nsweep_values = 5e-2, 1e-3\n"
            "sweep_mode = validate\n"
        )
        results = run_sweep(cfg, tmp_path, jobs=1)
        assert results[0][-1] == "acceptance_violation"
        # the offending L2 figure is preserved (Crank-Nicolson breaks first)
        assert max(results[0][2], results[0][3]) > 1e-4
        assert results[1][-1] == "ok"
