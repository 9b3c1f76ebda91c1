import filecmp

import numpy as np
import pytest

from figgen import (
    FiggenError,
    plot_error_surface,
    plot_heatmap_grid,
    plot_layout,
    plot_timeseries,
)
from figgen.cli import main
from conftest import write_snapshot


class TestTimeseriesFigure:
    def test_two_line_overlay(self, synthetic_run, tmp_path):
        out = tmp_path / "ts.png"
        plot_timeseries(
            [synthetic_run / "timeseries.csv", synthetic_run / "timeseries.csv"],
            out, labels=["controlled", "uncontrolled"],
        )
        assert out.stat().st_size > 0

    def test_empty_csv_fails(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("t,total\n")
        with pytest.raises(FiggenError):
            plot_timeseries([p], tmp_path / "ts.png")

    def test_label_count_mismatch(self, synthetic_run, tmp_path):
        with pytest.raises(FiggenError, match="labels"):
            plot_timeseries([synthetic_run / "timeseries.csv"], tmp_path / "f.png",
                            labels=["a", "b"])

    def test_svg_output(self, synthetic_run, tmp_path):
        out = tmp_path / "ts.svg"
        plot_timeseries([synthetic_run / "timeseries.csv"], out)
        assert out.read_text().startswith("<?xml")


class TestHeatmapGrid:
    def test_panels_with_overlays(self, synthetic_run, tmp_path):
        out = tmp_path / "grid.png"
        plot_heatmap_grid(
            sorted((synthetic_run / "snapshots").glob("*.csv")),
            synthetic_run / "trajectories.csv",
            [0.5, 1.0],
            out,
        )
        assert out.stat().st_size > 0

    def test_single_panel_no_trajectories(self, synthetic_run, tmp_path):
        out = tmp_path / "one.png"
        plot_heatmap_grid(
            [synthetic_run / "snapshots" / "t_1.csv"], None, None, out
        )
        assert out.stat().st_size > 0

    def test_zero_field_panel(self, tmp_path):
        p = write_snapshot(tmp_path / "z.csv", np.zeros((5, 5)), 0.0)
        out = tmp_path / "zero.png"
        plot_heatmap_grid([p], None, [0.0], out)
        assert out.stat().st_size > 0

    def test_missing_time_lists_available(self, synthetic_run, tmp_path):
        with pytest.raises(FiggenError, match="available times: 0.5, 1"):
            plot_heatmap_grid(
                sorted((synthetic_run / "snapshots").glob("*.csv")),
                None, [2.5], tmp_path / "x.png",
            )

    def test_time_outside_trajectory_timeline(self, synthetic_run, tmp_path):
        p = write_snapshot(tmp_path / "late.csv", np.ones((5, 5)), 9.0)
        with pytest.raises(FiggenError, match="timeline"):
            plot_heatmap_grid([p], synthetic_run / "trajectories.csv", [9.0],
                              tmp_path / "x.png")


class TestLayout:
    def test_layout_figure(self, synthetic_run, tmp_path):
        out = tmp_path / "layout.png"
        plot_layout(
            synthetic_run / "partition_initial.csv",
            synthetic_run / "summary.json",
            out,
            trajectory_path=synthetic_run / "trajectories.csv",
        )
        assert out.stat().st_size > 0

    def test_layout_without_trajectories(self, synthetic_run, tmp_path):
        out = tmp_path / "layout2.png"
        plot_layout(synthetic_run / "partition_initial.csv",
                    synthetic_run / "summary.json", out)
        assert out.stat().st_size > 0


class TestErrorSurface:
    def test_identical_inputs_zero_difference(self, tmp_path):
        rng = np.random.default_rng(5)
        vals = rng.random((9, 9))
        a = write_snapshot(tmp_path / "a.csv", vals, 0.5)
        b = write_snapshot(tmp_path / "b.csv", vals, 0.5)
        diff = plot_error_surface(a, b, tmp_path / "err.png")
        assert np.all(diff == 0.0)

    def test_difference_panel_values(self, tmp_path):
        a = write_snapshot(tmp_path / "a.csv", np.full((4, 4), 2.0), 1.0)
        b = write_snapshot(tmp_path / "b.csv", np.full((4, 4), 1.5), 1.0)
        diff = plot_error_surface(a, b, tmp_path / "err.png")
        assert np.all(diff == 0.5)

    def test_grid_mismatch(self, tmp_path):
        a = write_snapshot(tmp_path / "a.csv", np.zeros((4, 4)), 1.0)
        b = write_snapshot(tmp_path / "b.csv", np.zeros((5, 5)), 1.0)
        with pytest.raises(FiggenError, match="mismatch"):
            plot_error_surface(a, b, tmp_path / "err.png")


class TestDeterminism:
    def test_regeneration_is_byte_identical(self, synthetic_run, tmp_path):
        for ext in ("png", "svg"):
            a = tmp_path / f"a.{ext}"
            b = tmp_path / f"b.{ext}"
            plot_timeseries([synthetic_run / "timeseries.csv"], a)
            plot_timeseries([synthetic_run / "timeseries.csv"], b)
            assert filecmp.cmp(a, b, shallow=False), ext


class TestCli:
    def test_timeseries_command(self, synthetic_run, tmp_path, capsys):
        out = tmp_path / "fig.png"
        rc = main(["timeseries", str(synthetic_run / "timeseries.csv"),
                   "--out", str(out)])
        assert rc == 0
        assert out.is_file()
        assert str(out) in capsys.readouterr().out

    def test_error_exit_code(self, tmp_path, capsys):
        rc = main(["timeseries", str(tmp_path / "missing.csv"),
                   "--out", str(tmp_path / "f.png")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_unknown_kind(self):
        assert main(["sparkline", "--out", "x.png"]) == 1
