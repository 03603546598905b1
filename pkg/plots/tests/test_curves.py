import matplotlib.pyplot as plt
import pytest

from nrplot import PlotDataError, build_panel_spec, plot_ratio_grid


def _write_aggregate(path, n0, rows=((10, 0.1), (11, 0.2))):
    lines = ["N_k,mean_ratio,count,stderr"]
    lines += [f"{n},{r:.6f},3,0.000000" for n, r in rows]
    path.write_text("\n".join(lines) + "\n")


def test_spec_groups_cells(tmp_path):
    for tau in ("1.5", "2.5"):
        for s0 in ("1", "5"):
            _write_aggregate(tmp_path / f"aggregate_{tau}_10_{s0}.csv", 10)
    spec = build_panel_spec(str(tmp_path), str(tmp_path / "out.png"))
    assert spec.taus == (1.5, 2.5)
    assert spec.n0s == (10,)
    panel = spec.panel(1.5, 10)
    assert [s.s0 for s in panel] == [1, 5]


def test_spec_ignores_other_files(tmp_path):
    _write_aggregate(tmp_path / "aggregate_2.5_10_1.csv", 10)
    (tmp_path / "trajectories_2.5_10_1.csv").write_text("run_id,k,N_k,S_k,ratio\n")
    spec = build_panel_spec(str(tmp_path), str(tmp_path / "out.png"))
    assert len(spec.cells) == 1


def test_spec_rejects_empty_dir(tmp_path):
    with pytest.raises(PlotDataError, match="no aggregate"):
        build_panel_spec(str(tmp_path), str(tmp_path / "out.png"))


def test_spec_rejects_missing_source(tmp_path):
    with pytest.raises(PlotDataError, match="no such file"):
        build_panel_spec(str(tmp_path / "nowhere"), str(tmp_path / "out.png"))


def test_spec_rejects_duplicate_cell(tmp_path):
    # two filenames that parse to the same (tau, n0, s0)
    _write_aggregate(tmp_path / "aggregate_2.5_10_1.csv", 10)
    _write_aggregate(tmp_path / "aggregate_2.50_10_1.csv", 10)
    with pytest.raises(PlotDataError, match="duplicate"):
        build_panel_spec(str(tmp_path), str(tmp_path / "out.png"))


def test_single_file_gives_single_panel(tmp_path):
    path = tmp_path / "aggregate_2.5_10_1.csv"
    _write_aggregate(path, 10)
    out = tmp_path / "single.png"
    spec = build_panel_spec(str(path), str(out))
    fig = plot_ratio_grid(spec)
    try:
        assert len(fig.axes) == 1
        assert out.exists() and out.stat().st_size > 0
    finally:
        plt.close(fig)


def test_header_only_csv_is_an_error_and_writes_nothing(tmp_path):
    path = tmp_path / "aggregate_2.5_10_1.csv"
    path.write_text("N_k,mean_ratio,count,stderr\n")
    out = tmp_path / "out.png"
    with pytest.raises(PlotDataError):
        build_panel_spec(str(path), str(out))
    assert not out.exists()


def test_grid_renders_panels_lines_and_bounds(tmp_path):
    for tau in ("1.5", "2.5", "3.5"):
        for n0 in ("10", "50"):
            for s0 in ("1", "5", "10"):
                _write_aggregate(tmp_path / f"aggregate_{tau}_{n0}_{s0}.csv",
                                 int(n0))
    out = tmp_path / "grid.png"
    spec = build_panel_spec(str(tmp_path), str(out))
    fig = plot_ratio_grid(spec)
    try:
        panels = [ax for ax in fig.axes if ax.get_title()]
        assert len(panels) == 6
        for ax in panels:
            assert len(ax.get_lines()) == 3
            assert ax.get_ylim() == (0.0, 1.0)
            legend = ax.get_legend()
            assert legend is not None
            labels = [t.get_text() for t in legend.get_texts()]
            assert labels == ["S0=1", "S0=5", "S0=10"]
        assert out.exists() and out.stat().st_size > 0
    finally:
        plt.close(fig)
