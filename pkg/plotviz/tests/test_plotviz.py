import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from plotviz import PlotSpec, SchemaError, load_csv, render
from plotviz.cli import main as cli_main

DIAG_COLUMNS = ("t,mass,energy,momentum,h1,morawetz,morawetz_I,err1,err2,err3,"
                "l6_accum,l8_inst,x_center,x_radius,xi_center,xi_radius,N_t")


def write_diagnostics_csv(path, frames=40):
    t = np.linspace(0.0, 4.0, frames)
    rows = []
    for tt in t:
        mass = 0.25
        energy = 0.031
        row = [tt, mass, energy, 0.0, 0.17, 1e-4 * tt, 9e-5 * tt,
               1e-12, 2e-12, -1e-12, 3e-6 * tt, 2e-6 / (1 + tt),
               0.01 * tt, 2.0 + 0.1 * tt, 0.0, 1.5, 1.5]
        rows.append(",".join(f"{v:.17g}" for v in row))
    path.write_text("# qnls-diagnostics v1\n" + DIAG_COLUMNS + "\n"
                    + "\n".join(rows) + "\n")


def write_sweep_csv(path, slope=-0.5, scales=(4, 8, 16, 32, 64, 128)):
    rows = [f"{s},{0.5 * s**slope:.17g}" for s in scales]
    path.write_text("# qnls-sweep v1\nscale,constant\n" + "\n".join(rows) + "\n")


class TestLoad:
    def test_missing_header_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("t,mass\n0,1\n")
        with pytest.raises(SchemaError):
            load_csv(p)

    def test_unknown_schema_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("# other-schema v9\nt,mass\n0,1\n")
        with pytest.raises(SchemaError):
            load_csv(p)

    def test_empty_csv_rejected(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("# qnls-diagnostics v1\n" + DIAG_COLUMNS + "\n")
        with pytest.raises(SchemaError):
            load_csv(p)

    def test_loads_diagnostics(self, tmp_path):
        p = tmp_path / "run.csv"
        write_diagnostics_csv(p)
        schema, columns, rows = load_csv(p)
        assert schema == "qnls-diagnostics v1"
        assert columns[0] == "t" and rows.shape == (40, 17)


class TestRender:
    def test_timeseries(self, tmp_path):
        p = tmp_path / "run.csv"
        write_diagnostics_csv(p)
        out = tmp_path / "fig.png"
        info = render(PlotSpec(p, "timeseries", ["mass", "energy"], out))
        assert out.exists() and out.stat().st_size > 0
        assert info["kind"] == "timeseries"

    def test_phase_track(self, tmp_path):
        p = tmp_path / "run.csv"
        write_diagnostics_csv(p)
        out = tmp_path / "track.png"
        render(PlotSpec(p, "phase-track", None, out))
        assert out.exists() and out.stat().st_size > 0

    def test_loglog_fit_annotates_true_slope(self, tmp_path):
        p = tmp_path / "sweep.csv"
        write_sweep_csv(p, slope=-0.5)
        out = tmp_path / "fit.png"
        info = render(PlotSpec(p, "loglog-fit", None, out))
        assert out.exists()
        assert info["slope"] == pytest.approx(-0.5, abs=1e-9)

    def test_missing_column_reports_diff(self, tmp_path):
        p = tmp_path / "run.csv"
        write_diagnostics_csv(p)
        with pytest.raises(SchemaError) as err:
            render(PlotSpec(p, "timeseries", ["mass", "vorticity"], tmp_path / "x.png"))
        assert "vorticity" in str(err.value) and "available" in str(err.value)

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(SchemaError):
            PlotSpec(tmp_path / "x.csv", "heatmap")

    def test_input_not_mutated_and_output_deterministic(self, tmp_path):
        p = tmp_path / "run.csv"
        write_diagnostics_csv(p)
        before = p.read_bytes()
        out1, out2 = tmp_path / "a.png", tmp_path / "b.png"
        render(PlotSpec(p, "timeseries", None, out1))
        render(PlotSpec(p, "timeseries", None, out2))
        assert p.read_bytes() == before
        assert out1.read_bytes() == out2.read_bytes()


class TestCli:
    def test_flags_interface(self, tmp_path, capsys):
        p = tmp_path / "sweep.csv"
        write_sweep_csv(p, slope=-0.5)
        out = tmp_path / "fit.png"
        code = cli_main(["plot", "--csv", str(p), "--kind", "loglog-fit",
                         "--out", str(out)])
        assert code == 0 and out.exists()
        assert "slope = -0.500" in capsys.readouterr().out

    def test_spec_file_interface(self, tmp_path):
        p = tmp_path / "run.csv"
        write_diagnostics_csv(p)
        spec = {"csv": str(p), "kind": "phase-track",
                "columns": ["N_t", "xi_center", "x_center"],
                "out": str(tmp_path / "t.png")}
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        assert cli_main(["plot", str(spec_path)]) == 0
        assert (tmp_path / "t.png").exists()

    def test_schema_mismatch_exit_code(self, tmp_path, capsys):
        p = tmp_path / "sweep.csv"
        write_sweep_csv(p)
        code = cli_main(["plot", "--csv", str(p), "--kind", "timeseries",
                         "--out", str(tmp_path / "x.png")])
        assert code == 2
        assert "not in schema" in capsys.readouterr().err

    def test_missing_args_exit_code(self, tmp_path):
        assert cli_main(["plot", "--csv", str(tmp_path / "x.csv")]) == 2


@pytest.mark.skipif(shutil.which("qnls") is None,
                    reason="qnls CLI not installed; end-to-end check skipped")
class TestEndToEnd:
    def test_renders_real_runner_output(self, tmp_path):
        config = tmp_path / "tiny.conf"
        config.write_text(
            "[scenario]\nname = viz-demo\nmu = +1\n\n[grid]\nn = 256\n"
            "length = 50.26548245743669\n\n[integrator]\ndt = 0.005\n"
            "t_end = 0.25\nsave_every = 5\n\n[initial]\npreset = gaussian\n"
            "amplitude = 0.4\n")
        proc = subprocess.run(["qnls", "run", str(config), "--out", str(tmp_path)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        csv_path = tmp_path / "viz-demo.csv"
        for kind, cols in (("timeseries", ["mass", "energy", "morawetz"]),
                           ("phase-track", ["N_t", "xi_center"])):
            out = tmp_path / f"{kind}.png"
            code = cli_main(["plot", "--csv", str(csv_path), "--kind", kind,
                             "--columns", ",".join(cols), "--out", str(out)])
            assert code == 0 and out.exists()
