import pytest

from coupled_array.cli import REPRO_HEADER, SWEEP_HEADER, fmt, main


def run_cli(*argv):
    return main(list(argv))


class TestNumberFormat:
    def test_nine_significant_fixed_digits(self):
        assert fmt(90.0) == "90.0000000"
        assert fmt(-0.7) == "-0.70000000"
        assert fmt(2.551789226) == "2.55178923"
        assert fmt(0.001) == "0.00100000000"
        assert fmt(float("nan")) == "nan"

    def test_no_scientific_notation(self):
        for value in (1e-5, 12345.678, 1e-12, 4e8):
            assert "e" not in fmt(value).lower()


class TestEval:
    def test_half_wavelength_pair(self, capsys):
        code = run_cli("eval", "--positions", "0,0.15", "--theta", "90")
        out = capsys.readouterr().out
        assert code == 0
        value = float(out.split("directivity: ")[1].splitlines()[0])
        assert value == pytest.approx(2.0, abs=1e-9)
        assert "norm_check: ok" in out

    def test_pair_at_072_wavelengths(self, capsys):
        code = run_cli("eval", "--positions", "0,0.216", "--theta", "90")
        out = capsys.readouterr().out
        assert code == 0
        value = float(out.split("directivity: ")[1].splitlines()[0])
        assert value == pytest.approx(2.55, abs=0.01)

    def test_malformed_positions_exit_2(self, capsys):
        code = run_cli("eval", "--positions", "0,banana")
        err = capsys.readouterr().err
        assert code == 2
        assert err.strip().splitlines()[0].startswith("error:")

    def test_infeasible_needs_flag(self, capsys):
        code = run_cli("eval", "--positions", "0,0.003", "--theta", "0")
        assert code == 2
        code = run_cli(
            "eval", "--positions", "0,0.003", "--theta", "0", "--allow-infeasible"
        )
        assert code == 0


class TestOptimize:
    def test_gs_equals_es_for_pair(self, tmp_path, capsys):
        args = ["--N", "2", "--theta", "60", "--dmax", "0.45"]
        assert run_cli("optimize", "--algo", "gs", "--out", str(tmp_path / "a"), *args) == 0
        assert run_cli("optimize", "--algo", "es", "--out", str(tmp_path / "b"), *args) == 0
        capsys.readouterr()
        row_a = (tmp_path / "a" / "optimize.csv").read_text().splitlines()[1]
        row_b = (tmp_path / "b" / "optimize.csv").read_text().splitlines()[1]
        # identical apart from the algorithm label and wall time
        cells_a, cells_b = row_a.split(","), row_b.split(",")
        assert cells_a[:2] == cells_b[:2]
        assert cells_a[3:7] == cells_b[3:7]
        assert cells_a[2] == "GS" and cells_b[2] == "ES"

    def test_header_and_trace(self, tmp_path, capsys):
        code = run_cli(
            "optimize",
            "--algo",
            "gsgd",
            "--N",
            "3",
            "--theta",
            "90",
            "--dmax",
            "0.6",
            "--out",
            str(tmp_path),
            "--trace",
        )
        capsys.readouterr()
        assert code == 0
        lines = (tmp_path / "optimize.csv").read_text().splitlines()
        assert lines[0] == SWEEP_HEADER
        assert len(lines) == 2
        trace = (tmp_path / "optimize_trace.csv").read_text().splitlines()
        assert trace[0] == "iteration,directivity,step_size"
        assert len(trace) >= 2

    def test_es_budget_exit_4(self, tmp_path, capsys):
        code = run_cli(
            "optimize",
            "--algo",
            "es",
            "--N",
            "5",
            "--dmax",
            "2.4",
            "--out",
            str(tmp_path),
        )
        err = capsys.readouterr().err
        assert code == 4
        assert "BudgetExceeded" in err

    def test_broadside_default_run_reaches_target(self, tmp_path, capsys):
        code = run_cli("optimize", "--algo", "gsgd", "--theta", "90", "--out", str(tmp_path))
        capsys.readouterr()
        assert code == 0
        row = (tmp_path / "optimize.csv").read_text().splitlines()[1]
        assert float(row.split(",")[4]) >= 6.8


class TestSweepCommand:
    def test_ulah_only_config(self, tmp_path, capsys):
        config = tmp_path / "sweep.toml"
        config.write_text(
            'algorithms = ["ULAH"]\n'
            "n_antennas = 5\n"
            "thetas_deg = [0.0, 30.0, 60.0, 90.0]\n"
            "apertures_m = [1.2]\n"
            f'output_dir = "{tmp_path}"\n'
        )
        assert run_cli("sweep", "--config", str(config)) == 0
        capsys.readouterr()
        lines = (tmp_path / "sweep.csv").read_text().splitlines()
        assert lines[0] == SWEEP_HEADER
        assert len(lines) == 5
        for line in lines[1:]:
            assert float(line.split(",")[4]) == pytest.approx(5.0, abs=1e-9)
        svg = (tmp_path / "sweep.svg").read_text()
        assert svg.startswith("<svg") and "ULAH" in svg

    def test_unknown_algorithm_exit_2(self, tmp_path, capsys):
        config = tmp_path / "sweep.toml"
        config.write_text('algorithms = ["MAGIC"]\nthetas_deg = [0.0]\n')
        code = run_cli("sweep", "--config", str(config))
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_config_exit_2(self, capsys):
        code = run_cli("sweep", "--config", "/nonexistent/sweep.toml")
        assert code == 2


class TestReproduceCommand:
    def test_table1(self, tmp_path, capsys):
        assert run_cli("reproduce", "table1", "--out", str(tmp_path)) == 0
        capsys.readouterr()
        lines = (tmp_path / "table1.csv").read_text().splitlines()
        assert lines[0] == "N,exact,approx"
        values = {
            int(line.split(",")[0]): (float(line.split(",")[1]), float(line.split(",")[2]))
            for line in lines[1:]
        }
        assert values[2][0] == pytest.approx(2.55, abs=0.01)
        assert values[5][0] == pytest.approx(6.88, abs=0.01)
        assert values[4][1] == pytest.approx(5.32, abs=0.01)

    def test_fig2_columns(self, tmp_path, capsys):
        assert run_cli("reproduce", "fig2", "--out", str(tmp_path)) == 0
        capsys.readouterr()
        lines = (tmp_path / "fig2.csv").read_text().splitlines()
        assert lines[0] == "n,d_wl,exact_sq_mag,approx_sq_mag,u"
        assert len(lines) == 1 + 2 * 151 * 3

    def test_fig4_series_present(self, tmp_path, capsys):
        assert run_cli("reproduce", "fig4", "--out", str(tmp_path)) == 0
        capsys.readouterr()
        lines = (tmp_path / "fig4.csv").read_text().splitlines()
        assert lines[0] == REPRO_HEADER
        algos = {line.split(",")[2] for line in lines[1:]}
        assert algos == {"GS-GD", "GS", "GD", "ULAH"}
        assert len(lines) == 1 + 91 * 4
        assert (tmp_path / "fig4.svg").exists()


class TestUnitRoundTrip:
    def test_meters_to_wavelengths_and_back(self):
        wavelength = 0.3
        for meters in (0.0, 0.216, 1.2, 0.03):
            wl = meters / wavelength
            assert abs(wl * wavelength - meters) <= 1e-12 * max(1.0, meters)
