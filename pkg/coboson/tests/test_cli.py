"""
Tests for the command-line entry point
"""
import csv
import json
import math

import pytest

from cli import main
from config import settings


def _read(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def test_approx_table(tmp_path):
    out = tmp_path / "approx.csv"
    assert main(["approx", "--gamma", "1", "--g", "2,20", "--out", str(out)]) == 0
    rows = _read(out)
    assert float(rows[0]["x0"]) == pytest.approx(2.0)
    assert float(rows[0]["mu"]) == pytest.approx(math.sqrt(3.0))
    assert rows[0]["valid"] == "true"
    assert float(rows[0]["zx_curvature"]) == pytest.approx(7.0 - 4.0 * math.sqrt(3.0))


def test_ratio_table_and_manifest(tmp_path):
    out = tmp_path / "ratio.csv"
    assert main(["ratio", "--zx", "0.1:0.9:5", "--N", "1,2,5", "--out", str(out)]) == 0
    rows = _read(out)
    assert list(rows[0]) == ["zx", "N", "ratio", "lower", "upper", "SL"]
    assert len(rows) == 15
    assert [row["N"] for row in rows[:3]] == ["1", "2", "5"]
    meta = json.loads((tmp_path / "ratio.csv.meta.json").read_text())
    assert meta["command"] == "ratio"
    assert meta["rows"] == 15
    assert meta["settings"]["tail_tol"] == settings.TAIL_TOL
    assert meta["tail_bound_max"] < 1e-6


def test_sweep_alias(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["ratio", "--zx-sweep", "0.01:0.99:200", "--N", "1,150", "--out", str(out)]) == 0
    rows = _read(out)
    assert len(rows) == 400
    assert float(rows[0]["zx"]) == pytest.approx(0.01)
    assert float(rows[-1]["zx"]) == pytest.approx(0.99)


def test_output_is_independent_of_workers(tmp_path):
    args = ["ratio", "--zx", "0.05:0.95:12", "--N", "1,3,8"]
    assert main(args + ["--workers", "1", "--out", str(tmp_path / "one.csv")]) == 0
    assert main(args + ["--workers", "3", "--out", str(tmp_path / "three.csv")]) == 0
    assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "three.csv").read_bytes()
    assert (tmp_path / "one.csv.meta.json").read_bytes() == (tmp_path / "three.csv.meta.json").read_bytes()


def test_physical_and_direct_parameters_are_exclusive(tmp_path):
    code = main(["ratio", "--gamma", "1", "--g", "2", "--zx", "0.5", "--N", "1", "--out", str(tmp_path / "x.csv")])
    assert code == 2
    assert not (tmp_path / "x.csv").exists()


def test_exit_codes(tmp_path, monkeypatch):
    assert main(["spectrum", "--zx", "0.9999", "--zy", "0.9999", "--out", str(tmp_path / "s.csv")]) == 4
    assert main(["ratio", "--zx", "1.0", "--N", "1", "--out", str(tmp_path / "r.csv")]) == 2
    monkeypatch.setattr(settings, "DPS_BUDGET", 60)
    assert main(["chi", "--zx", "0.3", "--N", "20", "--method", "newton", "--out", str(tmp_path / "c.csv")]) == 3


def test_chi_partition_rows(tmp_path):
    out = tmp_path / "chi.csv"
    assert main(["chi", "--zx", "0.5", "--N", "3", "--method", "partition", "--out", str(out)]) == 0
    rows = _read(out)
    assert [row["n"] for row in rows] == ["0", "1", "2", "3"]
    assert float(rows[2]["chi"]) == pytest.approx(2.0 / 3.0)


def test_dos_writes_fit_summary(tmp_path):
    out = tmp_path / "dos.csv"
    assert main(["dos", "--zx", "0.1,0.6", "--N", "10", "--fit", "fd,be", "--out", str(out)]) == 0
    rows = _read(out)
    assert [row["j"] for row in rows[-41:]] == [str(j) for j in range(41)]
    fits = _read(tmp_path / "dos_fits.csv")
    assert [row["model"] for row in fits] == ["FD", "BE", "FD", "BE"]
    assert (tmp_path / "dos_fits.csv.meta.json").exists()


def test_counting_defaults_window_to_pair_count(tmp_path):
    out = tmp_path / "counting.csv"
    assert main(["counting", "--zx", "0.5", "--N", "4", "--out", str(out)]) == 0
    rows = _read(out)
    assert {row["t"] for row in rows} == {"4"}
    assert math.fsum(float(row["P"]) for row in rows) == pytest.approx(1.0)


def test_density_and_peaks(tmp_path):
    out = tmp_path / "density.csv"
    args = ["density", "--gamma", "1", "--g", "20", "--N", "2", "--points", "512", "--no-validate", "--out", str(out)]
    assert main(args) == 0
    assert len(_read(out)) == 512
    peaks = _read(tmp_path / "density_peaks.csv")
    assert peaks[0]["regime"] == "Wigner"
    assert peaks[0]["peaks"] == "4"


def test_figure_two(tmp_path):
    assert main(["figure", "--preset", "2", "--out", str(tmp_path)]) == 0
    rows = _read(tmp_path / "fig2_populations.csv")
    assert len(rows) == 2 * 50 * 9
    meta = json.loads((tmp_path / "fig2_populations.csv.meta.json").read_text())
    assert meta["sum_residual_max"] <= 1e-8


def test_figure_four(tmp_path):
    assert main(["figure", "--preset", "4", "--out", str(tmp_path)]) == 0
    variance = _read(tmp_path / "fig4_variance.csv")
    values = [float(row["variance"]) for row in variance]
    assert len(values) == 19
    assert all(b > a for a, b in zip(values, values[1:]))
    assert (tmp_path / "fig4_counting.csv").exists()
    assert (tmp_path / "fig4_ratio.csv").exists()


def test_figure_one_respects_bounds(tmp_path):
    assert main(["figure", "--preset", "1", "--out", str(tmp_path)]) == 0
    rows = _read(tmp_path / "fig1_ratio.csv")
    assert len(rows) == 200 * 7
    for row in rows:
        ratio, lower, upper = float(row["ratio"]), float(row["lower"]), float(row["upper"])
        assert max(0.0, lower) - 1e-10 <= ratio <= upper + 1e-10


@pytest.mark.slow
def test_figure_five(tmp_path):
    assert main(["figure", "--preset", "5", "--out", str(tmp_path)]) == 0
    peaks = {(row["g"], row["N"]): row for row in _read(tmp_path / "fig5_peaks.csv")}
    assert peaks[("20", "3")]["regime"] == "Wigner"
    assert peaks[("0.01", "3")]["regime"] == "Friedel"
    meta = json.loads((tmp_path / "fig5_ratio.csv.meta.json").read_text())
    assert set(meta["markers"]) == {"zx_curvature", "zx_widths"}


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["teleport"])


def test_entropy_to_stdout(capsys):
    assert main(["entropy", "--zx", "0.5", "--alpha", "2,inf"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "zx,SL,SvN,S_2,S_inf,Smin,Smax,schmidt_number"
    fields = lines[1].split(",")
    assert fields[0] == "0.5"
    assert fields[6] == "inf"
    assert float(fields[7]) == pytest.approx(3.0)
