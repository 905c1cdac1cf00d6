import json
import os
from pathlib import Path

import numpy as np
import pytest

from nyqmodes.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def assert_csv_equivalent(produced: Path, golden: Path, rel=1e-9):
    """Same table up to floating-point noise; formatting must round-trip."""
    got = produced.read_text().splitlines()
    want = golden.read_text().splitlines()
    assert got[0] == want[0], "header changed"
    assert len(got) == len(want), "row count changed"
    for g_line, w_line in zip(got[1:], want[1:]):
        g_cells, w_cells = g_line.split(","), w_line.split(",")
        assert len(g_cells) == len(w_cells)
        for g_cell, w_cell in zip(g_cells, w_cells):
            try:
                g_val, w_val = float(g_cell), float(w_cell)
            except ValueError:
                assert g_cell == w_cell
                continue
            tol = rel * max(1.0, abs(w_val))
            assert abs(g_val - w_val) <= tol, f"{g_cell} vs {w_cell}"
            # 17 significant digits: the written text names one exact double
            assert "%.17g" % g_val == g_cell


class TestSpectrumCommand:
    def test_default_run(self, tmp_path, capsys):
        code, out, err = run(["spectrum", "--out", str(tmp_path)], capsys)
        assert code == 0
        assert "402.457883473" in out  # 12 significant digits on stdout
        assert (tmp_path / "spectrum.csv").exists()
        assert (tmp_path / "spectrum_metadata.json").exists()
        assert "wrote" in err

    def test_matches_golden(self, tmp_path, capsys):
        code, _, _ = run(["spectrum", "--out", str(tmp_path)], capsys)
        assert code == 0
        assert_csv_equivalent(tmp_path / "spectrum.csv", GOLDEN / "spectrum.csv")

    def test_bitwise_repeatable(self, tmp_path, capsys):
        for sub in ("a", "b"):
            assert run(["spectrum", "--out", str(tmp_path / sub)], capsys)[0] == 0
        assert (tmp_path / "a/spectrum.csv").read_bytes() == (
            tmp_path / "b/spectrum.csv"
        ).read_bytes()

    def test_csv_uses_lf_only(self, tmp_path, capsys):
        run(["spectrum", "--out", str(tmp_path)], capsys)
        assert b"\r" not in (tmp_path / "spectrum.csv").read_bytes()

    def test_json_format(self, tmp_path, capsys):
        code, _, _ = run(
            ["spectrum", "--out", str(tmp_path), "--format", "json"], capsys
        )
        assert code == 0
        payload = json.loads((tmp_path / "spectrum.json").read_text())
        rows = payload["tables"]["spectrum"]
        assert len(rows) == 4
        assert rows[0]["localized"] is True
        assert abs(rows[0]["eigenvalue"] - 402.4578834734) < 1e-9
        meta = payload["metadata"]
        assert meta["config"]["grid"]["h"] == 0.1
        assert "version" in meta and "timestamp" in meta
        assert meta["max_residual"] < 1e-10

    def test_dotted_override(self, tmp_path, capsys):
        code, out, _ = run(
            ["spectrum", "--out", str(tmp_path), "--grid.h", "0.2"], capsys
        )
        assert code == 0
        # ceiling drops to 4/0.04 = 100
        top = float(out.splitlines()[1].split()[1])
        assert 100.0 < top < 103.0

    def test_env_var_out_dir(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("NYQMODES_OUT_DIR", str(tmp_path / "envdir"))
        code, _, _ = run(["spectrum"], capsys)
        assert code == 0
        assert (tmp_path / "envdir" / "spectrum.csv").exists()

    def test_config_file_plus_override(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text('{"potential": {"A": 6.0}, "k": 6}\n')
        code, out, _ = run(
            ["spectrum", "--config", str(cfg_path), "--out", str(tmp_path),
             "--k", "2"], capsys
        )
        assert code == 0
        assert len(out.strip().splitlines()) == 1 + 2  # header + k rows


class TestExitCodes:
    def test_bad_grid_exits_2(self, capsys):
        code, _, err = run(["spectrum", "--grid.h", "0.3"], capsys)
        assert code == 2
        assert "error" in err

    def test_unparseable_number_exits_2(self, capsys):
        assert run(["spectrum", "--potential.A", "big"], capsys)[0] == 2

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["spectrum", "--bogus", "1"])
        assert exc.value.code == 2

    def test_unknown_command_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["transmogrify"])
        assert exc.value.code == 2

    def test_solver_failure_exits_3(self, tmp_path, capsys):
        # a deep attractive well makes largest-magnitude selection ambiguous
        code, _, err = run(
            ["spectrum", "--out", str(tmp_path), "--potential.A", "-1000"], capsys
        )
        assert code == 3
        assert "solver error" in err

    def test_malformed_config_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        assert run(["spectrum", "--config", str(bad)], capsys)[0] == 2


class TestReproduceCommand:
    def test_fig1_files(self, tmp_path, capsys):
        code, out, _ = run(["reproduce", "fig1", "--out", str(tmp_path)], capsys)
        assert code == 0
        for name in ("fig1_summary.csv", "fig1_modes.csv", "fig1_carrier.csv",
                     "fig1_metadata.json"):
            assert (tmp_path / name).exists(), name
        carrier = (tmp_path / "fig1_carrier.csv").read_text().splitlines()
        assert carrier[0] == "n,x,psi"
        assert len(carrier) == 1 + 40  # the [-2, 2) window at h=0.1
        xs = [float(line.split(",")[1]) for line in carrier[1:]]
        assert xs[0] == -2.0 and xs[-1] < 2.0

    def test_fig1_modes_cover_ranks_1_and_4(self, tmp_path, capsys):
        run(["reproduce", "fig1", "--out", str(tmp_path)], capsys)
        rows = (tmp_path / "fig1_modes.csv").read_text().splitlines()[1:]
        ranks = {int(r.split(",")[1]) for r in rows}
        assert ranks == {1, 4}
        assert len(rows) == 2 * 320

    def test_fig2_covers_both_signs(self, tmp_path, capsys):
        code, _, _ = run(
            ["reproduce", "fig2", "--out", str(tmp_path), "--format", "json"], capsys
        )
        assert code == 0
        payload = json.loads((tmp_path / "fig2.json").read_text())
        summary = payload["tables"]["fig2_summary"]
        cases = [(r["case"], r["rank"]) for r in summary]
        assert cases == [("A=+3", 5), ("A=-3", 1), ("A=-3", 4), ("A=-3", 5)]
        assert not any(r["localized"] for r in summary)

    def test_bad_figure_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["reproduce", "fig9"])
        assert exc.value.code == 2


class TestPredictCommand:
    def test_table_reports_agreement(self, tmp_path, capsys):
        code, _, _ = run(
            ["predict", "--out", str(tmp_path), "--refine", "2"], capsys
        )
        assert code == 0
        rows = (tmp_path / "predict.csv").read_text().splitlines()
        assert rows[0] == ("rank,delta_lambda,delta_lambda_pred,delta_gap,"
                           "correlation,node_count,node_count_pred,nodes_match")
        first = rows[1].split(",")
        assert float(first[3]) < 1e-3  # rank-1 gap
        assert float(first[4]) > 0.999
        assert first[7] == "true"


class TestSweepCommand:
    def test_matches_golden(self, tmp_path, capsys):
        code, _, _ = run(
            ["sweep", "--param", "A", "--values", "1,3,6", "--out", str(tmp_path)],
            capsys,
        )
        assert code == 0
        assert_csv_equivalent(tmp_path / "sweep.csv", GOLDEN / "sweep.csv")

    def test_counts_and_monotone_flag(self, tmp_path, capsys):
        run(["sweep", "--param", "A", "--values", "1,3,6", "--out", str(tmp_path)],
            capsys)
        rows = (tmp_path / "sweep.csv").read_text().splitlines()[1:]
        counts = [int(r.split(",")[1]) for r in rows]
        assert counts == [2, 4, 6]
        meta = json.loads((tmp_path / "sweep_metadata.json").read_text())
        assert meta["monotone_ok"] is True

    def test_worker_count_does_not_change_output(self, tmp_path, capsys):
        for workers, sub in (("1", "a"), ("4", "b")):
            code, _, _ = run(
                ["sweep", "--param", "w", "--values", "0.25,0.5,1.0",
                 "--workers", workers, "--out", str(tmp_path / sub)], capsys)
            assert code == 0
        assert (tmp_path / "a/sweep.csv").read_bytes() == (
            tmp_path / "b/sweep.csv").read_bytes()

    def test_rows_keep_input_order(self, tmp_path, capsys):
        run(["sweep", "--param", "A", "--values", "6,1,3", "--out", str(tmp_path)],
            capsys)
        rows = (tmp_path / "sweep.csv").read_text().splitlines()[1:]
        assert [float(r.split(",")[0]) for r in rows] == [6.0, 1.0, 3.0]
        assert [int(r.split(",")[1]) for r in rows] == [6, 2, 4]

    def test_h_sweep_has_no_trend_expectation(self, tmp_path, capsys):
        code, _, _ = run(
            ["sweep", "--param", "h", "--values", "0.2,0.1", "--out", str(tmp_path)],
            capsys)
        assert code == 0
        meta = json.loads((tmp_path / "sweep_metadata.json").read_text())
        assert meta["monotone_ok"] is None

    def test_bad_values_exit_2(self, tmp_path, capsys):
        assert run(["sweep", "--param", "A", "--values", "1,zap"], capsys)[0] == 2


class TestWkbCommand:
    def test_in_band_mode(self, tmp_path, capsys):
        code, out, _ = run(["wkb", "--rank", "257", "--out", str(tmp_path)], capsys)
        assert code == 0
        row = (tmp_path / "wkb.csv").read_text().splitlines()[1].split(",")
        assert row[2] == "pair"
        assert float(row[3]) < 0.01

    def test_out_of_band_exits_2(self, tmp_path, capsys):
        code, _, err = run(["wkb", "--rank", "1", "--out", str(tmp_path)], capsys)
        assert code == 2
        assert "undersampled" in err
