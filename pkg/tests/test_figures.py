import numpy as np
import pytest

from tracedist.errors import DomainError
from tracedist.figures import FIGURES, reproduce, sweep, write_csv


def column_index(table, name):
    return table.columns.index(name)


class TestSweepTables:
    def test_fig1_top_columns_and_endpoint(self):
        table = sweep("fig1_top", grid=3)
        assert table.columns == (
            "nbar", "d_lanczos_l10", "d_oracle_c100", "fvg_lower", "fvg_upper",
            "variational", "steps", "breakdown_step",
        )
        first = table.rows[0]
        assert first[0] == 0.0
        assert abs(first[1]) <= 1e-10  # identical states at nbar = 0
        for row in table.rows:
            d_l, d_o = row[1], row[2]
            assert d_l == pytest.approx(d_o, abs=1e-4)
            assert row[3] - 1e-8 <= d_o <= row[4] + 1e-8
            assert row[5] <= d_o + 1e-8

    def test_fig1_bottom_endpoints(self):
        table = sweep("fig1_bottom", grid=3)
        rows = table.rows
        assert abs(rows[0][1]) <= 1e-10
        expect = np.sqrt(1.0 - (1.0 / np.cosh(0.5)) ** 10)
        assert rows[-1][1] == pytest.approx(expect, abs=1e-6)

    def test_fig2_oracle_agreement(self):
        table = sweep("fig2", grid=3)
        for tag in ("p2plus", "p4minus"):
            i = column_index(table, f"d_lanczos_{tag}")
            j = column_index(table, f"d_oracle_{tag}")
            for row in table.rows:
                assert row[i] == pytest.approx(row[j], abs=1e-4)

    def test_fig3_top_soundness(self):
        table = sweep("fig3_top", grid=3)
        for tag in ("r0p05", "r0p3", "r1p5"):
            i = column_index(table, f"lb_halfsum_{tag}")
            j = column_index(table, f"d_oracle_{tag}")
            k = column_index(table, f"lb_maxabs_{tag}")
            for row in table.rows:
                assert row[i] <= row[j] + 1e-6
                assert row[k] <= row[i] + 1e-10

    def test_fig3_bottom_endpoints(self):
        table = sweep("fig3_bottom", grid=3)
        assert table.rows[0][1] > 0.1  # eta = 0: squashed vs squeezed products differ
        # eta = 1 collapses both states to the vacuum
        assert abs(table.rows[-1][1]) <= 1e-10

    def test_fig4_soundness(self):
        table = sweep("fig4", grid=3)
        for p in (2, 8):
            i = column_index(table, f"lb_halfsum_p{p}")
            j = column_index(table, f"d_oracle_p{p}")
            for row in table.rows:
                assert row[i] <= row[j] + 1e-6

    def test_unknown_figure(self):
        with pytest.raises(DomainError):
            sweep("fig9")


def test_reproduce_writes_deterministic_csv(tmp_path):
    path1 = reproduce("fig1_top", str(tmp_path / "a"), grid=4)
    path2 = reproduce("fig1_top", str(tmp_path / "b"), grid=4)
    b1 = open(path1, "rb").read()
    b2 = open(path2, "rb").read()
    assert b1 == b2
    header = b1.decode().splitlines()[0]
    assert header.startswith("# nbar,")
    assert len(b1.decode().splitlines()) == 5


def test_csv_formatting_round_trips_doubles(tmp_path):
    table = sweep("fig1_top", grid=3)
    path = tmp_path / "t.csv"
    write_csv(table, str(path))
    lines = path.read_text().splitlines()
    parsed = [float(x) for x in lines[1].split(",")]
    assert parsed[1] == table.rows[0][1]  # 17 significant digits: lossless


def test_all_figures_enumerate():
    assert set(FIGURES) == {
        "fig1_top", "fig1_bottom", "fig2", "fig3_top", "fig3_bottom", "fig4"
    }
