from __future__ import annotations

import json
from fractions import Fraction

import pytest

from multizero import experiments as ex
from multizero.bounds import BoundQuery


def cell_at(cells, i2, i1):
    return next(c for c in cells if (c.row, c.col) == (i2, i1))


class TestGridTables:
    def test_generate_examples(self):
        assert cell_at(ex.generate_table(ex.TABLES["t1"]), 4, 10).value == 23
        assert cell_at(ex.generate_table(ex.TABLES["t3"]), 5, 3).value == 876
        assert cell_at(ex.generate_table(ex.TABLES["t6"]), 3, 10).value == 4

    def test_improvement_examples(self):
        t2 = ex.improvement_table(ex.TABLES["t2"])
        assert cell_at(t2, 2, 2).value == 4
        assert cell_at(t2, 0, 0).value == 0
        assert cell_at(ex.improvement_table(ex.TABLES["t4"]), 0, 0).value == 108
        with pytest.raises(ValueError):
            ex.improvement_table(ex.TABLES["t1"])

    def test_trivial_cells_tagged(self):
        cells = ex.generate_table(ex.TABLES["t1"])
        trivial = [c for c in cells if c.tag == "trivial"]
        assert trivial and all(c.value == 25 for c in trivial)
        assert all((c.row, c.col) not in ex.expected_grid("t1") for c in trivial)

    @pytest.mark.parametrize("table_id", ["t1", "t2", "t3", "t4", "t6", "t6b"])
    def test_matches_published(self, table_id):
        spec = ex.TABLES[table_id]
        result = ex.check_grid(spec, ex.generate_table(spec))
        assert result.ok, result.mismatches
        assert result.compared == len(ex.expected_grid(table_id))

    def test_baseline(self):
        assert ex.baseline(BoundQuery((2, 2), 3, (5, 5))) == 6
        assert ex.baseline(BoundQuery((14, 14), 3, (5, 5))) == 25


class TestStatistics:
    def test_max_improvement_examples(self):
        assert ex.to_decimal(ex.max_improvement_stat(2, 2, 2), "truncate") == "0.250"
        assert ex.to_decimal(ex.max_improvement_stat(3, 2, 3), "truncate") == "0.375"

    @pytest.mark.slow
    def test_max_improvement_four_vars(self):
        assert ex.to_decimal(ex.max_improvement_stat(4, 5, 2), "truncate") == "0.307"

    def test_mean_improvement_examples(self):
        assert ex.to_decimal(ex.mean_improvement_stat(2, 3, 2), "truncate") == "0.217"
        assert ex.to_decimal(ex.mean_improvement_stat(3, 8, 2), "truncate") == "0.114"
        assert ex.to_decimal(ex.mean_improvement_stat(2, 2, 2), "truncate") == "0.363"

    def test_mean_gap_examples(self):
        assert abs(Fraction(ex.to_decimal(ex.mean_gap_stat(2, 2, 2), "ceil")) - Fraction("0.044")) <= Fraction(1, 1000)
        assert abs(Fraction(ex.to_decimal(ex.mean_gap_stat(2, 5, 3), "ceil")) - Fraction("0.057")) <= Fraction(1, 1000)

    @pytest.mark.slow
    def test_mean_gap_four_vars(self):
        got = Fraction(ex.to_decimal(ex.mean_gap_stat(4, 8, 2), "ceil"))
        assert abs(got - Fraction("0.029")) <= Fraction(1, 1000)

    def test_to_decimal(self):
        assert ex.to_decimal(Fraction(2, 3), "truncate") == "0.666"
        assert ex.to_decimal(Fraction(2, 3), "ceil") == "0.667"
        assert ex.to_decimal(Fraction(1, 4), "ceil") == "0.250"
        with pytest.raises(ValueError):
            ex.to_decimal(Fraction(1, 3), "nearest")

    def test_mean_improvement_reading(self):
        cells = [(2, q, r) for q in range(2, 6) for r in range(2, 5)]
        counts = ex.mean_improvement_readings(cells)
        assert counts["divide_by_r=True,floor=True"] == len(cells)
        assert max(counts.values()) == counts["divide_by_r=True,floor=True"]

    def test_question_mark_cells_unverifiable(self):
        cells = ex.generate_stat_table(ex.TABLES["t5"], [(2, 2, 2)])
        assert cells[0].tag == "computed"
        assert ex.expected_stat("t5")[(3, 8, 5)] is None

    def test_parallel_matches_serial(self):
        spec = ex.TABLES["t8"]
        chosen = [(2, q, r) for q in (2, 3, 4) for r in (2, 3)]
        assert ex.generate_stat_table(spec, chosen, workers=1) == ex.generate_stat_table(spec, chosen, workers=2)

    def test_worker_count(self, monkeypatch):
        monkeypatch.setenv("MULTIZERO_THREADS", "not-a-number")
        assert ex.worker_count() == 1
        monkeypatch.setenv("MULTIZERO_THREADS", "1")
        assert ex.worker_count() == 1

    def test_nontrivial_exponents(self):
        got = list(ex.nontrivial_exponents(2, 2, 2))
        assert got == sorted(got)
        assert all(a // 2 + b // 2 < 2 for a, b in got)
        # 4x4 box minus the 4 points with both coordinates >= 2
        assert len(got) == 12


class TestOutput:
    def test_write_grid_idempotent(self, tmp_path):
        spec = ex.TABLES["t1"]
        cells = ex.generate_table(spec)
        path = ex.write_table(spec, cells, tmp_path)
        assert path.name == "table_t1_r3_s5x5.csv"
        first = path.read_bytes()
        assert b"\r\n" not in first
        assert first.splitlines()[0] == b"i2,i1,value,tag"
        assert len(first.splitlines()) == 226
        ex.write_table(spec, cells, tmp_path)
        assert path.read_bytes() == first
        sidecar = json.loads(path.with_suffix(".json").read_text())
        assert sidecar["table_id"] == "t1" and sidecar["sizes"] == [5, 5]

    def test_write_stats(self, tmp_path):
        spec = ex.TABLES["t5"]
        cells = ex.generate_stat_table(spec, [(2, 2, 2), (2, 3, 2)])
        path = ex.write_table(spec, cells, tmp_path)
        lines = path.read_text().splitlines()
        assert lines[0] == "m,q,r,value,exact,rounding,tag"
        assert lines[1] == "2,2,2,0.250,1/4,truncate,computed"

    def test_filename_with_tail(self):
        assert ex.table_filename(ex.TABLES["t3"]) == "table_t3_r3_s6x6x6x6_tail3-5.csv"
