import json
import math
from fractions import Fraction

import pytest

from momsum import (ConfigError, GrowthRecord, SumResult, bivariate,
                    bivariate_from_dict, bivariate_to_dict, dumps_json, germ,
                    germ_from_dict, germ_to_dict, make_sequence,
                    sequence_from_dict, sequence_to_dict, series,
                    series_from_dict, series_to_dict, solve_main,
                    sum_result_to_csv, sum_result_to_dict, write_atomic)


class TestSequenceRoundTrip:
    def test_float_kind(self):
        m = make_sequence("gamma_gevrey", 12, s=1.5)
        back = sequence_from_dict(sequence_to_dict(m))
        assert back.kind == m.kind and back.N == m.N
        assert back.mode == "float"
        assert all(a == pytest.approx(b, rel=1e-15)
                   for a, b in zip(back.values, m.values))

    def test_exact_values_preserved(self):
        m = make_sequence("factorial_power", 20, s=2, mode="exact")
        d = sequence_to_dict(m)
        assert isinstance(d["values"][5], str)
        back = sequence_from_dict(d)
        assert back.mode == "exact"
        assert back.values == m.values

    def test_explicit_kind(self):
        m = make_sequence("explicit", 3, values=[1.0, 2.0, 6.0, 30.0])
        back = sequence_from_dict(sequence_to_dict(m))
        assert back.values == m.values

    def test_json_stable(self):
        m = make_sequence("factorial_power", 10, s=1)
        a = dumps_json(sequence_to_dict(m))
        b = dumps_json(sequence_to_dict(m))
        assert a == b
        json.loads(a)            # well-formed


class TestSeriesRoundTrip:
    def test_float_complex_coeffs(self):
        u = series([1.0, 2.0 - 3.0j, 0.5j], "z")
        d = series_to_dict(u)
        assert d["coeffs"][1] == [2.0, -3.0]
        back = series_from_dict(d)
        assert back.coeffs == u.coeffs and back.var == "z"

    def test_exact_fractions(self):
        u = series([Fraction(1, 3), Fraction(-2, 7)], "w", mode="exact")
        back = series_from_dict(series_to_dict(u))
        assert back.mode == "exact"
        assert back.coeffs == u.coeffs

    def test_mode_override(self):
        u = series([Fraction(1, 2)], "z", mode="exact")
        back = series_from_dict(series_to_dict(u), mode="float")
        assert back.mode == "float"
        assert back.coeffs[0] == 0.5

    def test_rejects_bad_entries(self):
        with pytest.raises(ConfigError):
            series_from_dict({"coeffs": [[1.0, 2.0, 3.0]], "var": "z"})
        with pytest.raises(ConfigError):
            series_from_dict({"coeffs": [[0.5, 0.0]]}, mode="exact")


class TestBivariateAndGerm:
    def test_bivariate_round_trip(self):
        u = bivariate([[Fraction(1), Fraction(2)],
                       [Fraction(3, 4), Fraction(0)]], ("eps", "z"),
                      mode="exact")
        back = bivariate_from_dict(bivariate_to_dict(u))
        assert back.coeffs == u.coeffs and back.vars == u.vars
        assert back.mode == "exact"

    def test_germ_round_trip(self):
        g = germ([1.0, -0.25], 2.5)
        back = germ_from_dict(germ_to_dict(g))
        assert back.series.coeffs == g.series.coeffs
        assert back.radius == 2.5


class TestSumResultOutput:
    def make_result(self):
        return SumResult(grid=(0.1 + 0j, 0.2j),
                         values=(0.5 + 0.25j, -1.0 + 0j),
                         err_est=(1e-12, 2e-12),
                         direction={"d": 0.0, "s": 1.0},
                         growth=GrowthRecord(True, 1.5, 0.9),
                         diagnostics={"method": "pade"})

    def test_dict_shape(self):
        d = sum_result_to_dict(self.make_result())
        assert d["grid"] == [[0.1, 0.0], [0.0, 0.2]]
        assert d["values"][0] == [0.5, 0.25]
        assert d["growth"] == {"ok": True, "C": 1.5, "K": 0.9}
        json.loads(dumps_json(d))

    def test_csv_shape(self):
        text = sum_result_to_csv(self.make_result())
        lines = text.strip().split("\n")
        assert lines[0] == "z_re,z_im,sum_re,sum_im,err_est"
        assert len(lines) == 3
        row = lines[1].split(",")
        assert float(row[0]) == 0.1 and float(row[2]) == 0.5


class TestWriteAtomic:
    def test_writes_and_replaces(self, tmp_path):
        p = tmp_path / "sub" / "x.json"
        write_atomic(str(p), "first\n")
        write_atomic(str(p), "second\n")
        assert p.read_text() == "second\n"
        # no temp droppings left behind
        assert [f.name for f in p.parent.iterdir()] == ["x.json"]
