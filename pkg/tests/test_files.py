import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biphoton_duality import analysis, files
from biphoton_duality.files import ConfigError, ParseError, parse_config, read_heatmap, write_heatmap
from biphoton_duality.grid import Axis, Curve, Field2D


def _write_and_read(tmp_path, field, quantity="tsi", normalization="peak"):
    p = tmp_path / "f.csv"
    write_heatmap(p, field, quantity, normalization)
    return p, read_heatmap(p)


class TestHeatmap:
    def test_layout(self, tmp_path):
        a1, a2 = Axis(0, 0.5, 3, "THz"), Axis(1, 0.25, 2, "THz")
        p, _ = _write_and_read(tmp_path, Field2D(a1, a2, np.arange(6.0).reshape(3, 2)))
        lines = p.read_text().splitlines()
        assert lines[0].startswith("# quantity=tsi unit=THz,THz normalization=peak")
        assert lines[1] == ",0.875,1.125"
        assert lines[2] == "-0.5,0,1"
        assert len(lines) == 5

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 30), st.integers(2, 30), st.floats(-50, 50), st.floats(1e-3, 3),
           st.integers(0, 2 ** 32 - 1), st.sampled_from(["THz", "ps", "nm"]))
    def test_byte_identical_round_trip(self, n1, n2, center, step, seed, unit):
        import tempfile
        from pathlib import Path
        rng = np.random.default_rng(seed)
        f = Field2D(Axis(center, step, n1, unit), Axis(-center, step * 1.7, n2, unit),
                    rng.random((n1, n2)))
        with tempfile.TemporaryDirectory() as d:
            p, q = Path(d) / "a.csv", Path(d) / "b.csv"
            write_heatmap(p, f, "tti")
            g, meta = read_heatmap(p)
            write_heatmap(q, g, meta["quantity"], meta["normalization"])
            assert p.read_bytes() == q.read_bytes()
            np.testing.assert_array_equal(g.values, f.values)
            assert g.axis_1 == f.axis_1 and g.axis_2 == f.axis_2

    def test_counts_are_integers(self, tmp_path):
        ax = Axis(1584, 0.5, 3, "nm")
        _, (g, meta) = _write_and_read(tmp_path, Field2D(ax, ax, np.arange(9).reshape(3, 3)),
                                       "scan_tsi", "counts")
        assert meta["normalization"] == "counts"
        assert g.values.dtype == np.int64
        assert g.axis_1.unit == "nm"

    def test_without_axis_header(self, tmp_path):
        p = tmp_path / "h.csv"
        p.write_text("# quantity=x unit=ps,ps normalization=peak\n,0,1,2\n0,1,2,3\n1,4,5,6\n")
        g, _ = read_heatmap(p)
        assert g.axis_1 == Axis(0.5, 1.0, 2, "ps")
        assert g.values[1, 2] == 6

    @pytest.mark.parametrize("body,line", [
        ("# unit=ps,ps\n,0,1\n0,1,x\n", 3),
        ("# unit=ps,ps\n,0,1\n0,1,2\n1,2\n", 4),
        ("# unit=ps,ps\nq,0,1\n0,1,2\n", 2),
        ("# unit=ps,ps\n,0,1,3\n0,1,2,3\n1,1,1,1\n", 2),
        ("# unit=ps,ps\n,0,1\n", 2),
    ])
    def test_parse_errors(self, tmp_path, body, line):
        p = tmp_path / "bad.csv"
        p.write_text(body)
        with pytest.raises(ParseError) as exc:
            read_heatmap(p)
        assert exc.value.line == line
        assert f"bad.csv:{line}:" in str(exc.value)


class TestJson:
    def test_six_significant_digits(self, tmp_path):
        r = analysis.WidthReport(1.23456789, 0.2, 2.7, 0.14, 4.3, 0.26, 0.18, 6.1)
        d = files.report_json(r)
        assert d["dnu_y"] == 1.23457
        assert set(analysis.WidthReport.WIDTHS + analysis.WidthReport.TBPS) <= set(d)
        files.write_json(tmp_path / "r.json", d)
        assert json.loads((tmp_path / "r.json").read_text()) == d

    def test_curves(self, tmp_path):
        ax = Axis(0, 1, 3, "THz")
        files.write_curves(tmp_path / "c.csv", {"m": Curve(ax, np.array([0.0, 1.0, 0.5]))})
        lines = (tmp_path / "c.csv").read_text().splitlines()
        assert lines[0] == "curve,unit,coordinate,value"
        assert lines[2] == "m,THz,0,1"


class TestConfig:
    def test_parse(self):
        cfg = parse_config("""
            # comment
            pump.bandwidth_nm = 8.1   # trailing
            pump.shape = "gaussian"
            crystal.label_mm = 30
            grid.n = 512
            flag.on = true
            """)
        assert cfg == {"pump": {"bandwidth_nm": 8.1, "shape": "gaussian"},
                       "crystal": {"label_mm": 30}, "grid": {"n": 512}, "flag": {"on": True}}

    @pytest.mark.parametrize("text,line", [("a.b = 1\na.b = 2\n", 2), ("a.b\n", 1),
                                           ("\n\nab = 1\n", 3), ("a.b.c = 1\n", 1)])
    def test_errors(self, text, line):
        with pytest.raises(ParseError) as exc:
            parse_config(text, "cfg")
        assert exc.value.line == line

    def test_config_error_names_key(self):
        assert "grid.n" in str(ConfigError("grid.n", "bad"))
