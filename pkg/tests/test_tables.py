"""CSV/SVG emission checks: exact bytes, quoting, and plot structure."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grushin.errors import InvalidProblem
from grushin.tables import SweepTable, emit_csv, emit_svg, render_csv, render_svg


# ------------------------------------------------------------ validation


def test_row_width_mismatch_rejected():
    with pytest.raises(InvalidProblem):
        SweepTable(headers=("a", "b"), rows=((1.0,),))


def test_empty_headers_rejected():
    with pytest.raises(InvalidProblem):
        SweepTable(headers=(), rows=())


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_cells_rejected(bad):
    with pytest.raises(InvalidProblem):
        SweepTable(headers=("a",), rows=((bad,),))


def test_non_numeric_cells_rejected():
    with pytest.raises(InvalidProblem):
        SweepTable(headers=("a",), rows=(({"not": "a number"},),))
    with pytest.raises(InvalidProblem):
        SweepTable(headers=("a",), rows=((None,),))


def test_string_and_numpy_cells_accepted():
    table = SweepTable(
        headers=("shape", "value"),
        rows=(("disk", np.float64(1.5)), ("rect,angle", np.int64(3))),
    )
    assert len(table.rows) == 2


# ------------------------------------------------------------------- csv


def test_exact_csv_text():
    table = SweepTable(headers=("name", "count", "value"), rows=(("row,1", 2, 0.5),))
    expected = 'name,count,value\n"row,1",2,5.00000000000000000e-01\n'
    assert render_csv(table) == expected


def test_quote_escaping():
    table = SweepTable(headers=("label",), rows=(('say "hi"',),))
    assert render_csv(table) == 'label\n"say ""hi"""\n'


def test_header_only_table_renders():
    table = SweepTable(headers=("t", "value"), rows=())
    assert render_csv(table) == "t,value\n"


def test_integers_render_bare():
    table = SweepTable(headers=("n",), rows=((np.int32(7),), (8,)))
    assert render_csv(table) == "n\n7\n8\n"


def test_emit_csv_to_file_and_stdout(tmp_path, capsys):
    table = SweepTable(headers=("x",), rows=((1.0,),))
    target = tmp_path / "out.csv"
    emit_csv(table, target)
    assert target.read_bytes() == render_csv(table).encode()
    emit_csv(table, "-")
    assert capsys.readouterr().out == render_csv(table)


def test_render_deterministic():
    rows = tuple((float(i), math.sqrt(i + 1)) for i in range(5))
    t1 = SweepTable(headers=("a", "b"), rows=rows)
    t2 = SweepTable(headers=("a", "b"), rows=rows)
    assert render_csv(t1) == render_csv(t2)
    assert render_svg(t1) == render_svg(t2)


@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_float_cells_roundtrip_exactly(x):
    text = render_csv(SweepTable(headers=("v",), rows=((x,),)))
    value = float(text.splitlines()[1])
    assert value == x


# ------------------------------------------------------------------- svg


def test_svg_keyed_series():
    # first three columns numeric: one polyline per distinct key
    rows = tuple((s, t, s + t, 0.0, 0.0) for s in (1.0, 2.0, 3.0) for t in (0.5, 1.0))
    table = SweepTable(headers=("s", "t", "value", "ref", "dev"), rows=rows)
    svg = render_svg(table)
    assert svg.count("<polyline") == 3
    assert "s=1" in svg and "s=3" in svg
    assert svg.startswith("<svg ") and svg.rstrip().endswith("</svg>")


def test_svg_fallback_single_series():
    table = SweepTable(
        headers=("shape", "t", "value"),
        rows=(("disk", 1.0, 2.0), ("disk", 2.0, 3.0)),
    )
    svg = render_svg(table)
    assert svg.count("<polyline") == 1


def test_svg_empty_table_rejected():
    with pytest.raises(InvalidProblem):
        render_svg(SweepTable(headers=("a", "b"), rows=()))


def test_svg_needs_two_numeric_columns():
    table = SweepTable(headers=("a", "b"), rows=(("x", "y"),))
    with pytest.raises(InvalidProblem):
        render_svg(table)


def test_svg_constant_axis_handled():
    table = SweepTable(headers=("x", "y"), rows=((1.0, 5.0), (2.0, 5.0)))
    svg = render_svg(table)
    assert "<polyline" in svg


def test_emit_svg_to_file(tmp_path):
    table = SweepTable(headers=("x", "y"), rows=((0.0, 1.0), (1.0, 4.0)))
    target = tmp_path / "plot.svg"
    emit_svg(table, target)
    text = target.read_text()
    assert text.count("<polyline") == 1
    assert 'xmlns="http://www.w3.org/2000/svg"' in text
