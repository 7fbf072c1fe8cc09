import math

import pytest

from trisep.errors import ConfigError
from trisep.sweeps import Axis, csv_text, fmt, grid_points, ordered_map


def test_fmt_twelve_significant_digits():
    assert fmt(2.52) == "2.52000000000e+00"
    assert fmt(-1.0 / 3.0) == "-3.33333333333e-01"
    assert fmt(math.inf) == "inf"
    assert fmt(-math.inf) == "-inf"
    assert fmt(math.nan) == "nan"
    assert fmt(True) == "1"
    assert fmt(False) == "0"
    assert fmt(7) == "7"
    assert fmt("biseparable") == "biseparable"


def test_axis_parse_and_validation():
    axis = Axis.parse("eta0p:-2:2:101")
    assert axis.name == "eta0p" and axis.count == 101
    vals = axis.values()
    assert vals[0] == -2.0 and vals[-1] == 2.0
    with pytest.raises(ConfigError):
        Axis.parse("bogus:0:1:5")
    with pytest.raises(ConfigError):
        Axis.parse("eta0p:0:1")
    with pytest.raises(ConfigError):
        Axis.parse("eta0p:1:0:5")
    with pytest.raises(ConfigError):
        Axis.parse("eta0p:0:1:1")


def test_grid_points_row_major():
    pts = grid_points([Axis("eta0p", 0.0, 1.0, 2), Axis("eta1p", 0.0, 2.0, 3)])
    assert pts == [(0.0, 0.0), (0.0, 1.0), (0.0, 2.0),
                   (1.0, 0.0), (1.0, 1.0), (1.0, 2.0)]
    with pytest.raises(ConfigError):
        grid_points([])


def test_csv_text_layout():
    text = csv_text(("x", "label"), [(1.5, "ok"), (math.nan, "bad")])
    lines = text.split("\n")
    assert lines[0] == "x,label"
    assert lines[1] == "1.50000000000e+00,ok"
    assert lines[2] == "nan,bad"
    assert text.endswith("\n")


def test_ordered_map_is_schedule_independent():
    def square(x):
        return x * x

    items = list(range(50))
    assert ordered_map(square, items, jobs=1) == ordered_map(square, items, jobs=8)
