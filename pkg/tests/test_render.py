from __future__ import annotations

import pytest

from conftest import catalog
from fglnh.diagrams import parse_word, render_ascii, render_latex
from fglnh.errors import IndexOutOfRange, ParseError
from fglnh.nilhecke import build_generators, emit_presentation
from fglnh.render import LOCAL_LATEX, name_latex, presentation_latex, series_latex


def test_single_crossing():
    assert render_ascii(parse_word("d1", 2)) == "x1 --\\ /--\n      X\nx2 --/ \\--"


def test_single_dot():
    assert render_ascii(parse_word("x1", 1)) == "x1 ---o---"


def test_two_crossings_left_to_right():
    art = render_ascii(parse_word("d1 d1", 2)).splitlines()
    assert art[1].count("X") == 2
    assert art[0] == "x1 --\\ /--\\ /--"


def test_dot_then_crossing_order():
    top = render_ascii(parse_word("x1 d1", 2)).splitlines()[0]
    assert top.index("o") < top.index("\\")


def test_word_parsing():
    assert parse_word("∂1 x_2 D2", 3).word == (("d", 1), ("x", 2), ("d", 2))
    with pytest.raises(IndexOutOfRange):
        parse_word("d3", 3)
    with pytest.raises(ParseError):
        parse_word("y1", 3)


def test_word_operator_matches_product():
    g = build_generators(catalog("additive"), 3)
    assert (g.word("d1 x2 d2") - g.Dd(1) * g.X(2) * g.Dd(2)).is_zero()


def test_latex_diagram():
    src = render_latex(parse_word("x1 d1", 2))
    assert src.startswith("\\xy") and src.endswith("\\endxy")
    assert "\\bullet" in src and src.count("**@{-}") >= 6


def test_latex_names_and_series():
    assert name_latex("β") == "\\beta"
    assert name_latex("ε_d") == "\\varepsilon_{d}"
    assert name_latex("m3") == "m_{3}"
    p = emit_presentation(catalog("chi"))
    assert series_latex(p.t, LOCAL_LATEX[:2]) == "1 - \\beta x_{i+1} - \\alpha x_i x_{i+1}"
    block = presentation_latex(p)
    assert "r(x_i, x_{i+1}, x_{i+2}) &= -\\alpha" in block
    assert block.count("\\begin{align*}") == 2


def test_fraction_latex():
    p = emit_presentation(catalog("euler", 8))
    assert "\\frac{1}{2} \\varepsilon x_i^{2}" in series_latex(p.l, LOCAL_LATEX)
