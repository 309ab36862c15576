from __future__ import annotations

import functools
from pathlib import Path

import pytest
import sympy as sp

from fglnh.fgl import fgl_catalog
from fglnh.series import TruncSeries

DATA = Path(__file__).parent / "data"


@functools.lru_cache(maxsize=None)
def catalog(name: str, trunc: int = 10):
    return fgl_catalog(name, trunc)


@pytest.fixture
def data_dir() -> Path:
    return DATA


def sym(name: str) -> sp.Symbol:
    return sp.Symbol(name)


def to_sympy(f: TruncSeries, names=None) -> sp.Expr:
    """Exact sympy expression of a truncated series (independent oracle side)."""
    n = f.nvars
    xs = [sym(v) for v in (names or [f"x{k}" for k in range(1, n + 1)])]
    ps = [sym(p) for p in f.ring.names]
    out = sp.Integer(0)
    for key, c in f.sorted_items():
        term = sp.Rational(int(c.numerator), int(c.denominator))
        for v, e in zip(xs + ps, key):
            term *= v ** e
        out += term
    return sp.expand(out)


def sympy_truncate(expr: sp.Expr, xs, D: int) -> sp.Expr:
    """Taylor expansion of ``expr`` in the variables ``xs`` through total degree D."""
    t = sp.Symbol("_t")
    scaled = expr.subs({x: t * x for x in xs}, simultaneous=True)
    ser = sp.series(scaled, t, 0, D + 1).removeO()
    return sp.expand(ser.subs(t, 1))


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
