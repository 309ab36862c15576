from __future__ import annotations

import json
import random

import pytest
import sympy as sp
from gmpy2 import mpq

from conftest import sympy_truncate, to_sympy
from fglnh.coefring import CoeffRing
from fglnh.errors import (
    BadConstantTerm,
    BeyondValidOrder,
    IndexOutOfRange,
    MismatchedArity,
    NonzeroConstantTerm,
    NotAUnit,
    NotDivisible,
)
from fglnh.series import DiffFraction, TruncSeries, df_normalize

B = CoeffRing.of(("β", -2))
ED = CoeffRing.of(("δ", -4), ("ε", -8))


def xs(n, trunc=8, ring=B):
    return TruncSeries.variables(ring, n, trunc)


def beta(n, trunc=8, ring=B):
    return TruncSeries.const(ring, n, ring.gen("β"), trunc)


def test_basic_arithmetic():
    x1, x2 = xs(2)
    assert (x1 + x2) * (x1 - x2) == x1 ** 2 - x2 ** 2
    F = x1 + x2 - beta(2) * x1 * x2
    assert (F + -(x1 + x2)).to_text() == "-β*x1*x2"


def test_product_truncation():
    (x,) = xs(1, trunc=3)
    p = (x ** 2) * (x ** 2)
    assert p.is_zero() and p.valid == 3


def test_coeff():
    x, y = xs(2)
    F = x + y - beta(2) * x * y
    assert F.coeff((1, 1)) == -B.gen("β")
    assert (x + y).coeff((2, 0)).is_zero()
    short = TruncSeries.var(B, 1, 1, 8).with_valid(4)
    with pytest.raises(BeyondValidOrder):
        short.coeff((5,))


def test_invert_unit():
    x1, x2 = xs(2)
    u = 1 - beta(2) * x2
    inv = u.invert_unit()
    assert (u * inv) == TruncSeries.one(B, 2, 8)
    assert inv.coeff((0, 3)) == B.gen("β") ** 3
    assert TruncSeries.one(B, 2).invert_unit() == TruncSeries.one(B, 2)
    with pytest.raises(NotAUnit):
        (x1 + x2).invert_unit()


def test_substitute_examples():
    x, y, z = xs(3)
    assoc = TruncSeries.variables(B, 2, 8)[0] + TruncSeries.variables(B, 2, 8)[1]
    assert assoc.substitute([x, y + z]) == x + y + z
    u, v = xs(2)
    G = u + v - beta(2) * u * v
    assert G.substitute({2: TruncSeries.zero(B, 2, 8)}) == u
    (t,) = xs(1, trunc=2)
    sq = (t ** 2).substitute([u.truncated(2) + v.truncated(2)])
    assert sq.to_text() == "x1^2 + 2*x1*x2 + x2^2"
    with pytest.raises(NonzeroConstantTerm):
        t.substitute([1 + u])


def test_swap():
    x1, x2 = xs(2)
    assert (x1 ** 2 * x2).swap(1) == x1 * x2 ** 2
    assert (x1 + x2).swap(1) == x1 + x2
    with pytest.raises(IndexOutOfRange):
        x1.swap(2)


def test_divide_linear_diff():
    x1, x2 = xs(2)
    assert (x1 ** 2 - x2 ** 2).divide_linear_diff(1, 2) == x1 + x2
    b = beta(2)
    got = (b * (x1 * x2 ** 2 - x1 ** 2 * x2)).divide_linear_diff(1, 2)
    assert got == -b * x1 * x2
    with pytest.raises(NotDivisible):
        x1.divide_linear_diff(1, 2)
    a = (x1 - x2) * (1 + x1 * x2)
    assert a.divide_linear_diff(1, 2).valid == a.valid - 1


def test_sqrt():
    (x,) = TruncSeries.variables(ED, 1, 8)
    d = TruncSeries.const(ED, 1, ED.gen("δ"), 8)
    e = TruncSeries.const(ED, 1, ED.gen("ε"), 8)
    Qx = 1 - 2 * d * x ** 2 + e * x ** 4
    root = Qx.sqrt()
    assert root * root == Qx
    X, dl, ep = sp.symbols("x δ ε")
    oracle = sympy_truncate(sp.sqrt(1 - 2 * dl * X ** 2 + ep * X ** 4), [X], 8)
    assert sp.expand(to_sympy(root, ["x"]) - oracle) == 0
    assert root.coeff((4,)) == (ED.gen("ε") - ED.gen("δ") ** 2) / 2
    assert TruncSeries.one(ED, 1).sqrt() == TruncSeries.one(ED, 1)
    with pytest.raises(BadConstantTerm):
        x.sqrt()


def test_df_normalize_examples():
    x1, x2, x3 = xs(3)
    f = DiffFraction(x1 ** 2 - x2 ** 2, [(1, 2)]).normalize()
    assert f.denom == () and f.num == x1 + x2
    g = DiffFraction(beta(3) * (x1 - x2), [(1, 2)]).normalize()
    assert g.denom == () and g.num == beta(3)
    h = DiffFraction(x1, [(1, 2)]).normalize()
    assert h.denom == ((1, 2),)


def test_df_orientation_is_canonical():
    x1, x2 = xs(2)
    f = DiffFraction(TruncSeries.one(B, 2, 8), [(2, 1)])
    assert f.denom == ((1, 2),)
    assert f.num == -TruncSeries.one(B, 2, 8)


def test_df_arithmetic_examples():
    one = TruncSeries.one(B, 3, 8)
    x1, x2, x3 = xs(3)
    a = DiffFraction(one, [(1, 2)])
    assert (a + DiffFraction(-one, [(1, 2)])).is_zero()
    prod = a * DiffFraction.of(x1 - x2)
    assert prod.denom == () and prod.num == one
    s = a + DiffFraction(one, [(2, 3)])
    assert sorted(s.denom) == [(1, 2), (2, 3)]
    assert s.num == x1 - x3


def test_mismatched_arity():
    with pytest.raises(MismatchedArity):
        xs(2)[0] + xs(3)[0]


def test_canonical_text_and_json_round_trip():
    x1, x2 = xs(2)
    t = 1 - beta(2) * x2 - TruncSeries.const(B, 2, B.gen("β") ** 2, 8) * x1 * x2 / 3
    assert t.to_text() == "1 - β*x2 - 1/3*β^2*x1*x2"
    blob = json.dumps(t.to_json(), ensure_ascii=False)
    back = TruncSeries.from_json(json.loads(blob), B, 2, 8)
    assert back == t and json.dumps(back.to_json(), ensure_ascii=False) == blob


# properties ---------------------------------------------------------------

def _random_series(rng, n=2, trunc=6, ring=B, const=None):
    terms = {}
    for _ in range(rng.randint(1, 8)):
        k = tuple(rng.randint(0, 3) for _ in range(n))
        if sum(k) <= trunc:
            terms[k] = ring.gen("β") ** rng.randint(0, 2) * mpq(rng.randint(-4, 4), rng.randint(1, 3))
    f = TruncSeries.from_terms(ring, n, terms, trunc)
    if const is not None:
        f = f - f.constant_term() + const
    return f


def test_divide_round_trip_random():
    rng = random.Random(1)
    for _ in range(100):
        q = _random_series(rng, n=3)
        i, j = rng.sample([1, 2, 3], 2)
        a = q.mul_linear_diff(i, j)
        back = a.divide_linear_diff(i, j)
        assert back.mul_linear_diff(i, j).agrees(a, a.valid - 1)
        assert back.valid == a.valid - 1


def test_invert_unit_round_trip_random():
    rng = random.Random(2)
    for _ in range(100):
        a = _random_series(rng, const=rng.choice([1, -2, mpq(1, 3)]))
        assert (a * a.invert_unit()).agrees(TruncSeries.one(B, 2, 6), a.valid)


def test_sqrt_round_trip_random():
    rng = random.Random(4)
    for _ in range(100):
        a = _random_series(rng, n=1, const=1)
        r = a.sqrt()
        assert (r * r).agrees(a, a.valid)


def test_swap_involution_random():
    rng = random.Random(8)
    for _ in range(100):
        a = _random_series(rng, n=3)
        assert a.swap(1).swap(1) == a and a.swap(2).swap(2) == a


def test_df_normalize_idempotent_and_value_preserving():
    rng = random.Random(9)
    for _ in range(100):
        num = _random_series(rng, n=3)
        extra = [tuple(rng.sample([1, 2, 3], 2)) for _ in range(rng.randint(0, 2))]
        for i, j in extra:
            num = num.mul_linear_diff(i, j)
        denom = [tuple(rng.sample([1, 2, 3], 2)) for _ in range(rng.randint(1, 3))]
        f = DiffFraction(num, denom)
        g = df_normalize(f)
        assert df_normalize(g).num == g.num and df_normalize(g).denom == g.denom
        # clearing denominators: g.num * (factors cancelled) = f.num
        cancelled = list(f.denom)
        for d in g.denom:
            cancelled.remove(d)
        lifted = g.num
        for i, j in cancelled:
            lifted = lifted.mul_linear_diff(i, j)
        assert lifted.agrees(f.num, g.num.valid)


def test_homogeneous_products():
    rng = random.Random(12)
    x1, x2 = xs(2, trunc=10)
    b = beta(2, trunc=10)
    for _ in range(100):
        # x-degree k with β^j gives topological degree 2k - 2j
        p = x1 ** rng.randint(0, 2) * b ** rng.randint(0, 2)
        q = x2 ** rng.randint(0, 2) * b ** rng.randint(0, 2)
        dp, dq = p.topological_degrees().pop(), q.topological_degrees().pop()
        assert (p * q).is_homogeneous(dp + dq)


def test_valid_order_bookkeeping():
    x1, x2 = xs(2, trunc=8)
    a = (x1 - x2) * (x1 + 2 * x2)
    q = a.divide_linear_diff(1, 2)
    assert q.valid == 7
    sq = ((x1 - x2) ** 2).divide_linear_diff(1, 2).divide_linear_diff(2, 1)
    assert sq == TruncSeries.const(B, 2, -1, 8).with_valid(6) and sq.valid == 6
    short = a.with_valid(5)
    assert (short + a).valid == 5
