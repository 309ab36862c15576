from __future__ import annotations

import random
from fractions import Fraction

import pytest
from gmpy2 import mpq

from fglnh.coefring import CoeffElem, CoeffRing, Param, to_q
from fglnh.errors import MismatchedRings, NotDegreeZero, NotInvertible, ParseError

R = CoeffRing.of(("α", -4), ("β", -2))
DUAL = CoeffRing.of(("ε_d", 0, 2))


def test_mul_beta_beta():
    b = R.gen("β")
    assert b * b == b ** 2
    assert str(b * b) == "β^2"


def test_dual_number_square_vanishes():
    e = DUAL.gen("ε_d")
    assert (1 + e) * (1 - e) == DUAL.one()


def test_add_cancels_to_empty():
    z = R.const("2/3") + R.const(Fraction(-2, 3))
    assert z.is_zero() and z.terms == {}


def test_homogeneity():
    a, b = R.gen("α"), R.gen("β")
    assert (b ** 2).is_homogeneous(-4)
    assert (a * b).is_homogeneous(-6)
    assert not (1 + b).is_homogeneous(0)
    assert R.zero().is_homogeneous(-10) and R.zero().is_homogeneous(0)


def test_invert_degree_zero():
    assert R.const(2).invert_degree_zero() == R.const(mpq(1, 2))
    e = DUAL.gen("ε_d")
    assert (1 + e).invert_degree_zero() == 1 - e
    with pytest.raises(NotDegreeZero):
        R.gen("β").invert_degree_zero()
    with pytest.raises(NotInvertible):
        DUAL.gen("ε_d").invert_degree_zero()


def test_specialize_examples():
    A = CoeffRing.of(("a", 0))
    b = R.gen("β")
    target = CoeffRing.of(("α", -4), ("a", 0))
    got = (b ** 2).specialize({"β": 1 - target.gen("a")}, target)
    assert got == (1 - target.gen("a")) ** 2
    M = CoeffRing.of(("m1", -2))
    B = CoeffRing.of(("β", -2))
    assert M.gen("m1").specialize({"m1": B.gen("β") / 2}, B) == B.gen("β") * mpq(1, 2)
    noalpha = CoeffRing.of(("β", -2))
    assert R.gen("α").specialize({"α": 0}, noalpha).is_zero()
    assert A.gen("a").specialize({}, A) == A.gen("a")


def test_mismatched_rings():
    with pytest.raises(MismatchedRings):
        R.gen("β") + DUAL.gen("ε_d")
    with pytest.raises(MismatchedRings):
        R.index("γ")


def test_param_validation():
    with pytest.raises(ParseError):
        Param("β", -3)
    with pytest.raises(ParseError):
        Param("not a name", 2)
    with pytest.raises(ParseError):
        CoeffRing.of(("β", -2), ("β", -2))


def test_to_q_rejects_floats():
    assert to_q("3/6") == mpq(1, 2)
    with pytest.raises(TypeError):
        to_q(0.5)
    with pytest.raises(ParseError):
        to_q("1/2/3")


def test_text_form():
    a, b = R.gen("α"), R.gen("β")
    assert str(b ** 2 * mpq(1, 2) - a) == "-α + 1/2*β^2"
    assert str(R.zero()) == "0"
    assert str(R) == "ℚ[α, β]"


def _random_elem(rng: random.Random, ring: CoeffRing):
    terms = {}
    for _ in range(rng.randint(0, 4)):
        k = tuple(rng.randint(0, 2) for _ in ring.params)
        terms[k] = mpq(rng.randint(-5, 5), rng.randint(1, 4))
    return CoeffElem(ring, terms)


def test_ring_axioms_random():
    rng = random.Random(7)
    ring = CoeffRing.of(("α", -4), ("β", -2), ("ε_d", 0, 2))
    for _ in range(100):
        a, b, c = (_random_elem(rng, ring) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a + b) + c == a + (b + c)


def test_inverse_with_random_nilpotent_part():
    rng = random.Random(11)
    ring = CoeffRing.of(("e", 0, 3), ("f", 0, 2))
    for _ in range(100):
        r0 = mpq(rng.choice([-3, -1, 1, 2, 5]), rng.randint(1, 3))
        nil = _random_elem(rng, ring)
        nil = nil - nil.constant_part()
        a = ring.const(r0) + nil
        assert a * a.invert_degree_zero() == ring.one()


def test_specialize_is_homomorphism():
    rng = random.Random(3)
    target = CoeffRing.of(("a", 0), ("β", -2))
    bind = {"α": target.gen("a") * target.gen("β") ** 2 + 1}
    for _ in range(100):
        a, b = _random_elem(rng, R), _random_elem(rng, R)
        lhs = (a * b).specialize(bind, target)
        assert lhs == a.specialize(bind, target) * b.specialize(bind, target)


def test_homogeneity_is_multiplicative():
    rng = random.Random(5)
    for _ in range(100):
        da, db = rng.choice([0, -2, -4]), rng.choice([0, -2, -4, -6])
        a = _homogeneous(rng, da)
        b = _homogeneous(rng, db)
        assert (a * b).is_homogeneous(da + db)


def _homogeneous(rng, d):
    # α^i β^j with 4i + 2j = -d
    total = -d // 2
    terms = {}
    for i in range(total // 2 + 1):
        if rng.random() < 0.6:
            terms[(i, total - 2 * i)] = rng.randint(-3, 3)
    return CoeffElem(R, terms)
