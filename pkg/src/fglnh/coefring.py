"""Graded coefficient rings over the rationals.

A ring is described by an ordered list of named parameters, each with an even
topological degree and, optionally, a nilpotency order (``ε^k = 0``).  Elements
are sparse polynomials in the parameters with exact rational coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from gmpy2 import mpq

from .errors import MismatchedRings, NotDegreeZero, NotInvertible, ParseError

Q = mpq
_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def to_q(value) -> mpq:
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to an exact rational."""
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if not m:
            raise ParseError(f"not a rational: {value!r}")
        return mpq(int(m.group(1)), int(m.group(2) or 1))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use p/q")
    return mpq(value)


def q_str(q: mpq) -> str:
    return str(q)


@dataclass(frozen=True)
class Param:
    name: str
    degree: int
    nilpotent_order: int | None = None

    def __post_init__(self):
        if not self.name.isidentifier():
            raise ParseError(f"parameter name {self.name!r} is not an identifier")
        if self.degree % 2:
            raise ParseError(f"parameter {self.name} has odd degree {self.degree}")
        if self.nilpotent_order is not None and self.nilpotent_order < 1:
            raise ParseError(f"parameter {self.name}: nilpotent_order must be positive")

    def to_json(self) -> dict:
        d = {"name": self.name, "degree": self.degree}
        if self.nilpotent_order is not None:
            d["nilpotent_order"] = self.nilpotent_order
        return d


@dataclass(frozen=True)
class CoeffRing:
    """ℚ[p_1, …, p_m] with optional nilpotent relations p_k^{n_k} = 0."""

    params: tuple[Param, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise ParseError(f"duplicate parameter names in {names}")
        object.__setattr__(self, "_index", {p.name: k for k, p in enumerate(self.params)})

    @classmethod
    def of(cls, *params: Param | tuple) -> "CoeffRing":
        return cls(tuple(p if isinstance(p, Param) else Param(*p) for p in params))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(p.degree for p in self.params)

    @property
    def nilpotents(self) -> tuple[tuple[int, int], ...]:
        """(index, order) for each nilpotent parameter."""
        return tuple(
            (k, p.nilpotent_order) for k, p in enumerate(self.params) if p.nilpotent_order
        )

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise MismatchedRings(f"no parameter {name!r} in ring {self.names}") from None

    def extend(self, *params: Param) -> "CoeffRing":
        return CoeffRing(self.params + tuple(params))

    def without(self, name: str) -> "CoeffRing":
        self.index(name)
        return CoeffRing(tuple(p for p in self.params if p.name != name))

    def monomial_degree(self, exps: tuple[int, ...]) -> int:
        return sum(e * p.degree for e, p in zip(exps, self.params))

    # element constructors
    def zero(self) -> "CoeffElem":
        return CoeffElem(self, {})

    def one(self) -> "CoeffElem":
        return self.const(1)

    def const(self, value) -> "CoeffElem":
        q = to_q(value)
        return CoeffElem(self, {(0,) * len(self.params): q} if q else {})

    def gen(self, name: str) -> "CoeffElem":
        k = self.index(name)
        exps = tuple(1 if j == k else 0 for j in range(len(self.params)))
        return CoeffElem(self, {exps: mpq(1)})

    def coerce(self, value) -> "CoeffElem":
        if isinstance(value, CoeffElem):
            if value.ring != self:
                raise MismatchedRings(f"{value.ring.names} vs {self.names}")
            return value
        return self.const(value)

    def to_json(self) -> list[dict]:
        return [p.to_json() for p in self.params]

    def __str__(self) -> str:
        return "ℚ[" + ", ".join(self.names) + "]" if self.params else "ℚ"


def _truncate_nilpotent(terms: dict, nil: Iterable[tuple[int, int]]) -> dict:
    nil = tuple(nil)
    if not nil:
        return terms
    return {k: v for k, v in terms.items() if all(k[i] < o for i, o in nil)}


class CoeffElem:
    """Immutable sparse polynomial over ℚ in the parameters of ``ring``."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: CoeffRing, terms: Mapping[tuple[int, ...], object]):
        m = len(ring.params)
        clean = {}
        for k, v in terms.items():
            k = tuple(k)
            if len(k) != m:
                raise MismatchedRings(f"exponent vector {k} does not fit ring {ring.names}")
            q = to_q(v)
            if q:
                clean[k] = q
        self.ring = ring
        self.terms = _truncate_nilpotent(clean, ring.nilpotents)

    @classmethod
    def _raw(cls, ring: CoeffRing, terms: dict) -> "CoeffElem":
        obj = object.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    def _check(self, other) -> "CoeffElem":
        if isinstance(other, CoeffElem):
            if other.ring != self.ring:
                raise MismatchedRings(f"{self.ring.names} vs {other.ring.names}")
            return other
        return self.ring.const(other)

    # arithmetic
    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return CoeffElem._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return CoeffElem._raw(self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        nil = self.ring.nilpotents
        out: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                if nil and any(k[i] >= o for i, o in nil):
                    continue
                s = out.get(k, 0) + va * vb
                if s:
                    out[k] = s
                else:
                    del out[k]
        return CoeffElem._raw(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, CoeffElem):
            return self * other.invert_degree_zero()
        q = to_q(other)
        if not q:
            raise ZeroDivisionError("division by zero")
        return CoeffElem._raw(self.ring, {k: v / q for k, v in self.terms.items()})

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CoeffElem):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring.const(other).terms
        except (TypeError, ParseError):
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # structure
    def is_zero(self) -> bool:
        return not self.terms

    def constant_part(self) -> mpq:
        return self.terms.get((0,) * len(self.ring.params), mpq(0))

    def is_constant(self) -> bool:
        zero = (0,) * len(self.ring.params)
        return all(k == zero for k in self.terms)

    def degrees(self) -> set[int]:
        return {self.ring.monomial_degree(k) for k in self.terms}

    def is_homogeneous(self, d: int) -> bool:
        """Zero is homogeneous of every degree."""
        return all(self.ring.monomial_degree(k) == d for k in self.terms)

    def is_nilpotent(self) -> bool:
        """True when every monomial contains a nilpotent parameter."""
        nil = self.ring.nilpotents
        return all(any(k[i] > 0 for i, _ in nil) for k in self.terms)

    def invert_degree_zero(self) -> "CoeffElem":
        if not self.is_homogeneous(0):
            raise NotDegreeZero(f"{self} is not homogeneous of degree 0")
        return self._unit_inverse()

    def _unit_inverse(self) -> "CoeffElem":
        # r0 + nilpotent part; the geometric series terminates
        r0 = self.constant_part()
        if not r0:
            raise NotInvertible(f"{self} has zero rational part")
        rest = (self - r0) / r0
        if rest and not rest.is_nilpotent():
            raise NotInvertible(f"{self} is not a unit in {self.ring}")
        out = self.ring.one()
        power = self.ring.one()
        while True:
            power = power * (-rest)
            if not power:
                break
            out = out + power
        return out / r0

    def specialize(self, bindings: Mapping[str, "CoeffElem"], target: CoeffRing) -> "CoeffElem":
        """Substitution homomorphism; unbound parameters must exist in ``target``."""
        images = []
        for p in self.ring.params:
            if p.name in bindings:
                images.append(target.coerce(bindings[p.name]))
            else:
                images.append(target.gen(p.name))
        out = target.zero()
        for k, v in self.terms.items():
            term = target.const(v)
            for img, e in zip(images, k):
                if e:
                    term = term * img ** e
            out = out + term
        return out

    def derivative(self, name: str) -> "CoeffElem":
        i = self.ring.index(name)
        out = {}
        for k, v in self.terms.items():
            if k[i]:
                nk = k[:i] + (k[i] - 1,) + k[i + 1:]
                out[nk] = v * k[i]
        return CoeffElem._raw(self.ring, out)

    # text
    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: monomial_sort_key(kv[0]))

    def __str__(self) -> str:
        return format_terms(
            [(k, v) for k, v in self.sorted_items()], lambda k: monomial_text(k, self.ring.names)
        )

    def __repr__(self) -> str:
        return f"CoeffElem({self})"


def monomial_sort_key(exps: tuple[int, ...]):
    return (sum(exps), tuple(-e for e in exps))


def monomial_text(exps, names, power: str = "^") -> list[str]:
    out = []
    for e, n in zip(exps, names):
        if e == 1:
            out.append(n)
        elif e:
            out.append(f"{n}{power}{e}")
    return out


def format_terms(items, factors_of, power_sep: str = "*") -> str:
    """Join ``(key, coeff)`` pairs as ``c*a*b + ...`` with sign folding."""
    if not items:
        return "0"
    parts = []
    for idx, (k, v) in enumerate(items):
        factors = factors_of(k)
        neg = v < 0
        mag = -v if neg else v
        if factors:
            body = power_sep.join(([str(mag)] if mag != 1 else []) + factors)
        else:
            body = str(mag)
        if idx == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)
