"""Truncated multivariate power series with exact coefficients.

A :class:`TruncSeries` lives in ``R[[x_1, …, x_n]]`` where ``R`` is a
:class:`~fglnh.coefring.CoeffRing`.  Terms are stored flat: the dictionary key
is the x-exponent vector followed by the parameter exponent vector, and the
value is an ``mpq``.  Two orders are tracked:

``trunc``
    the largest x-degree ever stored (the working precision D);
``valid``
    the largest x-degree up to which stored coefficients are known to be
    correct.  Terms above ``valid`` are never stored.

Variables are indexed from 1 in every public method, as in the mathematics.

:class:`DiffFraction` is a series numerator over a multiset of linear factors
``(x_i - x_j)``; it is the exact home of ``1/(x_i -_F x_j)``.
"""

from __future__ import annotations

from collections import Counter
from operator import add
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .coefring import CoeffElem, CoeffRing, format_terms, monomial_text, to_q
from .errors import (
    BadConstantTerm,
    BeyondValidOrder,
    IndexOutOfRange,
    MismatchedArity,
    MismatchedRings,
    NonzeroConstantTerm,
    NotAUnit,
    NotDivisible,
    NotInvertible,
)

DEFAULT_TRUNC = 12
_INF = 1 << 30


def _acc(out: dict, k, v) -> None:
    s = out.get(k, 0) + v
    if s:
        out[k] = s
    else:
        out.pop(k, None)


def _nil_slots(ring: CoeffRing, nvars: int) -> tuple[tuple[int, int], ...]:
    """Nilpotent orders as positions in a flat key (x exponents come first)."""
    return tuple((nvars + i, o) for i, o in ring.nilpotents)


def _mul_flat(a_items, b_items, bound: int, nil) -> dict:
    """Product of two degree-sorted ``(key, xdeg, value)`` lists, x-degree ≤ bound."""
    out: dict = {}
    get = out.get
    for ka, da, va in a_items:
        lim = bound - da
        if lim < 0:
            break
        for kb, db, vb in b_items:
            if db > lim:
                break
            k = tuple(map(add, ka, kb))
            if nil and any(k[i] >= o for i, o in nil):
                continue
            out[k] = get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


class TruncSeries:
    """Immutable truncated power series; see the module docstring."""

    __slots__ = ("ring", "nvars", "trunc", "valid", "_t", "_items")

    def __init__(self, ring: CoeffRing, nvars: int, trunc: int, flat: dict, valid: int | None = None):
        if valid is None:
            valid = trunc
        valid = min(valid, trunc)
        self.ring = ring
        self.nvars = nvars
        self.trunc = trunc
        self.valid = valid
        n = nvars
        self._t = {k: v for k, v in flat.items() if v and sum(k[:n]) <= valid}
        self._items = None

    # construction
    @classmethod
    def zero(cls, ring, nvars, trunc=DEFAULT_TRUNC, valid=None):
        return cls(ring, nvars, trunc, {}, valid)

    @classmethod
    def const(cls, ring, nvars, value, trunc=DEFAULT_TRUNC):
        c = ring.coerce(value)
        z = (0,) * nvars
        return cls(ring, nvars, trunc, {z + k: v for k, v in c.terms.items()})

    @classmethod
    def one(cls, ring, nvars, trunc=DEFAULT_TRUNC):
        return cls.const(ring, nvars, 1, trunc)

    @classmethod
    def var(cls, ring, nvars, i, trunc=DEFAULT_TRUNC):
        _check_index(i, nvars)
        x = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls(ring, nvars, trunc, {x + (0,) * len(ring.params): mpq(1)})

    @classmethod
    def variables(cls, ring, nvars, trunc=DEFAULT_TRUNC):
        return [cls.var(ring, nvars, i, trunc) for i in range(1, nvars + 1)]

    @classmethod
    def from_terms(cls, ring, nvars, terms: Mapping, trunc=DEFAULT_TRUNC, valid=None):
        """Build from ``{x-exponent tuple: CoeffElem | rational}``."""
        flat: dict = {}
        for xk, c in terms.items():
            xk = tuple(xk)
            if len(xk) != nvars:
                raise MismatchedArity(f"exponent vector {xk} has length != {nvars}")
            for pk, v in ring.coerce(c).terms.items():
                _acc(flat, xk + pk, v)
        return cls(ring, nvars, trunc, flat, valid)

    def _new(self, flat, valid=None, nvars=None, trunc=None, ring=None):
        return TruncSeries(
            ring or self.ring,
            self.nvars if nvars is None else nvars,
            self.trunc if trunc is None else trunc,
            flat,
            self.valid if valid is None else valid,
        )

    # views
    def items(self):
        """Degree-sorted list of ``(flat key, x-degree, value)``."""
        if self._items is None:
            n = self.nvars
            self._items = sorted(((k, sum(k[:n]), v) for k, v in self._t.items()), key=lambda t: t[1])
        return self._items

    @property
    def flat(self) -> dict:
        return dict(self._t)

    @property
    def terms(self) -> dict[tuple[int, ...], CoeffElem]:
        """``{x-exponent vector: CoeffElem}``."""
        n = self.nvars
        grouped: dict = {}
        for k, v in self._t.items():
            grouped.setdefault(k[:n], {})[k[n:]] = v
        return {xk: CoeffElem._raw(self.ring, d) for xk, d in grouped.items()}

    def coeff(self, expvec: Sequence[int]) -> CoeffElem:
        expvec = tuple(expvec)
        if len(expvec) != self.nvars:
            raise MismatchedArity(f"exponent vector {expvec} for {self.nvars} variables")
        if sum(expvec) > self.valid:
            raise BeyondValidOrder(f"degree {sum(expvec)} exceeds valid order {self.valid}")
        n = self.nvars
        return CoeffElem._raw(self.ring, {k[n:]: v for k, v in self._t.items() if k[:n] == expvec})

    def constant_term(self) -> CoeffElem:
        return self.coeff((0,) * self.nvars) if self.valid >= 0 else self.ring.zero()

    def slice(self, d: int) -> "TruncSeries":
        """Homogeneous x-degree ``d`` part."""
        n = self.nvars
        return self._new({k: v for k, v in self._t.items() if sum(k[:n]) == d})

    def is_zero(self) -> bool:
        return not self._t

    def lowest_degree(self) -> int | None:
        items = self.items()
        return items[0][1] if items else None

    def valuation(self) -> int:
        """Lower bound for the true x-adic valuation."""
        items = self.items()
        return items[0][1] if items else self.valid + 1

    def topological_degrees(self) -> set[int]:
        n = self.nvars
        return {2 * sum(k[:n]) + self.ring.monomial_degree(k[n:]) for k in self._t}

    def is_homogeneous(self, d: int) -> bool:
        return all(t == d for t in self.topological_degrees())

    def first_inhomogeneous_degree(self, d: int) -> int | None:
        n = self.nvars
        bad = [sum(k[:n]) for k in self._t if 2 * sum(k[:n]) + self.ring.monomial_degree(k[n:]) != d]
        return min(bad) if bad else None

    # coercion
    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            if other.ring != self.ring:
                raise MismatchedRings(f"{self.ring.names} vs {other.ring.names}")
            if other.nvars != self.nvars:
                raise MismatchedArity(f"{self.nvars} vs {other.nvars} variables")
            return other
        return TruncSeries.const(self.ring, self.nvars, other, self.trunc)

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._t)
        for k, v in other._t.items():
            _acc(out, k, v)
        return self._new(out, min(self.valid, other.valid), trunc=min(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self._t.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            if isinstance(other, CoeffElem):
                other = self._coerce(other)
            else:
                q = to_q(other)
                return self._new({k: v * q for k, v in self._t.items()} if q else {})
        other = self._coerce(other)
        trunc = min(self.trunc, other.trunc)
        valid = min(trunc, self.valid + other.valuation(), other.valid + self.valuation())
        flat = _mul_flat(self.items(), other.items(), valid, _nil_slots(self.ring, self.nvars))
        return self._new(flat, valid, trunc=trunc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.invert_unit()
        if isinstance(other, CoeffElem):
            return self * other._unit_inverse()
        q = to_q(other)
        return self._new({k: v / q for k, v in self._t.items()})

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers")
        result = TruncSeries.one(self.ring, self.nvars, self.trunc)
        for _ in range(e):
            result = result * self
        return result

    def agrees(self, other, upto: int | None = None) -> bool:
        other = self._coerce(other)
        bound = min(self.valid, other.valid) if upto is None else upto
        if bound > min(self.valid, other.valid):
            raise BeyondValidOrder(f"cannot compare beyond degree {min(self.valid, other.valid)}")
        n = self.nvars
        a = {k: v for k, v in self._t.items() if sum(k[:n]) <= bound}
        b = {k: v for k, v in other._t.items() if sum(k[:n]) <= bound}
        return a == b

    def __eq__(self, other):
        if isinstance(other, TruncSeries) and (other.ring != self.ring or other.nvars != self.nvars):
            return False
        try:
            return self.agrees(other)
        except (TypeError, MismatchedRings):
            return NotImplemented

    __hash__ = None

    def truncated(self, D: int) -> "TruncSeries":
        return self._new(self._t, min(self.valid, D), trunc=min(self.trunc, D))

    def with_valid(self, valid: int) -> "TruncSeries":
        return self._new(self._t, min(self.valid, valid))

    # variable manipulation
    def permute(self, perm: Sequence[int]) -> "TruncSeries":
        """Apply ``x_k ↦ x_{perm[k]}`` (0-based images) to every monomial."""
        n = self.nvars
        out = {}
        for k, v in self._t.items():
            nk = [0] * n
            for src in range(n):
                nk[perm[src]] = k[src]
            out[tuple(nk) + k[n:]] = v
        return self._new(out)

    def swap(self, i: int) -> "TruncSeries":
        if not 1 <= i < self.nvars:
            raise IndexOutOfRange(f"swap index {i} outside 1..{self.nvars - 1}")
        perm = list(range(self.nvars))
        perm[i - 1], perm[i] = i, i - 1
        return self.permute(perm)

    def rename(self, nvars: int, targets: Sequence[int]) -> "TruncSeries":
        """Send variable ``k`` to ``x_{targets[k-1]}`` in ``nvars`` variables (exponents add)."""
        if len(targets) != self.nvars:
            raise MismatchedArity("one target per variable required")
        for t in targets:
            _check_index(t, nvars)
        n = self.nvars
        out: dict = {}
        for k, v in self._t.items():
            nk = [0] * nvars
            for src in range(n):
                nk[targets[src] - 1] += k[src]
            _acc(out, tuple(nk) + k[n:], v)
        return self._new(out, nvars=nvars)

    def diagonal(self, i: int, j: int) -> "TruncSeries":
        """Substitute ``x_i ↦ x_j``."""
        targets = list(range(1, self.nvars + 1))
        _check_index(i, self.nvars)
        _check_index(j, self.nvars)
        targets[i - 1] = j
        return self.rename(self.nvars, targets)

    def substitute(self, images: Sequence["TruncSeries"] | Mapping[int, "TruncSeries"]) -> "TruncSeries":
        """Compose: replace ``x_k`` by ``images[k]``.

        ``images`` is either a full sequence (one image per variable, all in a
        common target arity) or a mapping ``{k: series}`` for a partial
        substitution in the same arity.
        """
        if isinstance(images, Mapping):
            full = TruncSeries.variables(self.ring, self.nvars, self.trunc)
            for k, img in images.items():
                _check_index(k, self.nvars)
                full[k - 1] = img
            images = full
        images = list(images)
        if len(images) != self.nvars:
            raise MismatchedArity(f"need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        target_n = images[0].nvars
        for img in images:
            if img.ring != self.ring:
                raise MismatchedRings(f"{img.ring.names} vs {self.ring.names}")
            if img.nvars != target_n:
                raise MismatchedArity("substituted series disagree in arity")
            if img.valid >= 0 and not img.constant_term().is_zero():
                raise NonzeroConstantTerm("substituted series must have zero constant term")
        trunc = min([self.trunc] + [img.trunc for img in images])
        n = self.nvars
        grouped: dict = {}
        for k, v in self._t.items():
            grouped.setdefault(k[:n], {})[k[n:]] = v
        powers = [[TruncSeries.one(self.ring, target_n, trunc)] for _ in images]

        def power(var, e):
            cache = powers[var]
            while len(cache) <= e:
                cache.append(cache[-1] * images[var])
            return cache[e]

        out: dict = {}
        valid = self.valid
        zero_x = (0,) * target_n
        for xk in sorted(grouped, key=sum):
            prod = None
            for var, e in enumerate(xk):
                if e:
                    p = power(var, e)
                    prod = p if prod is None else prod * p
            if prod is None:
                prod = powers[0][0]
            valid = min(valid, prod.valid)
            coeff_items = [(zero_x + pk, 0, v) for pk, v in grouped[xk].items()]
            for kk, vv in _mul_flat(prod.items(), coeff_items, trunc, _nil_slots(self.ring, target_n)).items():
                _acc(out, kk, vv)
        return TruncSeries(self.ring, target_n, trunc, out, valid)

    # calculus
    def derivative(self, i: int) -> "TruncSeries":
        _check_index(i, self.nvars)
        a = i - 1
        out = {}
        for k, v in self._t.items():
            if k[a]:
                out[k[:a] + (k[a] - 1,) + k[a + 1:]] = v * k[a]
        return self._new(out, self.valid - 1)

    def integrate(self, i: int) -> "TruncSeries":
        _check_index(i, self.nvars)
        a = i - 1
        out = {k[:a] + (k[a] + 1,) + k[a + 1:]: v / (k[a] + 1) for k, v in self._t.items()}
        return self._new(out, self.valid + 1)

    def param_derivative(self, name: str) -> "TruncSeries":
        p = self.nvars + self.ring.index(name)
        out = {}
        for k, v in self._t.items():
            if k[p]:
                out[k[:p] + (k[p] - 1,) + k[p + 1:]] = v * k[p]
        return self._new(out)

    # exact division and inverses
    def divide_linear_diff(self, i: int, j: int) -> "TruncSeries":
        """Exact quotient by ``(x_i - x_j)``; valid order drops by one."""
        _check_index(i, self.nvars)
        _check_index(j, self.nvars)
        if i == j:
            raise IndexOutOfRange("factor (x_i - x_i) is zero")
        a, b = i - 1, j - 1
        rem: dict = {}
        out: dict = {}
        for k, v in self._t.items():
            m = k[a]
            lk = list(k)
            lk[a] = 0
            lk[b] = k[b] + m
            _acc(rem, tuple(lk), v)
            for p in range(m):
                lk[a] = p
                lk[b] = k[b] + m - 1 - p
                _acc(out, tuple(lk), v)
        if rem:
            raise NotDivisible(f"series does not vanish on x{i} = x{j}")
        return self._new(out, self.valid - 1)

    def is_divisible_by(self, i: int, j: int) -> bool:
        return self.diagonal(i, j).is_zero()

    def mul_linear_diff(self, i: int, j: int) -> "TruncSeries":
        """Multiply by ``(x_i - x_j)``."""
        a, b = i - 1, j - 1
        out: dict = {}
        n = self.nvars
        for k, v in self._t.items():
            if sum(k[:n]) + 1 > self.trunc:
                continue
            ka = k[:a] + (k[a] + 1,) + k[a + 1:]
            kb = k[:b] + (k[b] + 1,) + k[b + 1:]
            _acc(out, ka, v)
            _acc(out, kb, -v)
        return self._new(out, min(self.trunc, self.valid + 1))

    def _slices(self) -> list[list]:
        sl: list[list] = [[] for _ in range(self.valid + 1)]
        for item in self.items():
            sl[item[1]].append(item)
        return sl

    def invert_unit(self) -> "TruncSeries":
        """Multiplicative inverse of a series with invertible constant term."""
        if self.valid < 0:
            return self
        c0 = self.constant_term()
        try:
            c0inv = c0._unit_inverse()
        except NotInvertible as exc:
            raise NotAUnit(f"constant term {c0} is not invertible") from exc
        n = self.nvars
        nil = _nil_slots(self.ring, n)
        zx = (0,) * n
        c0_items = [(zx + k, 0, v) for k, v in c0inv.terms.items()]
        a = self._slices()
        b = [c0_items]
        for k in range(1, self.valid + 1):
            acc: dict = {}
            for j in range(1, k + 1):
                if a[j] and b[k - j]:
                    for kk, vv in _mul_flat(a[j], b[k - j], _INF, nil).items():
                        _acc(acc, kk, vv)
            acc_items = [(kk, k, vv) for kk, vv in acc.items()]
            b.append([(kk, k, -vv) for kk, vv in _mul_flat(acc_items, c0_items, _INF, nil).items()])
        out = {kk: vv for sl in b for kk, _, vv in sl}
        return self._new(out)

    def sqrt(self) -> "TruncSeries":
        """Square root of a series with constant term exactly 1."""
        if self.constant_term() != 1:
            raise BadConstantTerm("sqrt needs constant term 1")
        n = self.nvars
        nil = _nil_slots(self.ring, n)
        one_key = (0,) * (n + len(self.ring.params))
        a = self._slices()
        b = [[(one_key, 0, mpq(1))]]
        half = mpq(1, 2)
        for k in range(1, self.valid + 1):
            acc: dict = {kk: vv for kk, _, vv in a[k]}
            for j in range(1, k):
                if b[j] and b[k - j]:
                    for kk, vv in _mul_flat(b[j], b[k - j], _INF, nil).items():
                        _acc(acc, kk, -vv)
            b.append([(kk, k, vv * half) for kk, vv in acc.items() if vv])
        return self._new({kk: vv for sl in b for kk, _, vv in sl})

    # ring changes
    def change_ring(self, target: CoeffRing) -> "TruncSeries":
        """Embed into a ring containing all of this ring's parameters by name."""
        pos = [target.index(name) for name in self.ring.names]
        n = self.nvars
        m = len(target.params)
        out = {}
        for k, v in self._t.items():
            pk = [0] * m
            for src, dst in enumerate(pos):
                pk[dst] = k[n + src]
            out[k[:n] + tuple(pk)] = v
        return TruncSeries(target, n, self.trunc, out, self.valid)

    def specialize(self, bindings: Mapping[str, object], target: CoeffRing) -> "TruncSeries":
        """Apply a coefficient-ring substitution to every coefficient."""
        bound = {k: target.coerce(v) for k, v in bindings.items()}
        out: dict = {}
        for xk, c in self.terms.items():
            for pk, v in c.specialize(bound, target).terms.items():
                _acc(out, xk + pk, v)
        return TruncSeries(target, self.nvars, self.trunc, out, self.valid)

    def param_part(self, name: str, power: int) -> "TruncSeries":
        """Coefficient of ``name^power``, as a series over the ring without ``name``."""
        target = self.ring.without(name)
        p = self.nvars + self.ring.index(name)
        out = {k[:p] + k[p + 1:]: v for k, v in self._t.items() if k[p] == power}
        return TruncSeries(target, self.nvars, self.trunc, out, self.valid)

    # text and JSON
    def var_names(self, names: Sequence[str] | None = None) -> list[str]:
        return list(names) if names else [f"x{i}" for i in range(1, self.nvars + 1)]

    def sorted_items(self):
        n = self.nvars

        def key(kv):
            k = kv[0]
            xk, pk = k[:n], k[n:]
            return (sum(xk), tuple(-e for e in xk), sum(pk), tuple(-e for e in pk))

        return sorted(self._t.items(), key=key)

    def to_text(self, names: Sequence[str] | None = None) -> str:
        names = self.var_names(names)
        n = self.nvars
        pn = self.ring.names
        return format_terms(
            self.sorted_items(), lambda k: monomial_text(k[n:], pn) + monomial_text(k[:n], names)
        )

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"TruncSeries({self.to_text()} ; valid={self.valid}, trunc={self.trunc})"

    def to_json(self) -> list[dict]:
        n = self.nvars
        pn = self.ring.names
        return [
            {
                "exps": list(k[:n]),
                "coeff": str(v),
                "params": {pn[i]: e for i, e in enumerate(k[n:]) if e},
            }
            for k, v in self.sorted_items()
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping], ring: CoeffRing, nvars: int, trunc: int, valid=None):
        flat: dict = {}
        m = len(ring.params)
        for term in data:
            pk = [0] * m
            for name, e in term.get("params", {}).items():
                pk[ring.index(name)] = int(e)
            xk = tuple(int(e) for e in term["exps"])
            if len(xk) != nvars:
                raise MismatchedArity(f"term {term} has wrong arity")
            _acc(flat, xk + tuple(pk), to_q(term["coeff"]))
        return cls(ring, nvars, trunc, flat, valid)


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"variable index {i} outside 1..{n}")


class DiffFraction:
    """``num / ∏ (x_i - x_j)`` with each factor stored as ``(i, j)``, ``i < j``."""

    __slots__ = ("num", "denom")

    def __init__(self, num: TruncSeries, denom: Iterable[tuple[int, int]] = ()):
        sign = 1
        canon = []
        for i, j in denom:
            if i == j:
                raise IndexOutOfRange("factor (x_i - x_i) is zero")
            _check_index(i, num.nvars)
            _check_index(j, num.nvars)
            if i > j:
                i, j = j, i
                sign = -sign
            canon.append((i, j))
        self.num = num if sign == 1 else -num
        self.denom = tuple(sorted(canon))

    @classmethod
    def of(cls, num: TruncSeries) -> "DiffFraction":
        return cls(num, ())

    @property
    def ring(self) -> CoeffRing:
        return self.num.ring

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @property
    def certified_degree(self) -> int:
        """x-degree up to which the rational function is known."""
        return self.num.valid - len(self.denom)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def normalize(self) -> "DiffFraction":
        num = self.num
        remaining = []
        for f in self.denom:
            try:
                num = num.divide_linear_diff(*f)
            except NotDivisible:
                remaining.append(f)
        return DiffFraction(num, remaining)

    def is_normalized(self) -> bool:
        return all(not self.num.is_divisible_by(*f) for f in set(self.denom))

    def _check(self, other: "DiffFraction") -> "DiffFraction":
        if not isinstance(other, DiffFraction):
            if isinstance(other, TruncSeries):
                return DiffFraction.of(other)
            return DiffFraction.of(TruncSeries.const(self.ring, self.nvars, other, self.num.trunc))
        if other.ring != self.ring:
            raise MismatchedRings(f"{self.ring.names} vs {other.ring.names}")
        if other.nvars != self.nvars:
            raise MismatchedArity(f"{self.nvars} vs {other.nvars} variables")
        return other

    def _lifted(self, target: Counter) -> TruncSeries:
        num = self.num
        missing = target - Counter(self.denom)
        for (i, j), c in sorted(missing.items()):
            for _ in range(c):
                num = num.mul_linear_diff(i, j)
        return num

    def add(self, other, normalize: bool = True) -> "DiffFraction":
        other = self._check(other)
        if self.denom == other.denom:
            out = DiffFraction(self.num + other.num, self.denom)
        else:
            lcm = Counter(self.denom) | Counter(other.denom)
            out = DiffFraction(self._lifted(lcm) + other._lifted(lcm), lcm.elements())
        return out.normalize() if normalize else out

    def __add__(self, other):
        return self.add(other)

    __radd__ = __add__

    def __neg__(self):
        return DiffFraction(-self.num, self.denom)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def mul(self, other, normalize: bool = True) -> "DiffFraction":
        if isinstance(other, (int, mpq)) or isinstance(other, CoeffElem):
            return DiffFraction(self.num * other, self.denom)
        other = self._check(other)
        out = DiffFraction(self.num * other.num, self.denom + other.denom)
        return out.normalize() if normalize else out

    def __mul__(self, other):
        return self.mul(other)

    __rmul__ = __mul__

    def permute(self, perm: Sequence[int]) -> "DiffFraction":
        """Apply the variable permutation ``x_k ↦ x_{perm[k]}`` (0-based) to num and factors."""
        return DiffFraction(
            self.num.permute(perm), [(perm[i - 1] + 1, perm[j - 1] + 1) for i, j in self.denom]
        )

    def to_series(self) -> TruncSeries:
        """The normalized numerator; raises NotDivisible if a pole survives."""
        f = self.normalize()
        if f.denom:
            raise NotDivisible(f"genuine pole along {f.denom} remains")
        return f.num

    def agrees(self, other) -> bool:
        return (self - other).is_zero()

    def to_text(self, names=None) -> str:
        if not self.denom:
            return self.num.to_text(names)
        names = self.num.var_names(names)
        den = "*".join(f"({names[i - 1]} - {names[j - 1]})" for i, j in self.denom)
        return f"({self.num.to_text(names)})/({den})"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"DiffFraction({self.to_text()})"


# thin functional aliases for the operation names used in the docs
def ts_coeff(a: TruncSeries, expvec) -> CoeffElem:
    return a.coeff(expvec)


def ts_invert_unit(a: TruncSeries) -> TruncSeries:
    return a.invert_unit()


def ts_substitute(a: TruncSeries, bindings) -> TruncSeries:
    return a.substitute(bindings)


def ts_swap(a: TruncSeries, i: int) -> TruncSeries:
    return a.swap(i)


def ts_divide_linear_diff(a: TruncSeries, i: int, j: int) -> TruncSeries:
    return a.divide_linear_diff(i, j)


def ts_sqrt(a: TruncSeries) -> TruncSeries:
    return a.sqrt()


def df_normalize(f: DiffFraction) -> DiffFraction:
    return f.normalize()
