"""Generalized nilHecke algebras as operators in a twisted group algebra.

Every operator is a finite sum ``Σ_w c_w · w`` over permutations ``w`` of
``{1, …, n}`` with :class:`~fglnh.series.DiffFraction` coefficients.  A
permutation is stored as the tuple of 0-based images and acts on series by
``x_k ↦ x_{w(k)}``, so ``w ∘ (c ·) = w(c) · w`` and operator products follow
composition of functions.

Relations are checked as exact identities between such operators, one
coefficient at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from .coefring import CoeffRing
from .diagrams import parse_word
from .errors import (
    GradingViolation,
    InputError,
    MismatchedArity,
    MismatchedRings,
    NoDependency,
    NotSymmetric,
)
from .fgl import FormalGroupLaw, PERTURBATION_PARAM, fgl_perturb
from .series import DiffFraction, TruncSeries

Perm = tuple[int, ...]
MIN_VERIFY_TRUNC = 6


def identity(n: int) -> Perm:
    return tuple(range(n))


def transposition(n: int, i: int) -> Perm:
    """The simple transposition ``s_i`` swapping ``i`` and ``i+1`` (1-based)."""
    p = list(range(n))
    p[i - 1], p[i] = i, i - 1
    return tuple(p)


def compose_perm(w: Perm, v: Perm) -> Perm:
    return tuple(w[k] for k in v)


def perm_word(p: Perm) -> str:
    """Reduced word in simple transpositions, e.g. ``s1s2``; ``e`` for identity."""
    p = list(p)
    word = []
    # bubble sort records the word of p read right to left
    changed = True
    while changed:
        changed = False
        for i in range(len(p) - 1):
            if p[i] > p[i + 1]:
                p[i], p[i + 1] = p[i + 1], p[i]
                word.append(i + 1)
                changed = True
    return "".join(f"s{i}" for i in word) or "e"


class TwistedOperator:
    """Immutable element of ``Frac-diff(R[[x]]) ⋊ Σ_n``."""

    __slots__ = ("n", "ring", "coeffs")

    def __init__(self, n: int, ring: CoeffRing, coeffs: dict[Perm, DiffFraction]):
        self.n = n
        self.ring = ring
        self.coeffs = coeffs

    @classmethod
    def scalar(cls, f: TruncSeries | DiffFraction) -> "TwistedOperator":
        if isinstance(f, TruncSeries):
            f = DiffFraction.of(f)
        return cls(f.nvars, f.ring, {identity(f.nvars): f})

    def _check(self, other: "TwistedOperator") -> None:
        if other.n != self.n:
            raise MismatchedArity(f"operators on {self.n} and {other.n} strands")
        if other.ring != self.ring:
            raise MismatchedRings(f"{self.ring.names} vs {other.ring.names}")

    def __add__(self, other: "TwistedOperator") -> "TwistedOperator":
        self._check(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out[w] + c if w in out else c
        return TwistedOperator(self.n, self.ring, out)

    def __neg__(self) -> "TwistedOperator":
        return TwistedOperator(self.n, self.ring, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other: "TwistedOperator") -> "TwistedOperator":
        return self + (-other)

    def compose(self, other: "TwistedOperator") -> "TwistedOperator":
        """Algebra product: ``(c·w)(d·v) = (c · w(d)) · (w∘v)``."""
        self._check(other)
        out: dict[Perm, DiffFraction] = {}
        for w, c in self.coeffs.items():
            for v, d in other.coeffs.items():
                term = c.mul(d.permute(w))
                wv = compose_perm(w, v)
                out[wv] = out[wv].add(term, normalize=False) if wv in out else term
        return TwistedOperator(self.n, self.ring, {w: c.normalize() for w, c in out.items()})

    def __mul__(self, other):
        if isinstance(other, TwistedOperator):
            return self.compose(other)
        return self.compose(TwistedOperator.scalar(other))

    def __rmul__(self, other):
        return TwistedOperator.scalar(other).compose(self)

    def coefficient(self, w: Perm) -> DiffFraction | None:
        return self.coeffs.get(tuple(w))

    def apply(self, f: TruncSeries) -> TruncSeries:
        """Action on power series; the result must be pole-free."""
        if f.nvars != self.n:
            raise MismatchedArity(f"series in {f.nvars} variables, operator on {self.n}")
        total = None
        for w, c in self.coeffs.items():
            term = c.mul(DiffFraction.of(f.permute(w)), normalize=False)
            total = term if total is None else total.add(term, normalize=False)
        if total is None:
            return TruncSeries.zero(self.ring, self.n, f.trunc, f.valid)
        return total.to_series()

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs.values())

    def first_failing_degree(self) -> int | None:
        lows = [c.num.lowest_degree() for c in self.coeffs.values() if not c.is_zero()]
        return min(lows) if lows else None

    def certified_degree(self) -> int | None:
        degs = [c.certified_degree for c in self.coeffs.values()]
        return min(degs) if degs else None

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for w in sorted(self.coeffs, key=lambda p: (len(perm_word(p)), perm_word(p))):
            parts.append(f"[{self.coeffs[w].to_text()}]·{perm_word(w)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"TwistedOperator(n={self.n}: {self.to_text()})"


@dataclass
class Generators:
    fgl: FormalGroupLaw
    n: int
    x: list[TwistedOperator]
    d: list[TwistedOperator]

    def X(self, i: int) -> TwistedOperator:
        return self.x[i - 1]

    def Dd(self, i: int) -> TwistedOperator:
        return self.d[i - 1]

    def word(self, spec: str) -> TwistedOperator:
        """Operator for a word such as ``"d1 x2 d1"`` (composition left to right)."""
        op = self.one()
        for kind, idx in parse_word(spec, self.n).word:
            op = op * (self.X(idx) if kind == "x" else self.Dd(idx))
        return op

    def one(self) -> TwistedOperator:
        R, n, D = self.fgl.ring, self.n, self.fgl.trunc
        return TwistedOperator.scalar(TruncSeries.one(R, n, D))


def build_generators(F: FormalGroupLaw, n: int, D: int | None = None) -> Generators:
    """Multiplication operators ``x_i`` and divided differences ``∂_i``."""
    if n < 2:
        raise InputError("need at least two strands")
    if D is not None:
        F = F.truncated(D)
    R, T = F.ring, F.trunc
    xs = [TwistedOperator.scalar(v) for v in TruncSeries.variables(R, n, T)]
    ds = []
    for i in range(1, n):
        ds.append(TwistedOperator(n, R, {
            identity(n): F.reciprocal_difference(n, i, i + 1),
            transposition(n, i): F.reciprocal_difference(n, i + 1, i),
        }))
    return Generators(F, n, xs, ds)


def direct_divided_difference(F: FormalGroupLaw, f: TruncSeries, i: int) -> TruncSeries:
    """``∂_i f`` assembled over one common denominator and divided once.

    ``∂_i f = (f·w(x_i,x_{i+1}) - s_i(f)·w(x_{i+1},x_i)) / (x_i - x_{i+1})`` where
    ``w = 1/u`` and ``x -_F y = (x - y) u``.  Independent of TwistedOperator.
    """
    n = f.nvars
    w = F.unit_inverse
    numerator = f * w.rename(n, [i, i + 1]) - f.swap(i) * w.rename(n, [i + 1, i])
    return numerator.divide_linear_diff(i, i + 1)


# deformation series --------------------------------------------------------

def deformation_st(F: FormalGroupLaw) -> tuple[TruncSeries, TruncSeries]:
    """``s = 1/(x1 -_F x2) + 1/(x2 -_F x1)`` and ``t = (x1 - x2)/(x1 -_F x2)``."""
    d12 = F.reciprocal_difference(2, 1, 2)
    d21 = F.reciprocal_difference(2, 2, 1)
    s = (d12 + d21).to_series()
    x1, x2 = TruncSeries.variables(F.ring, 2, F.trunc)
    t = (DiffFraction.of(x1 - x2) * d12).to_series()
    if F.graded:
        _check_degree("s", s, -2)
        _check_degree("t", t, 0)
    return s, t


def _lr_sums(F: FormalGroupLaw, reading_order: bool) -> tuple[TruncSeries, TruncSeries]:
    def D(a, b):
        return F.reciprocal_difference(3, a, b)

    if reading_order:
        l = D(3, 2) * D(3, 1) - D(1, 2) * D(3, 1) - D(2, 1) * D(3, 2)
        r = D(2, 3) * D(3, 1) + D(3, 2) * D(2, 1) - D(2, 1) * D(3, 1)
    else:
        l = D(2, 3) * D(1, 3) - D(2, 1) * D(1, 3) - D(1, 2) * D(2, 3)
        r = D(3, 2) * D(1, 3) + D(2, 3) * D(1, 2) - D(1, 2) * D(1, 3)
    l, r = l.to_series(), r.to_series()
    if F.graded:
        _check_degree("l", l, -4)
        _check_degree("r", r, -4)
    return l, r


def deformation_lr(F: FormalGroupLaw) -> tuple[TruncSeries, TruncSeries]:
    """Closed-form braid obstruction for ``∂_i f = f/(x_i -F x_{i+1}) + s_i f/(x_{i+1} -F x_i)``.

    Writing ``D(a, b) = 1/(x_a -F x_b)``::

        l = D(2,3)D(1,3) - D(2,1)D(1,3) - D(1,2)D(2,3)
        r = D(3,2)D(1,3) + D(2,3)D(1,2) - D(1,2)D(1,3)
    """
    return _lr_sums(F, reading_order=False)


def deformation_lr_reading_order(F: FormalGroupLaw) -> tuple[TruncSeries, TruncSeries]:
    """The same sums with every difference reversed, i.e. the pair for the opposite orientation of ``∂_i``.

    It equals ``(-r(x3,x2,x1), -l(x3,x2,x1))`` in terms of :func:`deformation_lr`,
    so the two agree exactly when that reversal fixes the pair (additive,
    multiplicative, χ and Euler all qualify; a generic law does not).
    """
    return _lr_sums(F, reading_order=True)


def _check_degree(name: str, f: TruncSeries, d: int) -> None:
    bad = f.first_inhomogeneous_degree(d)
    if bad is not None:
        raise GradingViolation(f"{name} is not homogeneous of degree {d} (x-degree {bad})")


def braid_obstruction(F: FormalGroupLaw, D: int | None = None) -> tuple[TruncSeries, TruncSeries]:
    """Solve ``∂2∂1∂2 - ∂1∂2∂1 = l·∂1 + r·∂2`` coefficientwise in ``Σ_3``."""
    g = build_generators(F, 3, D)
    d1, d2 = g.d
    B = d2 * d1 * d2 - d1 * d2 * d1
    n, R, T = 3, g.fgl.ring, g.fgl.trunc
    zero = DiffFraction.of(TruncSeries.zero(R, n, T))

    def solve(i: int) -> TruncSeries:
        s = transposition(n, i)
        # coefficient of s_i in ∂_i is w(x_{i+1}, x_i)/(x_{i+1} - x_i)
        w = g.fgl.unit_inverse.rename(n, [i + 1, i])
        x = TruncSeries.variables(R, n, T)
        recip = DiffFraction.of((x[i] - x[i - 1]) * w.invert_unit())
        return (B.coefficient(s) or zero).mul(recip).to_series()

    l, r = solve(1), solve(2)
    resid = B - TwistedOperator.scalar(l) * d1 - TwistedOperator.scalar(r) * d2
    if not resid.is_zero():
        raise NoDependency(
            f"braid difference is not in the span of ∂1, ∂2 (degree {resid.first_failing_degree()})"
        )
    return l, r


# presentation --------------------------------------------------------------

@dataclass
class Presentation:
    fgl: FormalGroupLaw
    n: int
    s: TruncSeries
    t: TruncSeries
    l: TruncSeries
    r: TruncSeries
    symmetric: bool
    metadata: dict = field(default_factory=dict)

    @property
    def trunc(self) -> int:
        return self.fgl.trunc

    @property
    def valid(self) -> dict[str, int]:
        return {k: getattr(self, k).valid for k in "stlr"}

    def series(self) -> dict[str, TruncSeries]:
        return {"s": self.s, "t": self.t, "l": self.l, "r": self.r}


def formal_difference_oracle(F: FormalGroupLaw) -> TruncSeries:
    """``t`` recomputed from scratch: inverse via ``exp(-log x)``, then ``F(x, inv(y))``."""
    R, T = F.ring, F.trunc
    (u,) = TruncSeries.variables(R, 1, T)
    inv = F.exp.substitute([-F.log])
    x, y = TruncSeries.variables(R, 2, T)
    diff = F.F.substitute([x, inv.substitute([y])])
    return diff.divide_linear_diff(1, 2).invert_unit()


def emit_presentation(F: FormalGroupLaw, n: int = 3) -> Presentation:
    s, t = deformation_st(F)
    l, r = deformation_lr(F)
    l0, r0 = deformation_lr_reading_order(F)
    oracle = formal_difference_oracle(F)
    agree = oracle.agrees(t, min(oracle.valid, t.valid))
    w = F.unit_inverse.to_text(["x1", "x2"])
    meta = {
        "convention": "x -_F y = F(x, inv(y)); t = (x1 - x2)/(x1 -_F x2)",
        "formal_difference": f"(x1 - x2)/({w})",
        "t_oracle": "pass" if agree else "fail",
        "lr_reading_order": "agrees" if (l0 - l).is_zero() and (r0 - r).is_zero() else "differs",
    }
    return Presentation(F, n, s, t, l, r, F.is_symmetric(), meta)


# verification --------------------------------------------------------------

@dataclass(frozen=True)
class RelationResult:
    name: str
    statement: str
    status: str  # "pass" | "fail" | "n/a"
    first_failing_degree: int | None = None
    certified_degree: int | None = None

    def to_json(self) -> dict:
        d = {"name": self.name, "statement": self.statement, "status": self.status}
        if self.first_failing_degree is not None:
            d["first_failing_degree"] = self.first_failing_degree
        if self.certified_degree is not None:
            d["certified_degree"] = self.certified_degree
        return d


@dataclass
class VerificationReport:
    fgl: str
    n: int
    trunc: int
    results: list[RelationResult]

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def __getitem__(self, name: str) -> RelationResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failures(self) -> list[RelationResult]:
        return [r for r in self.results if r.status == "fail"]

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            tag = {"pass": "PASS", "fail": "FAIL", "n/a": "N/A "}[r.status]
            extra = ""
            if r.status == "fail" and r.first_failing_degree is not None:
                extra = f"  [first failing degree {r.first_failing_degree}]"
            elif r.certified_degree is not None:
                extra = f"  [certified to degree {r.certified_degree}]"
            lines.append(f"{tag}  {r.name:<18} {r.statement}{extra}")
        return "\n".join(lines)


def _operator_result(name: str, statement: str, diff: TwistedOperator) -> RelationResult:
    if diff.is_zero():
        return RelationResult(name, statement, "pass", None, diff.certified_degree())
    return RelationResult(name, statement, "fail", diff.first_failing_degree(), diff.certified_degree())


def relation_instances(n: int) -> list[tuple[str, str]]:
    """Names and statements of every relation instance for ``n`` strands."""
    out = []
    for i in range(1, n):
        out.append((f"quadratic[{i}]", f"d{i}^2 = s(x{i},x{i + 1}) d{i}"))
        out.append((f"weyl_left[{i}]", f"x{i} d{i} - d{i} x{i + 1} = t(x{i},x{i + 1})"))
        out.append((f"weyl_right[{i}]", f"d{i} x{i} - x{i + 1} d{i} = t(x{i},x{i + 1})"))
    for i in range(1, n - 1):
        out.append((f"braid[{i}]", f"d{i + 1} d{i} d{i + 1} - d{i} d{i + 1} d{i} = "
                    f"l(x{i},x{i + 1},x{i + 2}) d{i} + r(x{i},x{i + 1},x{i + 2}) d{i + 1}"))
    for i in range(1, n):
        for j in range(1, n + 1):
            if j not in (i, i + 1):
                out.append((f"far_dx[{i},{j}]", f"d{i} x{j} = x{j} d{i}"))
    for i in range(1, n):
        for j in range(i + 2, n):
            out.append((f"far_dd[{i},{j}]", f"d{i} d{j} = d{j} d{i}"))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out.append((f"comm_xx[{i},{j}]", f"x{i} x{j} = x{j} x{i}"))
    return out


def verify_presentation(F: FormalGroupLaw, n: int = 3, D: int | None = None,
                        presentation: Presentation | None = None) -> VerificationReport:
    """Check every relation instance as an exact twisted-operator identity."""
    if D is not None:
        F = F.truncated(D)
    if F.trunc < MIN_VERIFY_TRUNC:
        raise InputError(f"verification needs truncation order ≥ {MIN_VERIFY_TRUNC}")
    pres = presentation or emit_presentation(F, n)
    g = build_generators(F, n)
    R, T = F.ring, F.trunc

    def embed(f: TruncSeries, first: int) -> TwistedOperator:
        return TwistedOperator.scalar(f.rename(n, list(range(first, first + f.nvars))))

    checks: dict[str, Callable[[], TwistedOperator]] = {}
    for i in range(1, n):
        d, xi, xj = g.Dd(i), g.X(i), g.X(i + 1)
        checks[f"quadratic[{i}]"] = lambda d=d, i=i: d * d - embed(pres.s, i) * d
        checks[f"weyl_left[{i}]"] = lambda d=d, xi=xi, xj=xj, i=i: xi * d - d * xj - embed(pres.t, i)
        checks[f"weyl_right[{i}]"] = lambda d=d, xi=xi, xj=xj, i=i: d * xi - xj * d - embed(pres.t, i)
    for i in range(1, n - 1):
        a, b = g.Dd(i), g.Dd(i + 1)
        checks[f"braid[{i}]"] = lambda a=a, b=b, i=i: (
            b * a * b - a * b * a - embed(pres.l, i) * a - embed(pres.r, i) * b)
    for i in range(1, n):
        for j in range(1, n + 1):
            if j not in (i, i + 1):
                checks[f"far_dx[{i},{j}]"] = lambda d=g.Dd(i), x=g.X(j): d * x - x * d
    for i in range(1, n):
        for j in range(i + 2, n):
            checks[f"far_dd[{i},{j}]"] = lambda a=g.Dd(i), b=g.Dd(j): a * b - b * a
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            checks[f"comm_xx[{i},{j}]"] = lambda a=g.X(i), b=g.X(j): a * b - b * a

    results = []
    for name, statement in relation_instances(n):
        results.append(_operator_result(name, statement, checks[name]()))
    if n < 3:
        results.append(RelationResult("braid", "needs at least 3 strands", "n/a"))
    if F.graded:
        for name, deg in (("s", -2), ("t", 0), ("l", -4), ("r", -4)):
            f = getattr(pres, name)
            bad = f.first_inhomogeneous_degree(deg)
            results.append(RelationResult(
                f"homogeneity[{name}]", f"{name} homogeneous of degree {deg}",
                "pass" if bad is None else "fail", bad, f.valid))
    return VerificationReport(F.name, n, T, results)


def symmetric_simplification(F: FormalGroupLaw, n: int = 3) -> VerificationReport:
    """For symmetric laws: ``s = 0``, ``r = -l``, ``∂_i^2 = 0`` and the one-parameter braid form."""
    if not F.is_symmetric():
        raise NotSymmetric(f"{F.name} is not symmetric")
    n = max(n, 3)
    s, _ = deformation_st(F)
    l, r = deformation_lr(F)
    g = build_generators(F, n)
    results = [
        RelationResult("s=0", "s(x1,x2) = 0", "pass" if s.is_zero() else "fail",
                       s.lowest_degree(), s.valid),
    ]
    lr = l + r
    results.append(RelationResult("r=-l", "r = -l", "pass" if lr.is_zero() else "fail",
                                  lr.lowest_degree(), lr.valid))
    for i in range(1, n):
        d = g.Dd(i)
        results.append(_operator_result(f"nil_square[{i}]", f"d{i}^2 = 0", d * d))
    for i in range(1, n - 1):
        a, b = g.Dd(i), g.Dd(i + 1)
        L = TwistedOperator.scalar(l.rename(n, [i, i + 1, i + 2]))
        results.append(_operator_result(
            f"braid_symmetric[{i}]",
            f"d{i + 1} d{i} d{i + 1} - d{i} d{i + 1} d{i} = l (d{i} - d{i + 1})",
            b * a * b - a * b * a - L * (a - b)))
    return VerificationReport(F.name, n, F.trunc, results)


def first_order_delta(F: FormalGroupLaw, F1: TruncSeries) -> dict[str, TruncSeries]:
    """ε-linear parts of ``s, t, l, r`` for ``F + ε F1`` over ``R[ε]/(ε^2)``."""
    Fe = fgl_perturb(F, F1)
    s, t = deformation_st(Fe)
    l, r = deformation_lr(Fe)
    return {k: v.param_part(PERTURBATION_PARAM, 1) for k, v in zip("stlr", (s, t, l, r))}


def tampered(pres: Presentation, **series: TruncSeries) -> Presentation:
    """Copy of a presentation with some deformation series replaced (negative controls)."""
    return replace(pres, **series)


def op_compose(A: TwistedOperator, B: TwistedOperator) -> TwistedOperator:
    return A.compose(B)


def op_apply(A: TwistedOperator, f: TruncSeries) -> TruncSeries:
    return A.apply(f)
