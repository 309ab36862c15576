"""Formal group laws over graded parameter rings.

Construction always checks the axioms (unit, commutativity, associativity and,
in graded mode, homogeneity of degree 2) and eagerly caches the formal
inverse, the unit factor of the formal difference and the logarithm.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from gmpy2 import mpq

from .coefring import CoeffElem, CoeffRing, Param, to_q
from .errors import (
    AxiomViolation,
    BeyondValidOrder,
    GradingViolation,
    InternalInconsistency,
    NonzeroConstantTerm,
    NotDivisible,
    ParseError,
    TruncationExhausted,
    UnknownName,
)
from .expr import parse_coeff, parse_series
from .series import DEFAULT_TRUNC, DiffFraction, TruncSeries

PERTURBATION_PARAM = "ε_d"


@dataclass(frozen=True)
class AxiomResult:
    name: str
    passed: bool
    first_failing_degree: int | None = None
    certified_degree: int | None = None
    skipped: bool = False

    def to_json(self) -> dict:
        d = {"name": self.name, "status": "skipped" if self.skipped else ("pass" if self.passed else "fail")}
        if self.first_failing_degree is not None:
            d["first_failing_degree"] = self.first_failing_degree
        if self.certified_degree is not None:
            d["certified_degree"] = self.certified_degree
        return d


@dataclass
class AxiomReport:
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed or r.skipped for r in self.results)

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def first_failure(self) -> AxiomResult | None:
        for r in self.results:
            if not r.passed and not r.skipped:
                return r
        return None

    def __str__(self) -> str:
        lines = []
        for r in self.results:
            status = "skip" if r.skipped else ("PASS" if r.passed else "FAIL")
            extra = f" (first failing degree {r.first_failing_degree})" if not r.passed and not r.skipped else ""
            lines.append(f"{status}  {r.name}{extra}")
        return "\n".join(lines)


def _difference_result(name: str, diff: TruncSeries) -> AxiomResult:
    low = diff.lowest_degree()
    return AxiomResult(name, low is None, low, diff.valid)


def check_axioms(F: TruncSeries, graded: bool = True) -> AxiomReport:
    """Degreewise check of the FGL axioms for a bivariate series ``F``."""
    ring, D = F.ring, F.trunc
    x, y = TruncSeries.variables(ring, 2, D)
    zero2 = TruncSeries.zero(ring, 2, D)
    results = []
    left_unit = F.substitute({1: zero2}) - y
    right_unit = F.substitute({2: zero2}) - x
    lu, ru = _difference_result("unit", left_unit), _difference_result("unit", right_unit)
    degs = [d for d in (lu.first_failing_degree, ru.first_failing_degree) if d is not None]
    results.append(
        AxiomResult("unit", not degs, min(degs) if degs else None, min(left_unit.valid, right_unit.valid))
    )
    results.append(_difference_result("commutativity", F - F.swap(1)))
    if F.constant_term().is_zero():
        X, Y, Z = TruncSeries.variables(ring, 3, D)
        F_yz = F.substitute([Y, Z])
        F_xy = F.substitute([X, Y])
        assoc = F.substitute([X, F_yz]) - F.substitute([F_xy, Z])
        results.append(_difference_result("associativity", assoc))
    else:
        results.append(AxiomResult("associativity", False, 0, F.valid))
    if graded:
        bad = F.first_inhomogeneous_degree(2)
        results.append(AxiomResult("grading", bad is None, bad, F.valid))
    else:
        results.append(AxiomResult("grading", True, skipped=True))
    return AxiomReport(results)


def reversion(f: TruncSeries) -> TruncSeries:
    """Compositional inverse of a one-variable series ``x + O(x^2)``."""
    ring, D = f.ring, f.trunc
    (x,) = TruncSeries.variables(ring, 1, D)
    if not f.slice(0).is_zero() or not (f.slice(1) - x).is_zero():
        raise InternalInconsistency("reversion needs a series of the form x + O(x^2)")
    g = x.with_valid(f.valid)
    for _ in range(f.valid + 1):
        resid = f.substitute([g]) - x
        low = resid.lowest_degree()
        if low is None:
            return g
        g = g - resid.slice(low)
    raise TruncationExhausted("series reversion did not converge")


class FormalGroupLaw:
    """A bivariate series ``F(x, y)`` satisfying the FGL axioms up to its valid order."""

    def __init__(self, F: TruncSeries, name: str = "custom", graded: bool = True):
        if F.nvars != 2:
            raise ParseError("a formal group law is a series in two variables")
        self.F = F
        self.name = name
        self.graded = graded
        self.report = check_axioms(F, graded)
        bad = self.report.first_failure()
        if bad is not None:
            if bad.name == "grading":
                raise GradingViolation(
                    f"F is not homogeneous of degree 2 (first bad x-degree {bad.first_failing_degree});"
                    " use ungraded mode"
                )
            raise AxiomViolation(bad.name, bad.first_failing_degree)
        self.inv = self._solve_inverse()
        x, y = TruncSeries.variables(self.ring, 2, self.trunc)
        # x -_F y = F(x, inv(y)) = (x - y) * u(x, y)
        self.formal_difference = F.substitute([x, self.inv.rename(2, [2])])
        try:
            self.unit_factor = self.formal_difference.divide_linear_diff(1, 2)
        except NotDivisible as exc:
            raise InternalInconsistency("F(x, inv(y)) does not vanish on the diagonal") from exc
        if self.unit_factor.constant_term() != 1:
            raise InternalInconsistency("unit factor of the formal difference must start with 1")
        self.unit_inverse = self.unit_factor.invert_unit()
        dFy = F.derivative(2).substitute({2: TruncSeries.zero(self.ring, 2, self.trunc)})
        self.log = dFy.rename(1, [1, 1]).invert_unit().integrate(1).truncated(self.trunc)
        self.exp = reversion(self.log)

    @property
    def ring(self) -> CoeffRing:
        return self.F.ring

    @property
    def trunc(self) -> int:
        return self.F.trunc

    @property
    def valid(self) -> int:
        return self.F.valid

    def _solve_inverse(self) -> TruncSeries:
        (x,) = TruncSeries.variables(self.ring, 1, self.trunc)
        inv = (-x).with_valid(self.F.valid)
        for _ in range(self.F.valid + 1):
            resid = self.F.substitute([x, inv])
            low = resid.lowest_degree()
            if low is None:
                return inv
            inv = inv - resid.slice(low)
        raise TruncationExhausted("formal inverse did not converge within the truncation order")

    def reciprocal_difference(self, n: int, a: int, b: int) -> DiffFraction:
        """``1/(x_a -_F x_b)`` as a DiffFraction in ``n`` variables."""
        return DiffFraction(self.unit_inverse.rename(n, [a, b]), [(a, b)])

    def is_symmetric(self) -> bool:
        d = self.formal_difference
        return (d + d.swap(1)).is_zero()

    def genus(self, N: int) -> list[CoeffElem]:
        """Values on ℂP^0 … ℂP^N: ``(n+1)`` times the ``x^{n+1}`` log coefficient."""
        if N > self.log.valid - 1:
            raise BeyondValidOrder(f"genus up to ℂP^{N} needs log valid to degree {N + 1}")
        return [self.log.coeff((n + 1,)) * (n + 1) for n in range(N + 1)]

    def truncated(self, D: int) -> "FormalGroupLaw":
        if D == self.trunc:
            return self
        if D > self.trunc:
            raise BeyondValidOrder(f"cannot raise truncation from {self.trunc} to {D}")
        return FormalGroupLaw(self.F.truncated(D), self.name, self.graded)

    def specialize(self, bindings: Mapping[str, object], target: CoeffRing | None = None,
                   graded: bool | None = None, name: str | None = None) -> "FormalGroupLaw":
        if target is None:
            target = CoeffRing(tuple(p for p in self.ring.params if p.name not in bindings))
        values = {k: (parse_coeff(v, target) if isinstance(v, str) else target.coerce(v))
                  for k, v in bindings.items()}
        F = self.F.specialize(values, target)
        return FormalGroupLaw(F, name or self.name, self.graded if graded is None else graded)

    def fingerprint(self) -> str:
        blob = json.dumps({"ring": self.ring.to_json(), "F": self.F.to_json()}, ensure_ascii=False,
                          sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    def to_text(self) -> str:
        return self.F.to_text(["x", "y"])

    def __repr__(self) -> str:
        return f"FormalGroupLaw({self.name}: {self.to_text()} over {self.ring}, D={self.trunc})"


# catalog ---------------------------------------------------------------

def _ring_with_overrides(default: Sequence[Param], overrides: Mapping[str, Param] | None) -> CoeffRing:
    overrides = dict(overrides or {})
    params = []
    for p in default:
        params.append(overrides.pop(p.name, p))
    if overrides:
        raise UnknownName(f"unknown parameters {sorted(overrides)} for this catalog entry")
    return CoeffRing(tuple(params))


def _const(ring, name, trunc, n=2):
    return TruncSeries.const(ring, n, ring.gen(name), trunc)


def _build_log_law(ring: CoeffRing, coeffs: Sequence[CoeffElem], trunc: int) -> TruncSeries:
    """``exp(log x + log y)`` for ``log x = x + Σ m_i x^{i+1}``."""
    (t,) = TruncSeries.variables(ring, 1, trunc)
    log = t
    power = t
    for c in coeffs:
        power = power * t
        log = log + power * c
    exp = reversion(log)
    x, y = TruncSeries.variables(ring, 2, trunc)
    return exp.substitute([log.substitute([x]) + log.substitute([y])])


def _euler_series(ring: CoeffRing, trunc: int) -> TruncSeries:
    (t,) = TruncSeries.variables(ring, 1, trunc)
    Q = 1 - 2 * _const(ring, "δ", trunc, 1) * t ** 2 + _const(ring, "ε", trunc, 1) * t ** 4
    sq = Q.sqrt()
    x, y = TruncSeries.variables(ring, 2, trunc)
    num = x * sq.rename(2, [2]) + y * sq.rename(2, [1])
    den = 1 - _const(ring, "ε", trunc) * x ** 2 * y ** 2
    return num * den.invert_unit()


_UNIVERSAL_RE = re.compile(r"^universal_rational(?:\((\d+)\)|:(\d+)|_?(\d+))$")
CATALOG_NAMES = ("additive", "multiplicative", "chi", "euler", "universal_rational(k)")


def fgl_catalog(name: str, trunc: int = DEFAULT_TRUNC, params: Mapping[str, Param] | None = None,
                bindings: Mapping[str, object] | None = None, graded: bool = True) -> FormalGroupLaw:
    """Built-in laws: additive, multiplicative, chi, euler, universal_rational(k)."""
    m = _UNIVERSAL_RE.match(name)
    if name == "additive":
        ring = _ring_with_overrides((), params)
        x, y = TruncSeries.variables(ring, 2, trunc)
        F = x + y
    elif name == "multiplicative":
        ring = _ring_with_overrides((Param("β", -2),), params)
        x, y = TruncSeries.variables(ring, 2, trunc)
        F = x + y - _const(ring, "β", trunc) * x * y
    elif name == "chi":
        ring = _ring_with_overrides((Param("α", -4), Param("β", -2)), params)
        x, y = TruncSeries.variables(ring, 2, trunc)
        num = x + y - _const(ring, "β", trunc) * x * y
        F = num * (1 + _const(ring, "α", trunc) * x * y).invert_unit()
    elif name == "euler":
        ring = _ring_with_overrides((Param("δ", -4), Param("ε", -8)), params)
        F = _euler_series(ring, trunc)
    elif m:
        k = int(next(g for g in m.groups() if g))
        ring = _ring_with_overrides(tuple(Param(f"m{i}", -2 * i) for i in range(1, k + 1)), params)
        F = _build_log_law(ring, [ring.gen(f"m{i}") for i in range(1, k + 1)], trunc)
        name = f"universal_rational({k})"
    else:
        raise UnknownName(f"unknown formal group law {name!r}; known: {', '.join(CATALOG_NAMES)}")
    fgl = FormalGroupLaw(F, name, graded)
    return fgl.specialize(bindings, graded=graded) if bindings else fgl


def random_log_fgl(seed: int | random.Random, k: int = 4, trunc: int = 8, symbolic: bool = True,
                   odd: bool = False) -> FormalGroupLaw:
    """Pseudo-random specialization of the rational universal law.

    With ``symbolic`` the log coefficients are ``c_i β^i`` (graded over ℚ[β]);
    otherwise they are plain rationals and the law is ungraded.  ``odd`` zeroes
    the even-power log coefficients, giving a symmetric law.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    cs = []
    for i in range(1, k + 1):
        c = mpq(rng.randint(-5, 5), rng.randint(1, 4))
        cs.append(mpq(0) if odd and i % 2 else c)
    if symbolic:
        ring = CoeffRing((Param("β", -2),))
        coeffs = [ring.gen("β") ** i * c for i, c in enumerate(cs, start=1)]
    else:
        ring = CoeffRing(())
        coeffs = [ring.const(c) for c in cs]
    F = _build_log_law(ring, coeffs, trunc)
    label = ",".join(str(c) for c in cs)
    return FormalGroupLaw(F, f"random_log[{label}]", graded=symbolic)


# spec files ------------------------------------------------------------

def _parse_params(raw) -> CoeffRing:
    params = []
    for p in raw or []:
        try:
            params.append(Param(str(p["name"]), int(p.get("degree", 0)), p.get("nilpotent_order")))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad parameter declaration {p!r}") from exc
    return CoeffRing(tuple(params))


def fgl_from_spec(spec: Mapping, trunc: int = DEFAULT_TRUNC, graded: bool | None = None) -> FormalGroupLaw:
    """Build a law from an FGLSpec mapping (the parsed JSON document)."""
    if not isinstance(spec, Mapping):
        raise ParseError("FGL spec must be a JSON object")
    ring = _parse_params(spec.get("params"))
    name = str(spec.get("name", "custom"))
    if graded is None:
        graded = bool(spec.get("graded", True))
    form = spec.get("form")
    if not isinstance(form, Mapping) or "type" not in form:
        raise ParseError("FGL spec needs a 'form' object with a 'type'")
    kind = form["type"]
    xy = ["x", "y"]

    def bivariate(key):
        if key not in form:
            raise ParseError(f"form '{kind}' needs field '{key}'")
        return parse_series(form[key], ring, xy, trunc)

    if kind == "polynomial":
        if "coeffs" in form:
            terms = {}
            for exps, c in form["coeffs"].items():
                try:
                    i, j = (int(e) for e in str(exps).split(","))
                except ValueError as exc:
                    raise ParseError(f"bad exponent key {exps!r}; expected 'i,j'") from exc
                terms[(i, j)] = parse_coeff(c, ring)
            F = TruncSeries.from_terms(ring, 2, terms, trunc)
        else:
            F = bivariate("F")
    elif kind == "rational":
        den = bivariate("denom")
        if den.constant_term() != 1:
            raise ParseError("rational form needs a denominator with constant term 1")
        F = bivariate("num") * den.invert_unit()
    elif kind == "sqrt_rational":
        if "Q" not in form:
            raise ParseError("sqrt_rational form needs field 'Q'")
        Q = parse_series(form["Q"], ring, ["x"], trunc)
        if Q.constant_term() != 1:
            raise ParseError("Q must have constant term 1")
        sq = Q.sqrt()
        x, y = TruncSeries.variables(ring, 2, trunc)
        num = x * sq.rename(2, [2]) + y * sq.rename(2, [1])
        den = bivariate("denom") if "denom" in form else TruncSeries.one(ring, 2, trunc)
        if den.constant_term() != 1:
            raise ParseError("denominator must have constant term 1")
        F = num * den.invert_unit()
    elif kind == "log":
        coeffs = form.get("coeffs")
        if not isinstance(coeffs, list):
            raise ParseError("log form needs a list 'coeffs' of m_1 … m_k")
        F = _build_log_law(ring, [parse_coeff(c, ring) for c in coeffs], trunc)
    else:
        raise ParseError(f"unknown form type {kind!r}")
    return FormalGroupLaw(F, name, graded)


def load_spec_file(path: str, trunc: int = DEFAULT_TRUNC, graded: bool | None = None) -> FormalGroupLaw:
    try:
        with open(path, encoding="utf-8") as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read FGL spec {path}: {exc}") from exc
    return fgl_from_spec(spec, trunc, graded)


# other operations ------------------------------------------------------

def fgl_hom_check(phi: TruncSeries, F: FormalGroupLaw, G: FormalGroupLaw) -> bool:
    """Whether ``phi(F(x, y)) = G(phi(x), phi(y))`` up to the common valid order."""
    if phi.nvars != 1:
        raise ParseError("a homomorphism is a one-variable series")
    if not phi.constant_term().is_zero():
        raise NonzeroConstantTerm("homomorphism must have zero constant term")
    lhs = phi.substitute([F.F])
    x, y = TruncSeries.variables(phi.ring, 2, phi.trunc)
    rhs = G.F.substitute([phi.substitute([x]), phi.substitute([y])])
    return (lhs - rhs).is_zero()


def fgl_perturb(F: FormalGroupLaw, F1: TruncSeries, name: str = PERTURBATION_PARAM) -> FormalGroupLaw:
    """``F + ε F1`` over ``R[ε]/(ε^2)``; the axioms are checked, not assumed."""
    if F1.ring != F.ring or F1.nvars != 2:
        raise ParseError("perturbation must be a bivariate series over the law's ring")
    graded = F.graded
    degree = 0
    if not F1.is_zero():
        degs = F1.topological_degrees()
        if len(degs) == 1:
            degree = 2 - degs.pop()
        else:
            graded = False
    ring = F.ring.extend(Param(name, degree, 2))
    eps = TruncSeries.const(ring, 2, ring.gen(name), F.trunc)
    Fe = F.F.change_ring(ring) + eps * F1.change_ring(ring)
    return FormalGroupLaw(Fe, f"{F.name}+{name}*F1", graded)


def fgl_log_exp(F: FormalGroupLaw) -> tuple[TruncSeries, TruncSeries]:
    return F.log, F.exp


def fgl_inverse(F: FormalGroupLaw) -> TruncSeries:
    return F.inv


def fgl_formal_diff(F: FormalGroupLaw) -> tuple[TruncSeries, DiffFraction]:
    return F.unit_factor, F.reciprocal_difference(2, 1, 2)


def fgl_is_symmetric(F: FormalGroupLaw) -> bool:
    return F.is_symmetric()


def fgl_check_axioms(F: FormalGroupLaw | TruncSeries, graded: bool = True) -> AxiomReport:
    if isinstance(F, FormalGroupLaw):
        return check_axioms(F.F, F.graded)
    return check_axioms(F, graded)


def fgl_genus(F: FormalGroupLaw, N: int) -> list[CoeffElem]:
    return F.genus(N)
