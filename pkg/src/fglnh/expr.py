"""Parse polynomial expressions like ``"x + y - β*x*y"`` without ``eval``.

Only integer literals, names, ``+ - * /`` (division by rational constants),
``**`` and ``^`` (both meaning power) are accepted.  ``^`` is rewritten to
``**`` before parsing so it binds tighter than ``*``.
"""

from __future__ import annotations

import ast
from typing import Mapping, Sequence

from gmpy2 import mpq

from .coefring import CoeffElem, CoeffRing
from .errors import ParseError
from .series import TruncSeries


def _evaluate(text: str, names: Mapping[str, object], const):
    try:
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ParseError(f"only integer literals allowed, got {node.value!r} in {text!r}")
            return const(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ParseError(f"unknown name {node.id!r} in {text!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            op = node.op
            if isinstance(op, ast.Add):
                return left + right
            if isinstance(op, ast.Sub):
                return left - right
            if isinstance(op, ast.Mult):
                return left * right
            if isinstance(op, ast.Div):
                q = _as_rational(right)
                if q is None:
                    raise ParseError(f"division only by rational constants in {text!r}")
                if not q:
                    raise ParseError(f"division by zero in {text!r}")
                return left * (1 / q)
            if isinstance(op, ast.Pow):
                q = _as_rational(right)
                if q is None or q.denominator != 1 or q < 0:
                    raise ParseError(f"exponents must be non-negative integers in {text!r}")
                return left ** int(q)
        raise ParseError(f"unsupported syntax {ast.dump(node)[:40]}... in {text!r}")

    return ev(tree)


def _as_rational(value):
    if isinstance(value, CoeffElem):
        return value.constant_part() if value.is_constant() else None
    if isinstance(value, TruncSeries):
        if any(any(k) for k in value.flat):
            return None
        return value.constant_term().constant_part()
    return mpq(value)


def parse_coeff(text: str, ring: CoeffRing) -> CoeffElem:
    names = {name: ring.gen(name) for name in ring.names}
    out = _evaluate(str(text), names, ring.const)
    return ring.coerce(out)


def parse_series(
    text: str, ring: CoeffRing, varnames: Sequence[str], trunc: int
) -> TruncSeries:
    n = len(varnames)
    names: dict[str, object] = {
        name: TruncSeries.const(ring, n, ring.gen(name), trunc) for name in ring.names
    }
    for i, v in enumerate(varnames, start=1):
        if v in names:
            raise ParseError(f"variable {v!r} clashes with a parameter name")
        names[v] = TruncSeries.var(ring, n, i, trunc)
    out = _evaluate(str(text), names, lambda c: TruncSeries.const(ring, n, c, trunc))
    if not isinstance(out, TruncSeries):
        out = TruncSeries.const(ring, n, out, trunc)
    return out
