"""Text, JSON and LaTeX renderings of presentations and series."""

from __future__ import annotations

import json
import re
import unicodedata
from typing import Sequence

from .nilhecke import Presentation, VerificationReport, relation_instances
from .series import TruncSeries

# local variable names used for the deformation series: x1 ↦ x_i, x2 ↦ x_{i+1}, …
LOCAL_LATEX = ("x_i", "x_{i+1}", "x_{i+2}")


def dumps(obj) -> str:
    """Canonical JSON: stable key order as built, two-space indent, UTF-8 kept."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def name_latex(name: str) -> str:
    base, _, sub = name.partition("_")
    m = re.fullmatch(r"([A-Za-z]+)(\d+)", base)
    if m and not sub:
        base, sub = m.groups()
    if len(base) == 1 and not base.isascii():
        uname = unicodedata.name(base, "").lower()
        if "greek" in uname:
            word = uname.split()[-1]
            base = "\\varepsilon" if word == "epsilon" else "\\" + word
    elif len(base) > 1:
        base = f"\\mathit{{{base}}}"
    return f"{base}_{{{sub}}}" if sub else base


def _power(sym: str, e: int) -> str:
    return sym if e == 1 else f"{sym}^{{{e}}}"


def series_latex(f: TruncSeries, varnames: Sequence[str] | None = None) -> str:
    n = f.nvars
    xs = list(varnames) if varnames else [f"x_{{{k}}}" for k in range(1, n + 1)]
    ps = [name_latex(p) for p in f.ring.names]
    items = f.sorted_items()
    if not items:
        return "0"
    out = []
    for idx, (key, c) in enumerate(items):
        factors = [_power(ps[k], e) for k, e in enumerate(key[n:]) if e]
        factors += [_power(xs[k], e) for k, e in enumerate(key[:n]) if e]
        neg = c < 0
        mag = -c if neg else c
        if mag.denominator == 1:
            num = "" if (mag == 1 and factors) else str(mag.numerator)
        else:
            num = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}"
        body = " ".join(([num] if num else []) + factors)
        sign = ("-" if neg else "") if idx == 0 else (" - " if neg else " + ")
        out.append(sign + body)
    return "".join(out)


def presentation_json(pres: Presentation, report: VerificationReport | None = None) -> dict:
    F = pres.fgl
    doc = {
        "fgl": {"name": F.name, "spec_hash": F.fingerprint(), "F": F.to_text(),
                "ring": F.ring.to_json(), "graded": F.graded},
        "n": pres.n,
        "trunc": pres.trunc,
        "valid": pres.valid,
    }
    for k, v in pres.series().items():
        doc[k] = v.to_text()
    doc["symmetric"] = pres.symmetric
    doc["metadata"] = dict(pres.metadata)
    if report is not None:
        doc["relations"] = [r.to_json() for r in report.results]
    else:
        doc["relations"] = [{"name": name, "statement": st} for name, st in relation_instances(pres.n)]
    return doc


def presentation_text(pres: Presentation) -> str:
    F = pres.fgl
    lines = [
        f"formal group law: {F.name}",
        f"  F(x, y) = {F.to_text()}   over {F.ring}, truncation {pres.trunc}",
        f"  symmetric: {'yes' if pres.symmetric else 'no'}",
        "",
        f"s(x1,x2) = {pres.s}",
        f"t(x1,x2) = {pres.t}",
        f"l(x1,x2,x3) = {pres.l}",
        f"r(x1,x2,x3) = {pres.r}",
        "",
        f"relations on {pres.n} strands:",
    ]
    lines += [f"  {st}" for _, st in relation_instances(pres.n)]
    if pres.metadata:
        lines.append("")
        lines += [f"{k}: {v}" for k, v in pres.metadata.items()]
    return "\n".join(lines)


def presentation_latex(pres: Presentation) -> str:
    loc = LOCAL_LATEX
    args2 = "(x_i, x_{i+1})"
    args3 = "(x_i, x_{i+1}, x_{i+2})"
    s = series_latex(pres.s, loc[:2])
    t = series_latex(pres.t, loc[:2])
    l = series_latex(pres.l, loc)
    r = series_latex(pres.r, loc)
    rows = [
        r"\partial_i^2 &= s" + args2 + r" \partial_i",
        r"x_i \partial_i - \partial_i x_{i+1} &= t" + args2,
        r"\partial_i x_i - x_{i+1} \partial_i &= t" + args2,
        r"\partial_{i+1} \partial_i \partial_{i+1} - \partial_i \partial_{i+1} \partial_i &= l"
        + args3 + r" \partial_i + r" + args3 + r" \partial_{i+1}",
        r"\partial_i x_j &= x_j \partial_i \quad (j \neq i, i+1)",
        r"\partial_i \partial_j &= \partial_j \partial_i \quad (|i - j| > 1)",
        r"x_i x_j &= x_j x_i",
    ]
    defs = [
        f"s{args2} &= {s}",
        f"t{args2} &= {t}",
        f"l{args3} &= {l}",
        f"r{args3} &= {r}",
    ]
    return "\n".join([
        f"% {pres.fgl.name}, n = {pres.n}, truncation {pres.trunc}",
        r"\begin{align*}",
        " \\\\\n".join(rows),
        r"\end{align*}",
        "where",
        r"\begin{align*}",
        " \\\\\n".join(defs),
        r"\end{align*}",
    ])
