"""``fglnh`` command line.

Exit codes: 0 success, 1 a relation failed, 2 bad input, 3 internal
inconsistency.  All numbers are printed as exact rationals.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import render
from .coefring import Param
from .diagrams import parse_word, render_ascii, render_latex
from .errors import FGLNHError, InputError, InternalInconsistency, ParseError
from .expr import parse_series
from .fgl import FormalGroupLaw, fgl_catalog, load_spec_file, random_log_fgl
from .nilhecke import (
    braid_obstruction,
    deformation_lr,
    deformation_lr_reading_order,
    emit_presentation,
    first_order_delta,
    symmetric_simplification,
    verify_presentation,
)
from .series import DEFAULT_TRUNC, TruncSeries

EXIT_OK, EXIT_RELATION, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
MIN_TRUNC = 4
FORMATS = ("text", "json", "latex")


@dataclass
class CliConfig:
    command: str
    fgl: str | None = None
    spec: str | None = None
    params: dict[str, Param] = field(default_factory=dict)
    bindings: dict[str, str] = field(default_factory=dict)
    seed: int | None = None
    n: int = 3
    trunc: int = DEFAULT_TRUNC
    format: str = "text"
    graded: bool | None = None
    output: str | None = None

    def validate(self) -> None:
        if self.trunc < MIN_TRUNC:
            raise InputError(f"--trunc must be at least {MIN_TRUNC}")
        least = 1 if self.command == "render" else 2
        if self.n < least:
            raise InputError(f"-n must be at least {least}")
        if self.command != "render" and (self.fgl is None) == (self.spec is None):
            raise InputError("give exactly one of --fgl NAME or --spec PATH")
        if self.spec is not None and (self.params or self.bindings):
            raise InputError("--param/--set apply to catalog laws; declare parameters in the spec file")

    def load_fgl(self) -> FormalGroupLaw:
        if self.spec is not None:
            return load_spec_file(self.spec, self.trunc, self.graded)
        if self.fgl == "random":
            if self.seed is None:
                raise InputError("--fgl random needs --seed")
            return random_log_fgl(self.seed, 4, self.trunc, symbolic=self.graded is not False)
        graded = True if self.graded is None else self.graded
        return fgl_catalog(self.fgl, self.trunc, self.params or None, self.bindings or None, graded)


_PARAM_RE = re.compile(r"^\s*([^=\s]+)\s*=\s*([+-]?\d+)\s*(?::\s*(free|nil(?:potent)?:?(\d+)))?\s*$")


def parse_param(text: str) -> Param:
    """``NAME=DEG[:free|:nilK]``, e.g. ``β=-2:free`` or ``e=0:nil2``."""
    m = _PARAM_RE.match(text)
    if not m:
        raise ParseError(f"bad --param {text!r}; expected NAME=DEGREE[:free|:nilK]")
    name, deg, _kind, order = m.groups()
    return Param(name, int(deg), int(order) if order else None)


def parse_binding(text: str) -> tuple[str, str]:
    name, eq, expr = text.partition("=")
    if not eq or not name.strip() or not expr.strip():
        raise ParseError(f"bad --set {text!r}; expected NAME=EXPR")
    return name.strip(), expr.strip()


def _default_trunc() -> int:
    raw = os.environ.get("FGLNH_TRUNC")
    if raw is None:
        return DEFAULT_TRUNC
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"FGLNH_TRUNC must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("formal group law")
    src.add_argument("--fgl", metavar="NAME",
                     help="catalog law: additive, multiplicative, chi, euler, universal_rational(k), random")
    src.add_argument("--spec", metavar="PATH", help="FGL spec JSON file")
    src.add_argument("--param", action="append", default=[], metavar="NAME=DEG:KIND",
                     help="redeclare a catalog parameter, e.g. β=-2:free or e=0:nil2")
    src.add_argument("--set", action="append", default=[], dest="bindings", metavar="NAME=EXPR",
                     help="bind a catalog parameter to an expression, e.g. α=0")
    src.add_argument("--seed", type=int, help="seed for --fgl random")
    common.add_argument("-n", type=int, default=3, help="number of strands (default 3)")
    common.add_argument("--trunc", type=int, default=None,
                        help=f"truncation order D (default {DEFAULT_TRUNC}, or $FGLNH_TRUNC)")
    common.add_argument("--format", choices=FORMATS, default="text")
    grading = common.add_mutually_exclusive_group()
    grading.add_argument("--graded", dest="graded", action="store_true", default=None)
    grading.add_argument("--ungraded", dest="graded", action="store_false")
    common.add_argument("-o", "--output", metavar="PATH", help="write to a file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="fglnh", description="Generalized nilHecke presentations of formal group laws")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("present", parents=[common], help="print s, t, l, r and the relation block")
    sub.add_parser("verify", parents=[common], help="check every relation as an operator identity")
    g = sub.add_parser("genus", parents=[common], help="genus of ℂP^0 … ℂP^N")
    g.add_argument("-N", type=int, default=5)
    sub.add_parser("obstruction", parents=[common], help="solve for the braid obstruction (l, r)")
    p = sub.add_parser("perturb", parents=[common], help="first-order change of s, t, l, r under F + ε F1")
    p.add_argument("--F1", required=True, metavar="EXPR", help="bivariate series in x, y")
    r = sub.add_parser("render", parents=[common], help="draw a word in x_i and d_j")
    r.add_argument("word", help='e.g. "d1 x2 d1"')
    return parser


def config_from_args(args: argparse.Namespace) -> CliConfig:
    params = {}
    for text in args.param:
        p = parse_param(text)
        params[p.name] = p
    cfg = CliConfig(
        command=args.command,
        fgl=args.fgl,
        spec=args.spec,
        params=params,
        bindings=dict(parse_binding(b) for b in args.bindings),
        seed=args.seed,
        n=args.n,
        trunc=args.trunc if args.trunc is not None else _default_trunc(),
        format=args.format,
        graded=args.graded,
        output=args.output,
    )
    cfg.validate()
    return cfg


# commands ----------------------------------------------------------------

def cmd_present(cfg: CliConfig) -> tuple[int, str]:
    pres = emit_presentation(cfg.load_fgl(), cfg.n)
    if cfg.format == "json":
        return EXIT_OK, render.dumps(render.presentation_json(pres))
    if cfg.format == "latex":
        return EXIT_OK, render.presentation_latex(pres) + "\n"
    return EXIT_OK, render.presentation_text(pres) + "\n"


def cmd_verify(cfg: CliConfig) -> tuple[int, str]:
    F = cfg.load_fgl()
    pres = emit_presentation(F, cfg.n)
    report = verify_presentation(F, cfg.n, presentation=pres)
    sym = symmetric_simplification(F, cfg.n) if pres.symmetric else None
    ok = report.ok and (sym is None or sym.ok)
    code = EXIT_OK if ok else EXIT_RELATION
    if cfg.format == "json":
        doc = render.presentation_json(pres, report)
        doc["symmetric_branch"] = [r.to_json() for r in sym.results] if sym else None
        doc["verdict"] = "pass" if ok else "fail"
        return code, render.dumps(doc)
    if cfg.format == "latex":
        raise InputError("verify has no LaTeX output; use text or json")
    lines = [f"{F.name}: {cfg.n} strands, truncation {F.trunc}", report.to_text()]
    if sym is not None:
        lines += ["symmetric law:", sym.to_text()]
    failed = len(report.failures()) + (len(sym.failures()) if sym else 0)
    lines.append("ALL RELATIONS HOLD" if ok else f"{failed} RELATION(S) FAIL")
    return code, "\n".join(lines) + "\n"


def cmd_genus(cfg: CliConfig, N: int) -> tuple[int, str]:
    F = cfg.load_fgl()
    if N < 0 or N > F.trunc - 1:
        raise InputError(f"-N must lie in 0..{F.trunc - 1} at truncation {F.trunc}")
    values = F.genus(N)
    if cfg.format == "json":
        return EXIT_OK, render.dumps({"fgl": F.name, "genus": [str(v) for v in values]})
    if cfg.format == "latex":
        rows = [f"\\rho(\\mathbb{{CP}}^{{{k}}}) &= {_coeff_latex(v)}" for k, v in enumerate(values)]
        return EXIT_OK, "\\begin{align*}\n" + " \\\\\n".join(rows) + "\n\\end{align*}\n"
    lines = [f"ℂP^{k}  {v}" for k, v in enumerate(values)]
    return EXIT_OK, "\n".join(lines) + "\n"


def _coeff_latex(c) -> str:
    return render.series_latex(TruncSeries.const(c.ring, 1, c, 1))


def cmd_obstruction(cfg: CliConfig) -> tuple[int, str]:
    F = cfg.load_fgl()
    l, r = braid_obstruction(F)
    cl, cr = deformation_lr(F)
    ol, orr = deformation_lr_reading_order(F)
    if not ((l - cl).is_zero() and (r - cr).is_zero()):
        raise InternalInconsistency("solved (l, r) disagrees with the closed form")
    alt_agrees = (l - ol).is_zero() and (r - orr).is_zero()
    holds = l.is_zero() and r.is_zero()
    verdict = "BRAID HOLDS" if holds else "BRAID FAILS"
    if cfg.format == "json":
        doc = {
            "fgl": F.name,
            "trunc": F.trunc,
            "l": l.to_text(),
            "r": r.to_text(),
            "closed_form": "agrees",
            "reading_order": {"l": ol.to_text(), "r": orr.to_text(),
                              "status": "agrees" if alt_agrees else "differs"},
            "verdict": verdict,
        }
        return EXIT_OK, render.dumps(doc)
    if cfg.format == "latex":
        loc = render.LOCAL_LATEX
        body = (f"l &= {render.series_latex(l, loc)} \\\\\nr &= {render.series_latex(r, loc)}")
        return EXIT_OK, f"% {verdict}\n\\begin{{align*}}\n{body}\n\\end{{align*}}\n"
    lines = [
        f"{F.name}: solving d2 d1 d2 - d1 d2 d1 = l d1 + r d2 at truncation {F.trunc}",
        f"l(x1,x2,x3) = {l}",
        f"r(x1,x2,x3) = {r}",
        "closed form: agrees",
    ]
    if alt_agrees:
        lines.append("reading-order pair: agrees")
    else:
        lines += [
            "reading-order pair: DIFFERS; it gives",
            f"  l(x1,x2,x3) = {ol}",
            f"  r(x1,x2,x3) = {orr}",
        ]
    lines.append(verdict)
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_perturb(cfg: CliConfig, F1_text: str) -> tuple[int, str]:
    F = cfg.load_fgl()
    F1 = parse_series(F1_text, F.ring, ["x", "y"], F.trunc)
    deltas = first_order_delta(F, F1)
    names = {"s": "δs", "t": "δt", "l": "δl", "r": "δr"}
    if cfg.format == "json":
        doc = {"fgl": F.name, "F1": F1.to_text(["x", "y"])}
        doc.update({names[k]: v.to_text() for k, v in deltas.items()})
        return EXIT_OK, render.dumps(doc)
    if cfg.format == "latex":
        loc = render.LOCAL_LATEX
        rows = [f"\\delta {k} &= {render.series_latex(v, loc)}" for k, v in deltas.items()]
        return EXIT_OK, "\\begin{align*}\n" + " \\\\\n".join(rows) + "\n\\end{align*}\n"
    lines = [f"{F.name} + ε·({F1.to_text(['x', 'y'])})"]
    lines += [f"{names[k]} = {v}" for k, v in deltas.items()]
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_render(cfg: CliConfig, word: str) -> tuple[int, str]:
    diagram = parse_word(word, cfg.n)
    if cfg.format == "latex":
        return EXIT_OK, render_latex(diagram) + "\n"
    if cfg.format == "json":
        doc = {"word": [f"{k}{i}" for k, i in diagram.word], "n": diagram.n,
               "ascii": render_ascii(diagram)}
        return EXIT_OK, render.dumps(doc)
    return EXIT_OK, render_ascii(diagram) + "\n"


def run(args: argparse.Namespace) -> tuple[int, str]:
    cfg = config_from_args(args)
    if cfg.command == "present":
        return cmd_present(cfg)
    if cfg.command == "verify":
        return cmd_verify(cfg)
    if cfg.command == "genus":
        return cmd_genus(cfg, args.N)
    if cfg.command == "obstruction":
        cfg.n = 3
        return cmd_obstruction(cfg)
    if cfg.command == "perturb":
        return cmd_perturb(cfg, args.F1)
    return cmd_render(cfg, args.word)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        code, text = run(args)
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except FGLNHError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
