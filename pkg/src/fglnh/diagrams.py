"""Strand diagrams for words in the generators ``x_i`` and ``∂_j``.

A word is read left to right and drawn left to right: ``x_i`` is a dot on
strand ``i`` and ``∂_j`` a crossing of strands ``j`` and ``j+1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import IndexOutOfRange, ParseError

_TOKEN = re.compile(r"^(x|d|D|∂)_?\{?(\d+)\}?$")


@dataclass(frozen=True)
class WordDiagram:
    word: tuple[tuple[str, int], ...]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ParseError("a diagram needs at least one strand")
        for kind, i in self.word:
            top = self.n if kind == "x" else self.n - 1
            if not 1 <= i <= top:
                name = f"x{i}" if kind == "x" else f"d{i}"
                raise IndexOutOfRange(f"generator {name} does not fit on {self.n} strands")


def parse_word(text: str, n: int) -> WordDiagram:
    """``"d1 x2 d1"`` → generators; ``∂1``, ``D1`` and ``x_1`` are accepted too."""
    tokens = text.replace(",", " ").replace("*", " ").split()
    word = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if not m:
            raise ParseError(f"bad generator {tok!r}; expected x<i> or d<j>")
        kind = "x" if m.group(1) == "x" else "d"
        word.append((kind, int(m.group(2))))
    return WordDiagram(tuple(word), n)


def render_ascii(diagram: WordDiagram) -> str:
    n = diagram.n
    # strand k sits on row 2k, the gaps between strands on odd rows
    rows = [[] for _ in range(2 * n - 1)]
    labels = [f"x{r // 2 + 1} " if r % 2 == 0 else "" for r in range(2 * n - 1)]
    width = max(len(s) for s in labels)

    def column(cells: dict[int, str]) -> None:
        for r in range(2 * n - 1):
            rows[r].append(cells.get(r, "---" if r % 2 == 0 else "   "))

    for r in range(2 * n - 1):
        rows[r].append("--" if r % 2 == 0 else "  ")
    for kind, i in diagram.word:
        if kind == "x":
            column({2 * (i - 1): "-o-"})
        else:
            top = 2 * (i - 1)
            column({top: "\\ /", top + 1: " X ", top + 2: "/ \\"})
        for r in range(2 * n - 1):
            rows[r].append("--" if r % 2 == 0 else "  ")
    return "\n".join((labels[r].ljust(width) + "".join(rows[r])).rstrip() for r in range(2 * n - 1))


def render_latex(diagram: WordDiagram) -> str:
    """xy-pic source; strand 1 on top, one unit of width per generator."""
    n = diagram.n
    length = len(diagram.word) + 1
    lines = [r"\xy <1cm,0cm>:<0cm,1cm>::"]

    def y(k: int) -> str:
        return str(n - k)

    for pos, (kind, i) in enumerate(diagram.word):
        a, b = pos + 0.5, pos + 1.5
        for k in range(1, n + 1):
            if kind == "d" and k in (i, i + 1):
                continue
            lines.append(f"({a:g},{y(k)});({b:g},{y(k)})**@{{-}};")
        if kind == "x":
            lines.append(f"({pos + 1:g},{y(i)})*{{\\bullet}};")
        else:
            lines.append(f"({a:g},{y(i)});({b:g},{y(i + 1)})**@{{-}};")
            lines.append(f"({a:g},{y(i + 1)});({b:g},{y(i)})**@{{-}};")
    for k in range(1, n + 1):
        lines.append(f"(0,{y(k)});(0.5,{y(k)})**@{{-}};")
        lines.append(f"({length - 0.5:g},{y(k)});({length:g},{y(k)})**@{{-}};")
        lines.append(f"(-0.4,{y(k)})*{{x_{{{k}}}}};")
    lines.append(r"\endxy")
    return "\n".join(lines)
