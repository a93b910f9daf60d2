"""Text formats for sets, graphs and Tarry-Escott tables.

Set file: one element per line, ``p/q`` or an integer literal; ``#`` starts a
comment; blank lines are ignored.  Graph file: first line ``n`` (simple graph)
or ``nX nY`` (bipartite), then one edge ``u v`` per line.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .errors import ParseError
from .setcalc import NumberSet, format_rational

_RATIONAL = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def parse_rational(token: str) -> Fraction:
    m = _RATIONAL.match(token.strip())
    if not m:
        raise ParseError(f"not a rational literal: {token.strip()!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {token.strip()!r}")
    return Fraction(num, den)


def _content_lines(lines: Iterable[str]):
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            yield lineno, text


def parse_set(text: str, source: str | None = None) -> NumberSet:
    elems = []
    for lineno, line in _content_lines(text.splitlines()):
        try:
            elems.append(parse_rational(line))
        except ParseError as exc:
            raise ParseError(str(exc), line=lineno, source=source) from None
    return NumberSet(elems)


def read_set(path: str | Path) -> NumberSet:
    path = Path(path)
    return parse_set(path.read_text(), source=str(path))


def format_set(A: NumberSet) -> str:
    return "".join(format_rational(x) + "\n" for x in A)


def write_set(A: NumberSet, path: str | Path) -> None:
    Path(path).write_text(format_set(A))


def _ints(line: str, lineno: int, expected: int, source) -> list[int]:
    parts = line.split()
    if len(parts) != expected:
        raise ParseError(f"expected {expected} integers, got {len(parts)}", line=lineno, source=source)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"non-integer token in {line!r}", line=lineno, source=source) from None


def parse_graph(text: str, source: str | None = None):
    """Return a SimpleGraph or BipartiteGraph depending on the header."""
    from .graphkit import BipartiteGraph, SimpleGraph

    lines = list(_content_lines(text.splitlines()))
    if not lines:
        raise ParseError("empty graph file", source=source)
    lineno, header = lines[0]
    sizes = header.split()
    if len(sizes) not in (1, 2):
        raise ParseError("header must be 'n' or 'nX nY'", line=lineno, source=source)
    sizes_i = _ints(header, lineno, len(sizes), source)
    edges = [tuple(_ints(line, no, 2, source)) for no, line in lines[1:]]
    try:
        if len(sizes_i) == 1:
            return SimpleGraph.from_edges(sizes_i[0], edges)
        return BipartiteGraph.from_edges(sizes_i[0], sizes_i[1], edges)
    except ValueError as exc:
        raise ParseError(str(exc), source=source) from None


def read_graph(path: str | Path):
    path = Path(path)
    return parse_graph(path.read_text(), source=str(path))


def format_graph(G) -> str:
    from .graphkit import BipartiteGraph

    if isinstance(G, BipartiteGraph):
        head = f"{G.n_left} {G.n_right}\n"
    else:
        head = f"{G.n}\n"
    return head + "".join(f"{u} {v}\n" for u, v in G.edges())


def parse_te_table(text: str, source: str | None = None) -> list[tuple[int, tuple[int, ...], tuple[int, ...]]]:
    """Lines ``k; a_1,...,a_s; b_1,...,b_s``."""
    rows = []
    for lineno, line in _content_lines(text.splitlines()):
        fields = [f.strip() for f in line.split(";")]
        if len(fields) != 3:
            raise ParseError("expected 'k; a_1,...; b_1,...'", line=lineno, source=source)
        try:
            k = int(fields[0])
            left = tuple(int(v) for v in fields[1].split(","))
            right = tuple(int(v) for v in fields[2].split(","))
        except ValueError:
            raise ParseError("non-integer entry", line=lineno, source=source) from None
        rows.append((k, left, right))
    return rows
