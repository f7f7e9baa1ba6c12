"""The ``apt-graph v1`` text format.

::

    apt-graph v1 <class> <n> [alphabet]
    u v [> | <] [label]

``>`` is the arc ``u -> v`` and ``<`` the arc ``v -> u``; an oriented edge
without a direction token means ``u -> v``.  ``#`` starts a comment.  The
canonical form lists each edge once with ``u < v`` in sorted order.
"""
from __future__ import annotations

from fractions import Fraction

from .graph import KINDS, LABELLED, ORIENTED, SIMPLE, Graph, GraphError

MAGIC = ("apt-graph", "v1")


class GraphFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _int(tok: str, line: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(line, f"{what} must be an integer, got {tok!r}") from None


def parse_graph(text: str) -> Graph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        if header is None:
            header = _parse_header(toks, lineno)
            continue
        kind, alphabet = header[0], header[2]
        if len(toks) < 2:
            raise GraphFormatError(lineno, "an edge needs two endpoints")
        u, v = _int(toks[0], lineno, "endpoint"), _int(toks[1], lineno, "endpoint")
        rest = toks[2:]
        tag = None
        if kind == ORIENTED:
            if rest and rest[0] in (">", "<"):
                tag = rest.pop(0)
        elif kind == LABELLED:
            if not rest:
                raise GraphFormatError(lineno, "labelled edges need a label")
            tag = _int(rest.pop(0), lineno, "label")
            if not 0 <= tag < alphabet:
                raise GraphFormatError(lineno, f"label {tag} outside alphabet {alphabet}")
        if rest:
            raise GraphFormatError(lineno, f"unexpected tokens {' '.join(rest)!r}")
        edges.append((lineno, u, v, tag))
    if header is None:
        raise GraphFormatError(1, "missing 'apt-graph v1' header")
    kind, n, alphabet = header
    try:
        return Graph(n, [(u, v) if tag is None else (u, v, tag) for _, u, v, tag in edges],
                     kind=kind, alphabet=alphabet)
    except GraphError as exc:
        # find the offending line by replaying edges one at a time
        for i, (lineno, *_rest) in enumerate(edges):
            try:
                Graph(n, [(u, v) if t is None else (u, v, t) for _, u, v, t in edges[:i + 1]],
                      kind=kind, alphabet=alphabet)
            except GraphError as inner:
                raise GraphFormatError(lineno, str(inner)) from None
        raise GraphFormatError(1, str(exc)) from None


def _parse_header(toks: list[str], lineno: int) -> tuple[str, int, int | None]:
    if tuple(toks[:2]) != MAGIC:
        raise GraphFormatError(lineno, "expected header 'apt-graph v1 <class> <n> [alphabet]'")
    if len(toks) < 4:
        raise GraphFormatError(lineno, "header needs a class and a vertex count")
    kind = toks[2]
    if kind not in KINDS:
        raise GraphFormatError(lineno, f"unknown class {kind!r}, expected one of {', '.join(KINDS)}")
    n = _int(toks[3], lineno, "vertex count")
    if n < 0:
        raise GraphFormatError(lineno, "negative vertex count")
    alphabet = None
    if kind == LABELLED:
        if len(toks) != 5:
            raise GraphFormatError(lineno, "labelled graphs need an alphabet size")
        alphabet = _int(toks[4], lineno, "alphabet")
        if alphabet < 1:
            raise GraphFormatError(lineno, "alphabet must be positive")
    elif len(toks) != 4:
        raise GraphFormatError(lineno, f"unexpected header tokens {' '.join(toks[4:])!r}")
    return kind, n, alphabet


def write_graph(g: Graph) -> str:
    head = ["apt-graph", "v1", g.kind, str(g.n)]
    if g.kind == LABELLED:
        head.append(str(g.alphabet))
    lines = [" ".join(head)]
    for (u, v), attr in g.edge_items():
        if g.kind == SIMPLE:
            lines.append(f"{u} {v}")
        elif g.kind == ORIENTED:
            lines.append(f"{u} {v} {'>' if attr == 1 else '<'}")
        else:
            lines.append(f"{u} {v} {attr}")
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def parse_k(text: str) -> Fraction:
    """A positive rational ``p/q`` or integer whose denominator divides 4."""
    try:
        k = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"k must be an integer or p/q, got {text!r}") from None
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    if 4 % k.denominator:
        raise ValueError(f"k = {k}: the denominator must divide 4")
    return k
