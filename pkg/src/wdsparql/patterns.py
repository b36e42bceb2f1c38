"""The AND/OPT/UNION graph-pattern language: AST, parser, well-designedness.

Grammar (whitespace-insensitive between tokens):

    pattern := triple | "(" pattern OPWORD pattern ")"
    OPWORD  := "AND" | "OPT" | "UNION"
    triple  := "(" term "," term "," term ")"
    term    := "?" name | iri

A UNION-free pattern is well designed if for every subpattern (A OPT B),
no variable occurring in B but not in A occurs outside that subpattern.
A general pattern is well designed if it is a top-level UNION of
well-designed UNION-free patterns; UNION below AND or OPT is rejected
rather than distributed, since distributing would change the class being
tested.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import NotWellDesigned, ParseError
from .terms import Term, Triple, _IRI_NAME, _USER_VAR_NAME

AND = "AND"
OPT = "OPT"
UNION = "UNION"
_OPS = (AND, OPT, UNION)


@dataclass(frozen=True)
class Leaf:
    triple: Triple


@dataclass(frozen=True)
class Node:
    op: str
    left: "GraphPattern"
    right: "GraphPattern"

    def __post_init__(self):
        if self.op not in _OPS:
            raise ValueError(f"bad operator {self.op!r}")


GraphPattern = Union[Leaf, Node]


def pattern_vars(p: GraphPattern) -> frozenset[Term]:
    if isinstance(p, Leaf):
        return p.triple.vars()
    return pattern_vars(p.left) | pattern_vars(p.right)


def serialize_pattern(p: GraphPattern) -> str:
    if isinstance(p, Leaf):
        t = p.triple
        return f"({t.s}, {t.p}, {t.o})"
    return f"({serialize_pattern(p.left)} {p.op} {serialize_pattern(p.right)})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<punct>[(),])|(?P<word>[^\s(),]+))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        tokens.append((m.group("punct") or m.group("word"), m.start("punct") if m.group("punct") else m.start("word")))
        pos = m.end()
    if text[pos:].strip():
        raise ParseError(f"unexpected character {text[pos]!r}", position=pos)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.length = len(text)

    def _peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def _pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else self.length

    def _take(self, expected: str) -> None:
        got = self._peek()
        if got != expected:
            raise ParseError(
                f"expected {expected!r}, got {got!r}" if got else f"expected {expected!r}, got end of input",
                position=self._pos(),
            )
        self.i += 1

    def _term(self) -> Term:
        tok = self._peek()
        if tok is None or tok in ("(", ")", ","):
            raise ParseError(f"expected a term, got {tok!r}", position=self._pos())
        pos = self._pos()
        self.i += 1
        if tok.startswith("?"):
            if not _USER_VAR_NAME.match(tok[1:]):
                raise ParseError(f"bad variable {tok!r}", position=pos)
            return Term("var", tok[1:])
        if not _IRI_NAME.match(tok) or tok in _OPS:
            raise ParseError(f"bad IRI {tok!r}", position=pos)
        return Term("iri", tok)

    def pattern(self) -> GraphPattern:
        self._take("(")
        if self._peek() == "(":
            left = self.pattern()
            op = self._peek()
            if op not in _OPS:
                raise ParseError(
                    f"expected AND, OPT or UNION, got {op!r}", position=self._pos()
                )
            self.i += 1
            right = self.pattern()
            self._take(")")
            return Node(op, left, right)
        s = self._term()
        self._take(",")
        p = self._term()
        self._take(",")
        o = self._term()
        self._take(")")
        return Leaf(Triple(s, p, o))

    def parse(self) -> GraphPattern:
        out = self.pattern()
        if self._peek() is not None:
            raise ParseError(f"trailing input {self._peek()!r}", position=self._pos())
        return out


def parse_pattern(text: str) -> GraphPattern:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# well-designedness


@dataclass(frozen=True)
class Violation:
    """Why a pattern is not well designed.

    kind is "nested-union" (a UNION below AND/OPT) or "escaped-variable"
    (a right-side-only OPT variable occurring outside its OPT subpattern,
    reported in `variable`).
    """

    kind: str
    subpattern: GraphPattern
    variable: Term | None = None

    def __str__(self) -> str:
        if self.kind == "nested-union":
            return f"UNION below AND/OPT in {serialize_pattern(self.subpattern)}"
        return (
            f"variable {self.variable} escapes the optional part of "
            f"{serialize_pattern(self.subpattern)}"
        )


def _union_components(p: GraphPattern) -> list[GraphPattern]:
    if isinstance(p, Node) and p.op == UNION:
        return _union_components(p.left) + _union_components(p.right)
    return [p]


def _find_union(p: GraphPattern) -> Node | None:
    if isinstance(p, Leaf):
        return None
    if p.op == UNION:
        return p
    return _find_union(p.left) or _find_union(p.right)


def _check_component(p: GraphPattern, outside: frozenset[Term]) -> Violation | None:
    """Check every OPT occurrence against the variables visible outside it."""
    if isinstance(p, Leaf):
        return None
    lv, rv = pattern_vars(p.left), pattern_vars(p.right)
    if p.op == OPT:
        escaped = (rv - lv) & outside
        if escaped:
            return Violation("escaped-variable", p, min(escaped, key=str))
    return _check_component(p.left, outside | rv) or _check_component(
        p.right, outside | lv
    )


def well_designed_violation(p: GraphPattern) -> Violation | None:
    for comp in _union_components(p):
        nested = _find_union(comp)
        if nested is not None:
            return Violation("nested-union", nested)
        bad = _check_component(comp, frozenset())
        if bad is not None:
            return bad
    return None


def is_well_designed(p: GraphPattern) -> bool:
    return well_designed_violation(p) is None


def union_normalize(p: GraphPattern) -> tuple[GraphPattern, ...]:
    """Flatten the top-level UNIONs of a well-designed pattern, left to right."""
    bad = well_designed_violation(p)
    if bad is not None:
        raise NotWellDesigned(str(bad))
    return tuple(_union_components(p))
