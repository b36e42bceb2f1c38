"""Terms, triple patterns, t-graphs and solution mappings.

A term is either an IRI (an opaque token) or a variable written ``?name``.
A t-graph is a finite set of triple patterns; a t-graph without variables
is an RDF graph.  A mapping is a partial function from variables to IRIs
(the SPARQL solution object).

File formats
------------
Graph files: one triple per line, three whitespace-separated terms with an
optional trailing ``.``; blank lines and lines starting with ``#`` are
ignored.  Mapping files: one ``?var = iri`` binding per line.

Variable names use the alphabet ``[A-Za-z0-9_]``; the extra character ``#``
is reserved for internally generated fresh variables and is rejected by the
pattern parser, which keeps generated names collision-free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (
    DuplicateBinding,
    IncompatibleMappings,
    NonGroundGraph,
    ParseError,
    UnboundVariable,
)

_VAR_NAME = re.compile(r"[A-Za-z0-9_#]+\Z")
_USER_VAR_NAME = re.compile(r"[A-Za-z0-9_]+\Z")
_IRI_NAME = re.compile(r"[A-Za-z0-9_:/#.\-]+\Z")


@dataclass(frozen=True)
class Term:
    kind: str  # "iri" | "var"
    name: str

    def __post_init__(self):
        if self.kind == "var":
            if not _VAR_NAME.match(self.name):
                raise ValueError(f"bad variable name: {self.name!r}")
        elif self.kind == "iri":
            if not _IRI_NAME.match(self.name) or self.name.startswith("?"):
                raise ValueError(f"bad IRI: {self.name!r}")
        else:
            raise ValueError(f"bad term kind: {self.kind!r}")

    @property
    def is_var(self) -> bool:
        return self.kind == "var"

    @property
    def is_iri(self) -> bool:
        return self.kind == "iri"

    def __str__(self) -> str:
        return f"?{self.name}" if self.kind == "var" else self.name

    def __repr__(self) -> str:
        return f"Term({str(self)!r})"


def var(name: str) -> Term:
    return Term("var", name)


def iri(name: str) -> Term:
    return Term("iri", name)


def parse_term(token: str, *, line: int | None = None) -> Term:
    """Parse a single term token as found in graph and mapping files."""
    if token.startswith("?"):
        name = token[1:]
        if not _VAR_NAME.match(name):
            raise ParseError(f"bad variable token {token!r}", line=line)
        return Term("var", name)
    if not _IRI_NAME.match(token):
        raise ParseError(f"bad IRI token {token!r}", line=line)
    return Term("iri", token)


@dataclass(frozen=True)
class Triple:
    s: Term
    p: Term
    o: Term

    @property
    def terms(self) -> tuple[Term, Term, Term]:
        return (self.s, self.p, self.o)

    def vars(self) -> frozenset[Term]:
        return frozenset(t for t in self.terms if t.is_var)

    def is_ground(self) -> bool:
        return not self.vars()

    def __str__(self) -> str:
        return f"{self.s} {self.p} {self.o}"

    def __repr__(self) -> str:
        return f"Triple({str(self)!r})"


def substitute(triple: Triple, sub: dict[Term, Term]) -> Triple:
    """Replace variables of `triple` that occur in `sub`; others stay put."""
    return Triple(*(sub.get(t, t) if t.is_var else t for t in triple.terms))


@dataclass(frozen=True)
class TGraph:
    """A finite set of triple patterns in canonical (serialized) order."""

    triples: tuple[Triple, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "triples", tuple(sorted(set(self.triples), key=str)))

    def vars(self) -> frozenset[Term]:
        out: set[Term] = set()
        for t in self.triples:
            out.update(t.vars())
        return frozenset(out)

    def iris(self) -> frozenset[Term]:
        return frozenset(x for t in self.triples for x in t.terms if x.is_iri)

    def is_ground(self) -> bool:
        return not self.vars()

    def __iter__(self):
        return iter(self.triples)

    def __len__(self) -> int:
        return len(self.triples)

    def __contains__(self, t: Triple) -> bool:
        return t in set(self.triples)

    def __or__(self, other: "TGraph") -> "TGraph":
        return TGraph(self.triples + other.triples)

    def __str__(self) -> str:
        return "{" + " ; ".join(str(t) for t in self.triples) + "}"


@dataclass(frozen=True)
class Mapping:
    """A partial function from variables to IRIs.

    Lookup outside the domain yields None, never a default value.
    """

    bindings: tuple[tuple[Term, Term], ...] = ()

    def __post_init__(self):
        seen: dict[Term, Term] = {}
        for k, v in self.bindings:
            if not (k.is_var and v.is_iri):
                raise ValueError(f"binding must map a variable to an IRI: {k} -> {v}")
            if k in seen and seen[k] != v:
                raise ValueError(f"conflicting bindings for {k}")
            seen[k] = v
        object.__setattr__(
            self, "bindings", tuple(sorted(seen.items(), key=lambda kv: kv[0].name))
        )

    @classmethod
    def of(cls, items) -> "Mapping":
        if isinstance(items, dict):
            items = items.items()
        return cls(tuple(items))

    @property
    def domain(self) -> frozenset[Term]:
        return frozenset(k for k, _ in self.bindings)

    def get(self, v: Term) -> Term | None:
        for k, val in self.bindings:
            if k == v:
                return val
        return None

    def items(self):
        return iter(self.bindings)

    def __len__(self) -> int:
        return len(self.bindings)

    def compatible(self, other: "Mapping") -> bool:
        mine = dict(self.bindings)
        return all(k not in mine or mine[k] == v for k, v in other.bindings)

    def merge(self, other: "Mapping") -> "Mapping":
        if not self.compatible(other):
            raise IncompatibleMappings(f"cannot merge {self} with {other}")
        return Mapping(self.bindings + other.bindings)

    def apply(self, t: Triple) -> Triple:
        missing = t.vars() - self.domain
        if missing:
            worst = min(missing, key=str)
            raise UnboundVariable(f"variable {worst} is not bound")
        return substitute(t, dict(self.bindings))

    def restrict(self, keep) -> "Mapping":
        keep = frozenset(keep)
        return Mapping(tuple((k, v) for k, v in self.bindings if k in keep))

    def __str__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.bindings)
        return "{" + inner + "}"


def compatible(m1: Mapping, m2: Mapping) -> bool:
    return m1.compatible(m2)


def merge(m1: Mapping, m2: Mapping) -> Mapping:
    return m1.merge(m2)


# ---------------------------------------------------------------------------
# file formats


def _data_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield no, line


def parse_graph(text: str, *, ground: bool = False) -> TGraph:
    """Parse a t-graph file; with ground=True reject variables (RDF graphs)."""
    triples = []
    for no, line in _data_lines(text):
        if line.endswith("."):
            line = line[:-1].rstrip()
        tokens = line.split()
        if len(tokens) != 3:
            raise ParseError(f"expected three terms, got {len(tokens)}", line=no)
        t = Triple(*(parse_term(tok, line=no) for tok in tokens))
        if ground and not t.is_ground():
            worst = min(t.vars(), key=str)
            raise NonGroundGraph(f"variable {worst} in an RDF graph", line=no)
        triples.append(t)
    return TGraph(tuple(triples))


def serialize_graph(g: TGraph) -> str:
    return "".join(f"{t} .\n" for t in g)


def parse_mapping(text: str) -> Mapping:
    bindings: list[tuple[Term, Term]] = []
    seen: set[Term] = set()
    for no, line in _data_lines(text):
        if "=" not in line:
            raise ParseError("expected '?var = iri'", line=no)
        left, _, right = line.partition("=")
        v = parse_term(left.strip(), line=no)
        if not v.is_var:
            raise ParseError(f"left-hand side must be a variable, got {v}", line=no)
        value = parse_term(right.strip(), line=no)
        if not value.is_iri:
            raise ParseError(f"right-hand side must be an IRI, got {value}", line=no)
        if v in seen:
            raise DuplicateBinding(f"duplicate binding for {v}", line=no)
        seen.add(v)
        bindings.append((v, value))
    return Mapping(tuple(bindings))


def serialize_mapping(m: Mapping) -> str:
    return "".join(f"{k} = {v}\n" for k, v in m.items())


def parse_var_list(text: str) -> frozenset[Term]:
    """Parse a distinguished-variable list: one ``?var`` per line."""
    out = set()
    for no, line in _data_lines(text):
        v = parse_term(line, line=no)
        if not v.is_var:
            raise ParseError(f"expected a variable, got {v}", line=no)
        out.add(v)
    return frozenset(out)
