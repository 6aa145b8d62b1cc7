#!/usr/bin/env python3
"""
S-expression reader shared by the axiom DSL and the shape DSL

Atoms are bare names (``hasSubSDA``), prefixed names (``rm:SDAI``),
absolute IRIs in angle brackets and integers. ``;`` starts a line comment.
"""

import re
from typing import Dict, List, NamedTuple, Optional, Tuple, Union

from riskman_errors import ParseError, UnknownPrefix
from term_graph import IRI, Term, make_term


class Atom(NamedTuple):
    value: str
    line: int
    column: int
    bracketed: bool = False

    def __str__(self) -> str:
        return f"<{self.value}>" if self.bracketed else self.value


class SList(NamedTuple):
    items: Tuple["SExpr", ...]
    line: int
    column: int

    @property
    def head(self) -> Optional[str]:
        if self.items and isinstance(self.items[0], Atom) and not self.items[0].bracketed:
            return self.items[0].value
        return None

    @property
    def args(self) -> Tuple["SExpr", ...]:
        return self.items[1:]

    def __str__(self) -> str:
        return "(" + " ".join(str(i) for i in self.items) + ")"


SExpr = Union[Atom, SList]

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>;[^\n]*)
  | (?P<open>\()
  | (?P<close>\))
  | (?P<iri><[^<>\s]*>)
  | (?P<atom>[^\s()<>;]+)
""", re.VERBOSE)


def read_sexprs(text: str, source: Optional[str] = None) -> List[SExpr]:
    """Read all top-level s-expressions in text"""
    stack: List[Tuple[List[SExpr], int, int]] = []
    top: List[SExpr] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        column = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character '{text[pos]}'", line, column, source)
        kind = m.lastgroup
        token = m.group(0)
        if kind == "open":
            stack.append(([], line, column))
        elif kind == "close":
            if not stack:
                raise ParseError("unbalanced ')'", line, column, source)
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][0] if stack else top).append(node)
        elif kind in ("iri", "atom"):
            atom = Atom(token[1:-1], line, column, True) if kind == "iri" else Atom(token, line, column)
            (stack[-1][0] if stack else top).append(atom)
        newlines = token.count("\n")
        if newlines:
            line += newlines
            line_start = pos + token.rfind("\n") + 1
        pos = m.end()
    if stack:
        _, l0, c0 = stack[-1]
        raise ParseError("unclosed '('", l0, c0, source)
    return top


def syntax_error(node: SExpr, message: str, source: Optional[str] = None, cls=ParseError) -> ParseError:
    return cls(message, node.line, node.column, source)


def expect_list(node: SExpr, source: Optional[str] = None) -> SList:
    if not isinstance(node, SList) or node.head is None:
        raise syntax_error(node, f"expected a form, found '{node}'", source)
    return node


def expect_arity(node: SList, minimum: int, maximum: Optional[int] = None,
                 source: Optional[str] = None):
    count = len(node.args)
    if count < minimum or (maximum is not None and count > maximum):
        if maximum is None:
            wanted = f"at least {minimum}"
        elif minimum == maximum:
            wanted = str(minimum)
        else:
            wanted = f"{minimum}-{maximum}"
        raise syntax_error(node, f"'{node.head}' takes {wanted} argument(s), got {count}", source)


def expect_atom(node: SExpr, what: str, source: Optional[str] = None) -> Atom:
    if not isinstance(node, Atom):
        raise syntax_error(node, f"expected {what}, found '{node}'", source)
    return node


def expect_int(node: SExpr, what: str, source: Optional[str] = None) -> int:
    atom = expect_atom(node, what, source)
    if atom.bracketed or not atom.value.isdigit():
        raise syntax_error(atom, f"expected {what}, found '{atom}'", source)
    return int(atom.value)


def resolve_name(atom: Atom, prefixes: Dict[str, str], default_namespace: str,
                 source: Optional[str] = None) -> Term:
    """
    Resolve a DSL name to an IRI term.

    ``<iri>`` is taken as is, ``pfx:local`` is expanded with the prefix map
    and a bare name is placed in default_namespace.
    """
    if atom.bracketed:
        try:
            return make_term(IRI, atom.value)
        except Exception as e:
            raise syntax_error(atom, str(e), source) from None
    prefix, colon, local = atom.value.partition(":")
    if colon:
        if prefix not in prefixes:
            raise syntax_error(atom, f"undeclared prefix '{prefix}:'", source, UnknownPrefix)
        return Term(IRI, prefixes[prefix] + local)
    return Term(IRI, default_namespace + atom.value)


def render_name(term: Term, prefixes: Dict[str, str], default_namespace: str) -> str:
    """Inverse of resolve_name: shortest spelling that resolves back to term"""
    value = term.value
    if value.startswith(default_namespace):
        local = value[len(default_namespace):]
        if local and re.fullmatch(r"[^\s()<>;:]+", local):
            return local
    for prefix, ns in sorted(prefixes.items()):
        if value.startswith(ns):
            local = value[len(ns):]
            if re.fullmatch(r"[^\s()<>;]*", local):
                return f"{prefix}:{local}"
    return f"<{value}>"
