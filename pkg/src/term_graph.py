#!/usr/bin/env python3
"""
Term Graph - core data model for RISKMAN submissions

Terms (IRIs, blank nodes, literals), concept and role assertions, and an
indexed in-memory assertion set (the ABox) with the lookups saturation and
shape evaluation need: members of a concept, labels of a node, successors
and predecessors per role.
"""

import logging
import re
from typing import AbstractSet, Dict, Iterable, Iterator, NamedTuple, Optional, Set, Tuple, Union
from urllib.parse import urljoin

from riskman_errors import TermError

logger = logging.getLogger(__name__)

IRI = "iri"
BLANK = "blank"
LITERAL = "literal"

CONCEPT = "concept"
ROLE = "role"

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_STRING = XSD + "string"
RDF_LANG_STRING = RDF + "langString"

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_KIND_ORDER = {IRI: 0, BLANK: 1, LITERAL: 2}


def _escape(text: str) -> str:
    return (text.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t"))


class Term(NamedTuple):
    """An IRI, blank node or literal. Equality is structural."""

    kind: str
    value: str
    datatype: Optional[str] = None
    language: Optional[str] = None

    @property
    def is_individual(self) -> bool:
        return self.kind != LITERAL

    @property
    def local_name(self) -> str:
        """Short display name: fragment or last path segment for IRIs"""
        if self.kind == BLANK:
            return "_:" + self.value
        if self.kind == LITERAL:
            return self.value
        for sep in ("#", "/", ":"):
            head, found, tail = self.value.rpartition(sep)
            if found and tail:
                return tail
        return self.value

    @property
    def sort_key(self) -> Tuple[int, str, str, str]:
        # blank nodes sort by their N-Triples spelling
        value = "_:" + self.value if self.kind == BLANK else self.value
        return (_KIND_ORDER[self.kind], value, self.datatype or "", self.language or "")

    def n3(self) -> str:
        """N-Triples spelling of the term"""
        if self.kind == IRI:
            return f"<{self.value}>"
        if self.kind == BLANK:
            return f"_:{self.value}"
        text = f'"{_escape(self.value)}"'
        if self.language:
            return f"{text}@{self.language}"
        if self.datatype and self.datatype != XSD_STRING:
            return f"{text}^^<{self.datatype}>"
        return text

    def __str__(self) -> str:
        return self.n3()


def make_term(kind: str, value: str, datatype: Optional[str] = None,
              language: Optional[str] = None, base: Optional[str] = None) -> Term:
    """
    Build a validated Term.

    Args:
        kind: IRI, BLANK or LITERAL
        value: IRI text, blank label or lexical form
        datatype: literal datatype IRI (defaults to xsd:string)
        language: literal language tag
        base: base IRI used to resolve a relative IRI

    Raises:
        TermError: empty-value or malformed-iri
    """
    if kind == LITERAL:
        if language:
            return Term(LITERAL, value, RDF_LANG_STRING, language.lower())
        return Term(LITERAL, value, datatype or XSD_STRING, None)
    if kind not in (IRI, BLANK):
        raise ValueError(f"Unknown term kind: {kind}")
    if not value:
        raise TermError("empty-value", f"{kind} term needs a non-empty value")
    if kind == BLANK:
        return Term(BLANK, value)
    if not _SCHEME.match(value):
        if base is None:
            raise TermError("malformed-iri", f"relative IRI <{value}> with no base")
        value = urljoin(base, value)
        if not _SCHEME.match(value):
            raise TermError("malformed-iri", f"cannot resolve <{value}> against <{base}>")
    return Term(IRI, value)


def iri(value: str) -> Term:
    return make_term(IRI, value)


def blank(label: str) -> Term:
    return make_term(BLANK, label)


def literal(value: str, datatype: Optional[str] = None, language: Optional[str] = None) -> Term:
    return make_term(LITERAL, value, datatype, language)


NameLike = Union[Term, str]


def as_name(name: NameLike) -> Term:
    """Accept a concept or role name either as a Term or as IRI text"""
    if isinstance(name, Term):
        return name
    return Term(IRI, name)


class Assertion(NamedTuple):
    """Concept assertion A(a) or role assertion R(a, b)"""

    kind: str
    subject: Term
    concept: Optional[Term] = None
    role: Optional[Term] = None
    object: Optional[Term] = None

    @property
    def sort_key(self):
        if self.kind == CONCEPT:
            return (0, self.concept.value, self.subject.sort_key, ())
        return (1, self.role.value, self.subject.sort_key, self.object.sort_key)

    def __str__(self) -> str:
        if self.kind == CONCEPT:
            return f"{self.concept.local_name}({self.subject.local_name})"
        return f"{self.role.local_name}({self.subject.local_name}, {self.object.local_name})"


def concept_assertion(concept: NameLike, subject: Term) -> Assertion:
    if not subject.is_individual:
        raise ValueError(f"literal {subject.n3()} cannot be an individual")
    return Assertion(CONCEPT, subject, concept=as_name(concept))


def role_assertion(role: NameLike, subject: Term, obj: Term) -> Assertion:
    if not subject.is_individual or not obj.is_individual:
        raise ValueError("role assertions relate individuals, not literals")
    return Assertion(ROLE, subject, role=as_name(role), object=obj)


Triple = Tuple[Term, Term, Term]

_EMPTY: AbstractSet[Term] = frozenset()


class Graph:
    """
    Indexed assertion set.

    Mutable while a single writer loads or saturates it; after freeze() it
    may be read from any number of threads.
    """

    def __init__(self, assertions: Iterable[Assertion] = ()):
        self.assertions: Set[Assertion] = set()
        self.literal_triples: Set[Triple] = set()

        # Indexes
        self._by_subject: Dict[Term, Set[Assertion]] = {}
        self._members: Dict[Term, Set[Term]] = {}
        self._labels: Dict[Term, Set[Term]] = {}
        self._succ: Dict[Term, Dict[Term, Set[Term]]] = {}
        self._pred: Dict[Term, Dict[Term, Set[Term]]] = {}
        self._nodes: Set[Term] = set()

        self._frozen = False
        for assertion in assertions:
            self.add_assertion(assertion)

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "Graph":
        self._frozen = True
        return self

    def copy(self) -> "Graph":
        """Unfrozen copy with the same assertions and literal triples"""
        clone = Graph(self.assertions)
        clone.literal_triples = set(self.literal_triples)
        return clone

    def _check_writable(self):
        if self._frozen:
            raise RuntimeError("Graph is frozen")

    def add_assertion(self, assertion: Assertion) -> bool:
        """Add an assertion; returns True if the graph grew"""
        self._check_writable()
        if assertion in self.assertions:
            return False
        self.assertions.add(assertion)
        subject = assertion.subject
        self._by_subject.setdefault(subject, set()).add(assertion)
        self._nodes.add(subject)
        if assertion.kind == CONCEPT:
            self._members.setdefault(assertion.concept, set()).add(subject)
            self._labels.setdefault(subject, set()).add(assertion.concept)
        else:
            obj = assertion.object
            self._nodes.add(obj)
            self._succ.setdefault(assertion.role, {}).setdefault(subject, set()).add(obj)
            self._pred.setdefault(assertion.role, {}).setdefault(obj, set()).add(subject)
        return True

    def add_concept(self, concept: NameLike, subject: Term) -> bool:
        return self.add_assertion(concept_assertion(concept, subject))

    def add_role(self, role: NameLike, subject: Term, obj: Term) -> bool:
        return self.add_assertion(role_assertion(role, subject, obj))

    def add_literal_triple(self, triple: Triple) -> bool:
        self._check_writable()
        if triple in self.literal_triples:
            return False
        self.literal_triples.add(triple)
        return True

    def update(self, assertions: Iterable[Assertion]) -> int:
        """Add many assertions; returns how many were new"""
        return sum(1 for a in assertions if self.add_assertion(a))

    # Queries

    def __len__(self) -> int:
        return len(self.assertions)

    def __contains__(self, assertion) -> bool:
        return assertion in self.assertions

    def __iter__(self) -> Iterator[Assertion]:
        return iter(self.assertions)

    @property
    def size(self) -> int:
        return len(self.assertions)

    def nodes(self) -> Set[Term]:
        return set(self._nodes)

    def successors(self, role: NameLike, node: Term) -> Set[Term]:
        return set(self._succ.get(as_name(role), {}).get(node, ()))

    def predecessors(self, role: NameLike, node: Term) -> Set[Term]:
        return set(self._pred.get(as_name(role), {}).get(node, ()))

    def has_node(self, node: Term) -> bool:
        return node in self._nodes

    def successor_view(self, role: NameLike, node: Term) -> AbstractSet[Term]:
        """Like successors() but without copying; callers must not mutate it"""
        return self._succ.get(as_name(role), {}).get(node, _EMPTY)

    def predecessor_view(self, role: NameLike, node: Term) -> AbstractSet[Term]:
        return self._pred.get(as_name(role), {}).get(node, _EMPTY)

    def role_pairs(self, role: NameLike) -> Iterator[Tuple[Term, Term]]:
        for subject, objects in self._succ.get(as_name(role), {}).items():
            for obj in objects:
                yield subject, obj

    def instances(self, concept: NameLike) -> Set[Term]:
        return set(self._members.get(as_name(concept), ()))

    def concepts_of(self, node: Term) -> Set[Term]:
        return set(self._labels.get(node, ()))

    def has_concept(self, concept: NameLike, node: Term) -> bool:
        return node in self._members.get(as_name(concept), ())

    def about(self, node: Term) -> Set[Assertion]:
        """All assertions whose subject is node"""
        return set(self._by_subject.get(node, ()))

    def roles(self) -> Set[Term]:
        return {r for r, index in self._succ.items() if index}

    def sorted_assertions(self):
        return sorted(self.assertions, key=lambda a: a.sort_key)

    def get_stats(self) -> Dict[str, int]:
        concept_count = sum(len(m) for m in self._members.values())
        return {
            "assertions": len(self.assertions),
            "concept_assertions": concept_count,
            "role_assertions": len(self.assertions) - concept_count,
            "nodes": len(self._nodes),
            "literal_triples": len(self.literal_triples),
        }
