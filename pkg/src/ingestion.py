#!/usr/bin/env python3
"""
Ingestion - turn submission files into RISKMAN ABox assertions

Parsers for N-Triples, a Turtle subset and an RDFa-lite subset of HTML,
the mapping from triples onto concept and role assertions, and the
serializers used to write graphs back out in the same three formats.

Supported RDFa attributes: prefix, about, resource, href (object of a
property), typeof, property, lang. Any other RDFa attribute is ignored
and listed in TripleDoc.warnings.
"""

import html
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from bs4 import BeautifulSoup
from bs4.element import Tag

from riskman_errors import (InputNotFound, ParseError, TermError, TypeMisuse,
                            UnknownPrefix, UnsupportedConstruct)
from term_graph import (BLANK, CONCEPT, IRI, LITERAL, Graph, Term, Triple,
                        concept_assertion, make_term, role_assertion)
from vocabulary import (RDF_TYPE, XSD_NS, Vocabulary, default_prefix_map,
                        default_vocabulary)

logger = logging.getLogger(__name__)

__all__ = [
    "InputFormat", "TripleDoc", "Vocabulary", "default_vocabulary",
    "parse_ntriples", "parse_turtle_subset", "distill_rdfa_subset",
    "parse_document", "load_file", "detect_format", "triples_to_abox",
    "graph_triples", "serialize_ntriples", "render_turtle", "render_rdfa_html",
]

XSD_INTEGER = XSD_NS + "integer"
XSD_DECIMAL = XSD_NS + "decimal"
XSD_DOUBLE = XSD_NS + "double"
XSD_BOOLEAN = XSD_NS + "boolean"


class InputFormat(Enum):
    AUTO = "auto"
    NTRIPLES = "ntriples"
    TURTLE = "turtle"
    RDFA_HTML = "rdfa-html"


_EXTENSIONS = {
    ".nt": InputFormat.NTRIPLES,
    ".ttl": InputFormat.TURTLE,
    ".html": InputFormat.RDFA_HTML,
    ".htm": InputFormat.RDFA_HTML,
}


@dataclass
class TripleDoc:
    """Parsed triples plus the prefixes that were in scope"""
    triples: List[Triple] = field(default_factory=list)
    prefix_map: Dict[str, str] = field(default_factory=dict)
    base: Optional[str] = None
    warnings: List[str] = field(default_factory=list)


# Lexical layer shared by the N-Triples and Turtle parsers

_IRIREF = re.compile(r'((?:[^<>"{}|^`\\\x00-\x20]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*)>')
_BLANK_LABEL = re.compile(r"_:([A-Za-z0-9_](?:[\w.-]*[\w-])?)")
_LANGTAG = re.compile(r"@([A-Za-z]+(?:-[A-Za-z0-9]+)*)")
_UCHAR = re.compile(r"\\u([0-9A-Fa-f]{4})|\\U([0-9A-Fa-f]{8})")
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
          '"': '"', "'": "'", "\\": "\\"}


def _unescape_uchars(text: str) -> str:
    return _UCHAR.sub(lambda m: chr(int(m.group(1) or m.group(2), 16)), text)


class _Scanner:
    """Cursor over source text; computes line/column only when reporting"""

    def __init__(self, text: str, source: Optional[str] = None, line_offset: int = 0):
        self.text = text
        self.n = len(text)
        self.pos = 0
        self.source = source
        self.line_offset = line_offset

    def location(self, pos: Optional[int] = None) -> Tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1 + self.line_offset
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, column

    def error(self, message: str, cls=ParseError, pos: Optional[int] = None) -> ParseError:
        line, column = self.location(pos)
        return cls(message, line, column, self.source)

    def at_end(self) -> bool:
        return self.pos >= self.n

    def peek(self, k: int = 1) -> str:
        return self.text[self.pos:self.pos + k]

    def startswith(self, token: str) -> bool:
        return self.text.startswith(token, self.pos)

    def skip_ws(self):
        text, n = self.text, self.n
        while self.pos < n:
            c = text[self.pos]
            if c in " \t\r\n":
                self.pos += 1
            elif c == "#":
                end = text.find("\n", self.pos)
                self.pos = n if end < 0 else end
            else:
                break

    def expect(self, token: str, what: Optional[str] = None):
        if not self.startswith(token):
            raise self.error(what or f"expected '{token}'")
        self.pos += len(token)

    def match(self, regex):
        m = regex.match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return m

    def term(self, kind: str, value: str, datatype=None, language=None,
             base: Optional[str] = None, pos: Optional[int] = None) -> Term:
        try:
            return make_term(kind, value, datatype, language, base=base)
        except TermError as e:
            line, column = self.location(pos)
            raise TermError(e.code, f"{e.message} (line {line}, column {column})") from None

    def read_iriref(self) -> str:
        start = self.pos
        self.expect("<")
        m = self.match(_IRIREF)
        if not m:
            raise self.error("malformed IRI reference", pos=start)
        return _unescape_uchars(m.group(1))

    def read_blank_label(self) -> str:
        m = self.match(_BLANK_LABEL)
        if not m:
            raise self.error("malformed blank node label")
        return m.group(1)

    def read_string(self) -> str:
        start = self.pos
        quote = self.text[self.pos]
        delim = quote * 3 if self.startswith(quote * 3) else quote
        self.pos += len(delim)
        chunks = []
        while True:
            if self.pos >= self.n:
                raise self.error("unterminated string literal", pos=start)
            if self.startswith(delim):
                self.pos += len(delim)
                return "".join(chunks)
            c = self.text[self.pos]
            if c == "\\":
                chunks.append(self._read_escape())
            elif c in "\r\n" and len(delim) == 1:
                raise self.error("line break inside string literal")
            else:
                chunks.append(c)
                self.pos += 1

    def _read_escape(self) -> str:
        nxt = self.text[self.pos + 1:self.pos + 2]
        if nxt in _ECHAR:
            self.pos += 2
            return _ECHAR[nxt]
        width = {"u": 4, "U": 8}.get(nxt)
        digits = self.text[self.pos + 2:self.pos + 2 + width] if width else ""
        if not width or len(digits) != width or not all(d in "0123456789abcdefABCDEF" for d in digits):
            raise self.error("invalid escape sequence")
        self.pos += 2 + width
        return chr(int(digits, 16))

    def read_langtag(self) -> str:
        m = self.match(_LANGTAG)
        if not m:
            raise self.error("malformed language tag")
        return m.group(1)


# N-Triples

def _nt_term(sc: _Scanner, position: str, blank_prefix: str) -> Term:
    start = sc.pos
    c = sc.peek()
    if c == "<":
        return sc.term(IRI, sc.read_iriref(), pos=start)
    if c == "_" and position != "predicate":
        return Term(BLANK, blank_prefix + sc.read_blank_label())
    if c == '"' and position == "object":
        value = sc.read_string()
        if sc.peek() == "@":
            return sc.term(LITERAL, value, language=sc.read_langtag())
        if sc.startswith("^^"):
            sc.pos += 2
            return sc.term(LITERAL, value, datatype=sc.term(IRI, sc.read_iriref()).value)
        return sc.term(LITERAL, value)
    raise sc.error(f"expected {position}")


def parse_ntriples(text: str, source: Optional[str] = None,
                   prefixes: Optional[Dict[str, str]] = None,
                   blank_prefix: str = "") -> TripleDoc:
    """
    Parse N-Triples, one triple per line.

    Raises:
        ParseError: on the first malformed line (line/column recorded)
    """
    doc = TripleDoc(prefix_map=default_prefix_map(overrides=prefixes))
    for lineno, line in enumerate(text.splitlines(), start=1):
        sc = _Scanner(line, source, line_offset=lineno - 1)
        sc.skip_ws()
        if sc.at_end():
            continue
        subject = _nt_term(sc, "subject", blank_prefix)
        sc.skip_ws()
        predicate = _nt_term(sc, "predicate", blank_prefix)
        sc.skip_ws()
        obj = _nt_term(sc, "object", blank_prefix)
        sc.skip_ws()
        sc.expect(".", "missing terminal '.'")
        sc.skip_ws()
        if not sc.at_end():
            raise sc.error("unexpected content after '.'")
        doc.triples.append((subject, predicate, obj))
    logger.debug(f"Parsed {len(doc.triples)} N-Triples from {source or '<text>'}")
    return doc


# Turtle subset

_PNAME_NS = re.compile(r"([A-Za-z](?:[\w.-]*[\w-])?)?:")
_PNAME = re.compile(
    r"([A-Za-z](?:[\w.-]*[\w-])?)?:"
    r"((?:[\w:%-]|\\[_~.\-!$&'()*+,;=/?#@%]|\.(?=[\w:%\\-]))*)")
_LOCAL_ESCAPE = re.compile(r"\\(.)")
_PREFIX_KW = re.compile(r"@prefix(?=\s)")
_BASE_KW = re.compile(r"@base(?=\s)")
_SPARQL_PREFIX = re.compile(r"(?i)PREFIX(?=\s)")
_SPARQL_BASE = re.compile(r"(?i)BASE(?=\s)")
_A_KEYWORD = re.compile(r"a(?=[\s<\"'_\[(#])")
_BOOLEAN = re.compile(r"(true|false)(?![\w:-])")
_NUMBER = re.compile(
    r"[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.?\d+[eE][+-]?\d+|\d*\.\d+|\d+)(?![\w:])")


class _TurtleParser:

    def __init__(self, text: str, source: Optional[str], prefixes: Dict[str, str],
                 base: Optional[str], blank_prefix: str):
        self.sc = _Scanner(text, source)
        self.prefixes = dict(prefixes)
        self.base = base
        self.blank_prefix = blank_prefix
        self.triples: List[Triple] = []

    def parse(self) -> TripleDoc:
        sc = self.sc
        while True:
            sc.skip_ws()
            if sc.at_end():
                break
            self._statement()
        return TripleDoc(self.triples, self.prefixes, self.base)

    def _statement(self):
        sc = self.sc
        if sc.match(_PREFIX_KW):
            self._prefix_decl(terminated=True)
        elif sc.match(_BASE_KW):
            self._base_decl(terminated=True)
        elif sc.match(_SPARQL_PREFIX):
            self._prefix_decl(terminated=False)
        elif sc.match(_SPARQL_BASE):
            self._base_decl(terminated=False)
        else:
            subject = self._subject()
            sc.skip_ws()
            self._predicate_object_list(subject)
            sc.skip_ws()
            sc.expect(".", "expected '.' at end of statement")

    def _prefix_decl(self, terminated: bool):
        sc = self.sc
        sc.skip_ws()
        m = sc.match(_PNAME_NS)
        if not m:
            raise sc.error("expected prefix name")
        sc.skip_ws()
        self.prefixes[m.group(1) or ""] = self._iriref().value
        if terminated:
            sc.skip_ws()
            sc.expect(".", "expected '.' after prefix declaration")

    def _base_decl(self, terminated: bool):
        sc = self.sc
        sc.skip_ws()
        self.base = self._iriref().value
        if terminated:
            sc.skip_ws()
            sc.expect(".", "expected '.' after base declaration")

    def _unsupported(self):
        c = self.sc.peek()
        what = "blank node property list" if c == "[" else "collection"
        raise self.sc.error(f"{what} '{c}' is not supported", UnsupportedConstruct)

    def _iriref(self) -> Term:
        start = self.sc.pos
        value = self.sc.read_iriref()
        return self.sc.term(IRI, value, base=self.base, pos=start)

    def _pname(self) -> Term:
        sc = self.sc
        start = sc.pos
        m = sc.match(_PNAME)
        if not m:
            raise sc.error("expected IRI, prefixed name, blank node or literal")
        prefix = m.group(1) or ""
        if prefix not in self.prefixes:
            raise sc.error(f"undeclared prefix '{prefix}:'", UnknownPrefix, pos=start)
        local = _LOCAL_ESCAPE.sub(r"\1", m.group(2))
        return sc.term(IRI, self.prefixes[prefix] + local, pos=start)

    def _iri(self) -> Term:
        return self._iriref() if self.sc.peek() == "<" else self._pname()

    def _subject(self) -> Term:
        sc = self.sc
        c = sc.peek()
        if c in "[(":
            self._unsupported()
        if sc.startswith("_:"):
            return Term(BLANK, self.blank_prefix + sc.read_blank_label())
        if c in "\"'":
            raise sc.error("literal in subject position")
        return self._iri()

    def _predicate_object_list(self, subject: Term):
        sc = self.sc
        while True:
            predicate = self._verb()
            sc.skip_ws()
            self._object_list(subject, predicate)
            sc.skip_ws()
            if sc.peek() != ";":
                return
            while sc.peek() == ";":
                sc.pos += 1
                sc.skip_ws()
            if sc.peek() == "." or sc.at_end():
                return

    def _verb(self) -> Term:
        sc = self.sc
        if sc.match(_A_KEYWORD):
            return RDF_TYPE
        c = sc.peek()
        if c in "[(":
            self._unsupported()
        if c == "<" or _PNAME.match(sc.text, sc.pos):
            return self._iri()
        raise sc.error("expected predicate")

    def _object_list(self, subject: Term, predicate: Term):
        sc = self.sc
        self.triples.append((subject, predicate, self._object()))
        sc.skip_ws()
        while sc.peek() == ",":
            sc.pos += 1
            sc.skip_ws()
            self.triples.append((subject, predicate, self._object()))
            sc.skip_ws()

    def _object(self) -> Term:
        sc = self.sc
        c = sc.peek()
        if c in "[(":
            self._unsupported()
        if sc.startswith("_:"):
            return Term(BLANK, self.blank_prefix + sc.read_blank_label())
        if c in "\"'":
            return self._literal()
        m = sc.match(_BOOLEAN)
        if m:
            return Term(LITERAL, m.group(1), XSD_BOOLEAN)
        m = sc.match(_NUMBER)
        if m:
            lexical = m.group(0)
            if "e" in lexical or "E" in lexical:
                return Term(LITERAL, lexical, XSD_DOUBLE)
            return Term(LITERAL, lexical, XSD_DECIMAL if "." in lexical else XSD_INTEGER)
        return self._iri()

    def _literal(self) -> Term:
        sc = self.sc
        value = sc.read_string()
        if sc.peek() == "@":
            return sc.term(LITERAL, value, language=sc.read_langtag())
        if sc.startswith("^^"):
            sc.pos += 2
            return sc.term(LITERAL, value, datatype=self._iri().value)
        return sc.term(LITERAL, value)


def parse_turtle_subset(text: str, source: Optional[str] = None,
                        prefixes: Optional[Dict[str, str]] = None,
                        base: Optional[str] = None, blank_prefix: str = "") -> TripleDoc:
    """
    Parse the supported Turtle subset.

    Supports @prefix/PREFIX, @base/BASE, IRIs, prefixed names, 'a',
    ';' predicate lists, ',' object lists, literals with ^^datatype or
    @lang, numeric and boolean shorthand and _:label blank nodes.

    Raises:
        ParseError: syntax error with line and column
        UnsupportedConstruct: '[ ... ]' property lists or '( ... )' collections
        UnknownPrefix: undeclared prefix
    """
    parser = _TurtleParser(text, source, default_prefix_map(overrides=prefixes), base, blank_prefix)
    doc = parser.parse()
    logger.debug(f"Parsed {len(doc.triples)} Turtle triples from {source or '<text>'}")
    return doc


# RDFa-lite subset

_IGNORED_RDFA = ("vocab", "rel", "rev", "content", "inlist")
_ABSOLUTE_SCHEMES = ("urn", "mailto", "tag", "data")


class _RdfaDistiller:

    def __init__(self, base: Optional[str], prefixes: Dict[str, str],
                 blank_prefix: str, source: Optional[str]):
        self.base = base
        self.root_prefixes = dict(prefixes)
        self.blank_prefix = blank_prefix
        self.source = source
        self.triples: List[Triple] = []
        self.warnings: List[str] = []
        self.blank_count = 0
        self.seen_prefixes: Dict[str, str] = {}

    def _fresh_blank(self) -> Term:
        self.blank_count += 1
        return Term(BLANK, f"{self.blank_prefix}rdfa{self.blank_count}")

    def _error(self, el: Tag, message: str, cls=ParseError) -> ParseError:
        return cls(message, getattr(el, "sourceline", None), getattr(el, "sourcepos", None), self.source)

    def resolve(self, el: Tag, value: str, prefixes: Dict[str, str]) -> Term:
        value = value.strip()
        safe = value.startswith("[") and value.endswith("]")
        if safe:
            value = value[1:-1]
        if value.startswith("_:"):
            if len(value) == 2:
                raise self._error(el, "empty blank node label")
            return Term(BLANK, self.blank_prefix + value[2:])
        prefix, colon, local = value.partition(":")
        if colon:
            if prefix in prefixes:
                return make_term(IRI, prefixes[prefix] + local)
            if not safe and (local.startswith("//") or prefix.lower() in _ABSOLUTE_SCHEMES):
                return make_term(IRI, value)
            raise self._error(el, f"undeclared prefix '{prefix}:' in '{value}'", UnknownPrefix)
        if safe:
            raise self._error(el, f"safe CURIE '[{value}]' has no prefix")
        try:
            return make_term(IRI, value, base=self.base)
        except TermError as e:
            raise TermError(e.code, f"{e.message} (line {getattr(el, 'sourceline', '?')})") from None

    def _text_literal(self, el: Tag, prefixes: Dict[str, str], lang: Optional[str]) -> Term:
        text = " ".join(el.get_text().split())
        datatype = el.get("datatype")
        if datatype:
            return make_term(LITERAL, text, datatype=self.resolve(el, datatype, prefixes).value)
        return make_term(LITERAL, text, language=lang)

    def _prefixes_for(self, el: Tag, inherited: Dict[str, str]) -> Dict[str, str]:
        declared = el.get("prefix")
        if not declared:
            return inherited
        tokens = declared.split()
        if len(tokens) % 2:
            raise self._error(el, f"malformed prefix attribute '{declared}'")
        prefixes = dict(inherited)
        for name, value in zip(tokens[::2], tokens[1::2]):
            if not name.endswith(":") or len(name) < 2:
                raise self._error(el, f"malformed prefix declaration '{name}'")
            prefixes[name[:-1]] = value
            self.seen_prefixes[name[:-1]] = value
        return prefixes

    def walk(self, el: Tag, subject: Optional[Term], prefixes: Dict[str, str], lang: Optional[str]):
        prefixes = self._prefixes_for(el, prefixes)
        lang = el.get("lang", el.get("xml:lang", lang)) or None
        for attr in _IGNORED_RDFA:
            if el.has_attr(attr):
                self.warnings.append(
                    f"ignored RDFa attribute '{attr}' on <{el.name}> at line {getattr(el, 'sourceline', '?')}")

        about = el.get("about")
        resource = el.get("resource")
        properties = (el.get("property") or "").split()
        types = (el.get("typeof") or "").split()

        current = self.resolve(el, about, prefixes) if about is not None else subject
        child_subject = current

        if properties:
            if current is None:
                raise self._error(el, f"property '{properties[0]}' has no subject")
            target = resource if resource is not None else el.get("href")
            if target is not None:
                obj = self.resolve(el, target, prefixes)
            elif types and about is None:
                obj = self._fresh_blank()
            else:
                obj = self._text_literal(el, prefixes, lang)
            for prop in properties:
                self.triples.append((current, self.resolve(el, prop, prefixes), obj))
            # with about= the element's own subject takes typeof and stays the children's subject
            typed = current if about is not None else obj
            if about is None and obj.kind != LITERAL:
                child_subject = obj
            if typed.kind != LITERAL:
                for t in types:
                    self.triples.append((typed, RDF_TYPE, self.resolve(el, t, prefixes)))
        else:
            if about is None and resource is not None:
                child_subject = self.resolve(el, resource, prefixes)
            elif about is None and types:
                child_subject = self._fresh_blank()
            for t in types:
                self.triples.append((child_subject, RDF_TYPE, self.resolve(el, t, prefixes)))

        for child in el.children:
            if isinstance(child, Tag):
                self.walk(child, child_subject, prefixes, lang)


def distill_rdfa_subset(html_text: str, base_iri: Optional[str] = None,
                        source: Optional[str] = None,
                        prefixes: Optional[Dict[str, str]] = None,
                        blank_prefix: str = "") -> TripleDoc:
    """
    Extract triples from HTML annotated with the supported RDFa attributes.

    Raises:
        ParseError: HTML that cannot be parsed
        UnknownPrefix: CURIE with an undeclared prefix
    """
    try:
        soup = BeautifulSoup(html_text, "html.parser")
    except Exception as e:
        raise ParseError(f"cannot parse HTML: {e}", source=source) from None
    if html_text.strip() and not soup.find(True):
        raise ParseError("document contains no HTML elements", 1, 1, source)

    distiller = _RdfaDistiller(base_iri, default_prefix_map(overrides=prefixes), blank_prefix, source)
    for child in soup.children:
        if isinstance(child, Tag):
            distiller.walk(child, None, distiller.root_prefixes, None)

    prefix_map = dict(distiller.root_prefixes)
    prefix_map.update(distiller.seen_prefixes)
    if distiller.warnings:
        logger.warning(f"{len(distiller.warnings)} unsupported RDFa attribute(s) ignored in {source or '<html>'}")
    return TripleDoc(distiller.triples, prefix_map, base_iri, distiller.warnings)


# Dispatch and file loading

def detect_format(path: Union[str, Path]) -> InputFormat:
    suffix = Path(path).suffix.lower()
    if suffix not in _EXTENSIONS:
        raise ParseError(f"cannot detect format of '{path}' (use .nt, .ttl, .html or --format)")
    return _EXTENSIONS[suffix]


def parse_document(text: str, fmt: InputFormat, base: Optional[str] = None,
                   source: Optional[str] = None, prefixes: Optional[Dict[str, str]] = None,
                   blank_prefix: str = "") -> TripleDoc:
    if fmt == InputFormat.NTRIPLES:
        return parse_ntriples(text, source, prefixes, blank_prefix)
    if fmt == InputFormat.TURTLE:
        return parse_turtle_subset(text, source, prefixes, base, blank_prefix)
    if fmt == InputFormat.RDFA_HTML:
        return distill_rdfa_subset(text, base, source, prefixes, blank_prefix)
    raise ValueError(f"Cannot parse format {fmt}")


def load_file(path: Union[str, Path], fmt: InputFormat = InputFormat.AUTO,
              base: Optional[str] = None, prefixes: Optional[Dict[str, str]] = None,
              blank_prefix: str = "") -> TripleDoc:
    """
    Read and parse one submission file.

    Args:
        path: input file
        fmt: explicit format, or AUTO to detect it from the extension
        base: base IRI (defaults to the file's own file:// IRI)
        blank_prefix: tag prepended to blank node labels of this input
    """
    path = Path(path)
    if fmt == InputFormat.AUTO:
        fmt = detect_format(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputNotFound(f"no such file: {path}") from None
    except OSError as e:
        raise InputNotFound(f"cannot read {path}: {e.strerror}") from None
    if base is None and fmt != InputFormat.NTRIPLES:
        base = path.resolve().as_uri()
    logger.info(f"Parsing {path} as {fmt.value}")
    return parse_document(text, fmt, base, str(path), prefixes, blank_prefix)


# Triples to ABox

def triples_to_abox(doc: TripleDoc, vocab: Optional[Vocabulary] = None) -> Tuple[Graph, List[Triple]]:
    """
    Map triples onto ABox assertions.

    Returns:
        (graph, leftover) where leftover holds the triples that use names
        outside the vocabulary

    Raises:
        TypeMisuse: concept name in predicate position, or role name as a type
    """
    vocab = vocab or default_vocabulary()
    graph = Graph()
    leftover: List[Triple] = []
    for triple in doc.triples:
        subject, predicate, obj = triple
        if vocab.is_concept(predicate):
            raise TypeMisuse(f"concept {predicate.n3()} used as a predicate on {subject.n3()}")
        if predicate == RDF_TYPE:
            if vocab.is_role(obj):
                raise TypeMisuse(f"role {obj.n3()} used as the type of {subject.n3()}")
            if vocab.is_concept(obj):
                graph.add_assertion(concept_assertion(obj, subject))
                continue
        if obj.kind == LITERAL:
            graph.add_literal_triple(triple)
        elif vocab.is_role(predicate):
            graph.add_assertion(role_assertion(predicate, subject, obj))
        else:
            leftover.append(triple)
    if leftover:
        logger.info(f"{len(leftover)} triple(s) outside the RISKMAN vocabulary kept as leftover")
    return graph, leftover


# Serializers

def graph_triples(graph: Graph) -> List[Triple]:
    """Triples of a graph (assertions plus literal triples), sorted"""
    triples: List[Triple] = []
    for a in graph.assertions:
        if a.kind == CONCEPT:
            triples.append((a.subject, RDF_TYPE, a.concept))
        else:
            triples.append((a.subject, a.role, a.object))
    triples.extend(graph.literal_triples)
    triples.sort(key=lambda t: (t[0].sort_key, t[1].sort_key, t[2].sort_key))
    return triples


def serialize_ntriples(source: Union[Graph, Iterable[Triple]]) -> str:
    triples = graph_triples(source) if isinstance(source, Graph) else source
    lines = sorted({f"{s.n3()} {p.n3()} {o.n3()} ." for s, p, o in triples})
    return "".join(line + "\n" for line in lines)


_SAFE_LOCAL = re.compile(r"^[A-Za-z_][\w-]*$")


def _shorten(term: Term, prefixes: Dict[str, str]) -> Optional[str]:
    best = None
    for prefix, ns in prefixes.items():
        if term.value.startswith(ns):
            local = term.value[len(ns):]
            if _SAFE_LOCAL.match(local) and (best is None or len(ns) > best[1]):
                best = (f"{prefix}:{local}", len(ns))
    return best[0] if best else None


def _turtle_term(term: Term, prefixes: Dict[str, str]) -> str:
    if term.kind == IRI:
        return _shorten(term, prefixes) or term.n3()
    if term.kind == LITERAL and term.datatype and not term.language and term.datatype != XSD_NS + "string":
        short = _shorten(Term(IRI, term.datatype), prefixes)
        if short:
            return Term(LITERAL, term.value).n3() + "^^" + short
    return term.n3()


def render_turtle(graph: Graph, prefixes: Optional[Dict[str, str]] = None) -> str:
    """Turtle rendering grouped by subject, using the given prefixes"""
    prefixes = default_prefix_map(overrides=prefixes)
    by_subject: Dict[Term, List[Tuple[Term, Term]]] = {}
    for s, p, o in graph_triples(graph):
        by_subject.setdefault(s, []).append((p, o))

    lines = [f"@prefix {name}: <{ns}> ." for name, ns in sorted(prefixes.items())]
    for subject in sorted(by_subject, key=lambda t: t.sort_key):
        pairs = []
        for p, o in by_subject[subject]:
            verb = "a" if p == RDF_TYPE else _turtle_term(p, prefixes)
            pairs.append(f"{verb} {_turtle_term(o, prefixes)}")
        lines.append("")
        lines.append(_turtle_term(subject, prefixes) + " " + " ;\n    ".join(pairs) + " .")
    return "\n".join(lines) + "\n"


def _curie(term: Term, prefixes: Dict[str, str]) -> str:
    if term.kind == BLANK:
        return "_:" + term.value
    short = _shorten(term, prefixes)
    return f"[{short}]" if short else term.value


def render_rdfa_html(graph: Graph, prefixes: Optional[Dict[str, str]] = None,
                     title: str = "RISKMAN submission") -> str:
    """HTML page carrying the graph as RDFa (one div per subject)"""
    prefixes = default_prefix_map(overrides=prefixes)
    declared = " ".join(f"{name}: {ns}" for name, ns in sorted(prefixes.items()))
    by_subject: Dict[Term, List[Tuple[Term, Term]]] = {}
    for s, p, o in graph_triples(graph):
        by_subject.setdefault(s, []).append((p, o))

    out = ["<!DOCTYPE html>", "<html>", "<head>",
           f"<title>{html.escape(title)}</title>", "</head>",
           f'<body prefix="{html.escape(declared)}">']
    for subject in sorted(by_subject, key=lambda t: t.sort_key):
        types = [o for p, o in by_subject[subject] if p == RDF_TYPE and o.kind == IRI]
        attrs = f'about="{html.escape(_curie(subject, prefixes))}"'
        if types:
            attrs += f' typeof="{html.escape(" ".join(_curie(t, prefixes) for t in types))}"'
        out.append(f"<div {attrs}>")
        out.append(f"  <h2>{html.escape(subject.local_name)}</h2>")
        for p, o in by_subject[subject]:
            if p == RDF_TYPE and o.kind == IRI:
                continue
            prop = html.escape(_curie(p, prefixes))
            if o.kind == LITERAL:
                if o.language:
                    extra = f' lang="{o.language}"'
                elif o.datatype and o.datatype != XSD_NS + "string":
                    extra = f' datatype="{html.escape(_curie(Term(IRI, o.datatype), prefixes))}"'
                else:
                    extra = ""
                out.append(f'  <span property="{prop}"{extra}>{html.escape(o.value)}</span>')
            else:
                res = html.escape(_curie(o, prefixes))
                out.append(f'  <span property="{prop}" resource="{res}"></span>')
        out.append("</div>")
    out += ["</body>", "</html>"]
    return "\n".join(out) + "\n"
