#!/usr/bin/env python3
"""
Shapes - path and shape expressions, the built-in RISKMAN constraints,
and target-class validation over a materialized graph.

Path expressions: role, inverse, union, sequence, reflexive-transitive
star. Shape expressions: top, concept, individual, and, not, counting
(geq), universal (forall) and path equality. exists, leq, exactly and
path inequality are constructor sugar over that core.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Set, Tuple

from report import ValidationReport, Violation, violation_sort_key
from riskman_errors import ConfigError, UnknownName
from sexpr import (Atom, SExpr, expect_arity, expect_atom, expect_int, expect_list, render_name,
                   read_sexprs, resolve_name, syntax_error)
from term_graph import Graph, Term
from vocabulary import DEFAULT_NAMESPACE, PS_NAMESPACE, Vocabulary, default_prefix_map, default_vocabulary

logger = logging.getLogger(__name__)

# Path kinds
P_ROLE = "role"
P_INVERSE = "inverse"
P_UNION = "union"
P_SEQ = "seq"
P_STAR = "star"

# Shape kinds
S_TOP = "top"
S_CONCEPT = "concept"
S_INDIVIDUAL = "individual"
S_AND = "and"
S_NOT = "not"
S_GEQ = "geq"
S_FORALL = "forall"
S_PATH_EQ = "path_eq"


@dataclass(frozen=True)
class PathExpr:
    kind: str
    role: Optional[Term] = None
    inner: Optional["PathExpr"] = None
    parts: Tuple["PathExpr", ...] = ()

    def __str__(self) -> str:
        return render_path(self)


def role_path(role: Term) -> PathExpr:
    return PathExpr(P_ROLE, role=role)


def inverse(path: PathExpr) -> PathExpr:
    return PathExpr(P_INVERSE, inner=path)


def union(*parts: PathExpr) -> PathExpr:
    if not parts:
        raise ValueError("union needs at least one path")
    return parts[0] if len(parts) == 1 else PathExpr(P_UNION, parts=tuple(parts))


def seq(*parts: PathExpr) -> PathExpr:
    if not parts:
        raise ValueError("sequence needs at least one path")
    return parts[0] if len(parts) == 1 else PathExpr(P_SEQ, parts=tuple(parts))


def star(path: PathExpr) -> PathExpr:
    return PathExpr(P_STAR, inner=path)


@dataclass(frozen=True)
class ShapeExpr:
    kind: str
    concept: Optional[Term] = None
    individual: Optional[Term] = None
    parts: Tuple["ShapeExpr", ...] = ()
    inner: Optional["ShapeExpr"] = None
    n: int = 0
    path: Optional[PathExpr] = None
    filler: Optional["ShapeExpr"] = None
    left: Optional[PathExpr] = None
    right: Optional[PathExpr] = None

    @property
    def conjuncts(self) -> Tuple["ShapeExpr", ...]:
        return self.parts if self.kind == S_AND else (self,)

    def __str__(self) -> str:
        return render_shape(self)


TOP_SHAPE = ShapeExpr(S_TOP)


def concept_shape(concept: Term) -> ShapeExpr:
    return ShapeExpr(S_CONCEPT, concept=concept)


def individual_shape(individual: Term) -> ShapeExpr:
    return ShapeExpr(S_INDIVIDUAL, individual=individual)


def and_(*parts: ShapeExpr) -> ShapeExpr:
    """Conjunction; not flattened so sugar such as exactly-one stays recognizable"""
    if not parts:
        raise ValueError("conjunction needs at least one shape")
    return parts[0] if len(parts) == 1 else ShapeExpr(S_AND, parts=tuple(parts))


def not_(shape: ShapeExpr) -> ShapeExpr:
    return ShapeExpr(S_NOT, inner=shape)


def geq(n: int, path: PathExpr, filler: ShapeExpr = TOP_SHAPE) -> ShapeExpr:
    if n < 1:
        raise ValueError(f"geq needs n >= 1, got {n}")
    return ShapeExpr(S_GEQ, n=n, path=path, filler=filler)


def forall(path: PathExpr, filler: ShapeExpr) -> ShapeExpr:
    return ShapeExpr(S_FORALL, path=path, filler=filler)


def path_eq(left: PathExpr, right: PathExpr) -> ShapeExpr:
    return ShapeExpr(S_PATH_EQ, left=left, right=right)


def exists(path: PathExpr, filler: ShapeExpr = TOP_SHAPE) -> ShapeExpr:
    return geq(1, path, filler)


def leq(n: int, path: PathExpr, filler: ShapeExpr = TOP_SHAPE) -> ShapeExpr:
    return not_(geq(n + 1, path, filler))


def exactly(n: int, path: PathExpr, filler: ShapeExpr = TOP_SHAPE) -> ShapeExpr:
    if n == 0:
        return leq(0, path, filler)
    return and_(geq(n, path, filler), leq(n, path, filler))


def exactly_one(path: PathExpr, filler: ShapeExpr = TOP_SHAPE) -> ShapeExpr:
    return exactly(1, path, filler)


def path_neq(left: PathExpr, right: PathExpr) -> ShapeExpr:
    return not_(path_eq(left, right))


# DL rendering

def render_path(p: PathExpr) -> str:
    if p.kind == P_ROLE:
        return p.role.local_name
    if p.kind in (P_INVERSE, P_STAR):
        inner = render_path(p.inner)
        if p.inner.kind in (P_UNION, P_SEQ):
            inner = f"({inner})"
        return inner + ("⁻" if p.kind == P_INVERSE else "*")
    joiner = " ∪ " if p.kind == P_UNION else " • "
    rendered = []
    for part in p.parts:
        text = render_path(part)
        if part.kind == P_UNION and p.kind == P_SEQ:
            text = f"({text})"
        rendered.append(text)
    return joiner.join(rendered)


def _path_operand(p: PathExpr) -> str:
    text = render_path(p)
    return f"({text})" if p.kind in (P_UNION, P_SEQ) else text


def _shape_operand(s: ShapeExpr) -> str:
    text = render_shape(s)
    if s.kind == S_PATH_EQ or (s.kind == S_AND and _exactly_n(s) is None):
        return f"({text})"
    return text


def _exactly_n(s: ShapeExpr) -> Optional[int]:
    """n if s is the exactly-n pattern and(geq n, not geq n+1)"""
    if s.kind != S_AND or len(s.parts) != 2:
        return None
    low, high = s.parts
    if (low.kind == S_GEQ and high.kind == S_NOT and high.inner.kind == S_GEQ
            and high.inner.n == low.n + 1 and high.inner.path == low.path
            and high.inner.filler == low.filler):
        return low.n
    return None


def render_shape(s: ShapeExpr) -> str:
    if s.kind == S_TOP:
        return "⊤"
    if s.kind == S_CONCEPT:
        return s.concept.local_name
    if s.kind == S_INDIVIDUAL:
        return "{" + s.individual.local_name + "}"
    if s.kind == S_AND:
        n = _exactly_n(s)
        if n is not None:
            low = s.parts[0]
            return f"∃₌{n}{_path_operand(low.path)}.{_shape_operand(low.filler)}"
        return " ∧ ".join(_shape_operand(p) for p in s.parts)
    if s.kind == S_NOT:
        inner = s.inner
        if inner.kind == S_PATH_EQ:
            return f"{render_path(inner.left)} ≠ {render_path(inner.right)}"
        if inner.kind == S_GEQ and inner.n > 1:
            return f"≤{inner.n - 1}{_path_operand(inner.path)}.{_shape_operand(inner.filler)}"
        return "¬" + _shape_operand(inner)
    if s.kind == S_GEQ:
        quantifier = "∃" if s.n == 1 else f"≥{s.n}"
        return f"{quantifier}{_path_operand(s.path)}.{_shape_operand(s.filler)}"
    if s.kind == S_FORALL:
        return f"∀{_path_operand(s.path)}.{_shape_operand(s.filler)}"
    return f"{render_path(s.left)} = {render_path(s.right)}"


# Evaluation

def _step(graph: Graph, p: PathExpr, inverted: bool):
    """Neighbour lookup for a plain or inverted role path"""
    if p.kind == P_INVERSE and p.inner.kind == P_ROLE:
        return _step(graph, p.inner, not inverted)
    if p.kind != P_ROLE:
        return None
    view = graph.predecessor_view if inverted else graph.successor_view
    return lambda node: view(p.role, node)


def _image(graph: Graph, p: PathExpr, sources: Set[Term], inverted: bool = False) -> Set[Term]:
    """All nodes reachable from sources via p (or via p⁻ when inverted)"""
    if not sources:
        return set()
    if p.kind == P_ROLE:
        step = _step(graph, p, inverted)
        result: Set[Term] = set()
        for node in sources:
            result.update(step(node))
        return result
    if p.kind == P_INVERSE:
        return _image(graph, p.inner, sources, not inverted)
    if p.kind == P_UNION:
        result = set()
        for part in p.parts:
            result |= _image(graph, part, sources, inverted)
        return result
    if p.kind == P_SEQ:
        current = sources
        for part in (reversed(p.parts) if inverted else p.parts):
            current = _image(graph, part, current, inverted)
            if not current:
                break
        return current
    # star: identity on graph nodes plus breadth-first closure
    reached = {n for n in sources if graph.has_node(n)}
    frontier = set(reached)
    while frontier:
        frontier = _image(graph, p.inner, frontier, inverted) - reached
        reached |= frontier
    return reached


def _escapes(graph: Graph, p: PathExpr, node: Term, bound: Set[Term]) -> bool:
    """Whether p reaches some node outside bound, stopping at the first one"""
    if p.kind == P_SEQ:
        *prefix, last = p.parts
        sources = _image(graph, seq(*prefix), {node}) if prefix else {node}
    else:
        last, sources = p, {node}
    step = _step(graph, last, False)
    if step is None:
        return not _image(graph, last, sources) <= bound
    for source in sources:
        for reached in step(source):
            if reached not in bound:
                return True
    return False


def _same_image(graph: Graph, left: PathExpr, right: PathExpr, node: Term) -> bool:
    target = _image(graph, right, {node})
    if _escapes(graph, left, node, target):
        return False
    return _image(graph, left, {node}) == target


def eval_path_from(graph: Graph, path: PathExpr, node: Term) -> Set[Term]:
    """Successors of node under path"""
    return _image(graph, path, {node})


def eval_path(graph: Graph, path: PathExpr) -> Set[Tuple[Term, Term]]:
    """The binary relation denoted by path over nodes(graph)"""
    return {(a, b) for a in graph.nodes() for b in eval_path_from(graph, path, a)}


def eval_shape(graph: Graph, shape: ShapeExpr) -> Set[Term]:
    """Set of nodes satisfying shape, computed bottom-up"""
    nodes = graph.nodes()
    k = shape.kind
    if k == S_TOP:
        return nodes
    if k == S_CONCEPT:
        return graph.instances(shape.concept) & nodes
    if k == S_INDIVIDUAL:
        return {shape.individual} & nodes
    if k == S_AND:
        result = eval_shape(graph, shape.parts[0])
        for part in shape.parts[1:]:
            result &= eval_shape(graph, part)
        return result
    if k == S_NOT:
        return nodes - eval_shape(graph, shape.inner)
    if k == S_GEQ:
        accepted = eval_shape(graph, shape.filler)
        return {a for a in nodes
                if len(eval_path_from(graph, shape.path, a) & accepted) >= shape.n}
    if k == S_FORALL:
        accepted = eval_shape(graph, shape.filler)
        return {a for a in nodes if eval_path_from(graph, shape.path, a) <= accepted}
    return {a for a in nodes
            if eval_path_from(graph, shape.left, a) == eval_path_from(graph, shape.right, a)}


def holds_at(graph: Graph, shape: ShapeExpr, node: Term) -> bool:
    """Whether node satisfies shape; agrees with membership in eval_shape"""
    if not graph.has_node(node):
        return False
    k = shape.kind
    if k == S_TOP:
        return True
    if k == S_CONCEPT:
        return graph.has_concept(shape.concept, node)
    if k == S_INDIVIDUAL:
        return node == shape.individual
    if k == S_AND:
        return all(holds_at(graph, p, node) for p in shape.parts)
    if k == S_NOT:
        return not holds_at(graph, shape.inner, node)
    if k == S_GEQ:
        count = 0
        for b in eval_path_from(graph, shape.path, node):
            if holds_at(graph, shape.filler, b):
                count += 1
                if count >= shape.n:
                    return True
        return False
    if k == S_FORALL:
        return all(holds_at(graph, shape.filler, b) for b in eval_path_from(graph, shape.path, node))
    return _same_image(graph, shape.left, shape.right, node)


# Failure descriptions

def _names(nodes: Iterable[Term]) -> str:
    names = sorted(n.local_name for n in nodes)
    return ", ".join(names) if names else "∅"


def _matching(graph: Graph, shape: ShapeExpr, node: Term) -> List[Term]:
    return [b for b in eval_path_from(graph, shape.path, node) if holds_at(graph, shape.filler, b)]


def describe_failure(graph: Graph, shape: ShapeExpr, node: Term) -> str:
    """Short explanation of why shape fails at node"""
    n = _exactly_n(shape)
    if n is not None:
        low = shape.parts[0]
        found = len(_matching(graph, low, node))
        what = render_path(low.path)
        if low.filler.kind != S_TOP:
            what += f" to {render_shape(low.filler)}"
        return f"expected exactly {'one' if n == 1 else n} {what}, found {found}"
    k = shape.kind
    if k == S_GEQ:
        found = len(_matching(graph, shape, node))
        if shape.n == 1:
            if shape.filler.kind == S_TOP:
                return f"no {render_path(shape.path)} successor"
            return f"no {render_shape(shape.filler)} reachable via {render_path(shape.path)}"
        return f"expected at least {shape.n} {render_path(shape.path)}, found {found}"
    if k == S_NOT and shape.inner.kind == S_GEQ:
        inner = shape.inner
        found = _matching(graph, inner, node)
        if inner.n == 1:
            return f"{render_path(inner.path)} reaches {render_shape(inner.filler)}: {_names(found)}"
        return f"expected at most {inner.n - 1} {render_path(inner.path)}, found {len(found)}"
    if k == S_NOT and shape.inner.kind == S_PATH_EQ:
        inner = shape.inner
        same = eval_path_from(graph, inner.left, node)
        return f"{render_path(inner.left)} and {render_path(inner.right)} both reach {_names(same)}"
    if k == S_FORALL:
        outside = [b for b in eval_path_from(graph, shape.path, node)
                   if not holds_at(graph, shape.filler, b)]
        return f"{render_path(shape.path)} reaches nodes outside {render_shape(shape.filler)}: {_names(outside)}"
    if k == S_PATH_EQ:
        left = eval_path_from(graph, shape.left, node)
        right = eval_path_from(graph, shape.right, node)
        return (f"{render_path(shape.left)} reaches {_names(left)} but "
                f"{render_path(shape.right)} reaches {_names(right)}")
    if k == S_CONCEPT:
        return f"not a {shape.concept.local_name}"
    if k == S_INDIVIDUAL:
        return f"not {shape.individual.local_name}"
    return f"fails {render_shape(shape)}"


# Constraints and schemas

@dataclass(frozen=True)
class Constraint:
    id: str
    head_concept: Term
    body: ShapeExpr
    message_template: str = "{detail}"
    variant: Optional[str] = None

    def __str__(self) -> str:
        return f"{self.head_concept.local_name} ← {render_shape(self.body)}"

    def first_failure(self, graph: Graph, node: Term) -> Optional[ShapeExpr]:
        for conjunct in self.body.conjuncts:
            if not holds_at(graph, conjunct, node):
                return conjunct
        return None

    def message(self, graph: Graph, node: Term, conjunct: ShapeExpr) -> str:
        return self.message_template.format(
            head=self.head_concept.local_name,
            conjunct=render_shape(conjunct),
            detail=describe_failure(graph, conjunct, node),
            variant=self.variant or "",
        )


@dataclass
class Schema:
    constraints: List[Constraint] = field(default_factory=list)
    targets: str = "target-class"

    def __post_init__(self):
        seen: Set[str] = set()
        for c in self.constraints:
            if c.id in seen:
                raise ConfigError(f"duplicate constraint id '{c.id}'")
            seen.add(c.id)

    def extend(self, constraints: Iterable[Constraint]) -> "Schema":
        return Schema(self.constraints + list(constraints), self.targets)


C4_VARIANTS = ("hasProbability", "hasProbability1", "hasProbability2", "hasSeverity")


@lru_cache(maxsize=None)
def _builtin_constraints(namespace: str) -> Tuple[Constraint, ...]:
    v = default_vocabulary(namespace)
    C, R = v.concept, v.role
    one = lambda role: exactly_one(role_path(R(role)))
    constraints = [
        Constraint("C1", C("AnalyzedRisk"), and_(*(one(r) for r in (
            "hasDomainSpecificHazard", "hasHarm", "hasDeviceContext",
            "hasInitialRiskLevel", "hasHazardousSituation")))),
        Constraint("C2", C("AssuranceSDA"), and_(
            forall(role_path(R("hasSubSDA")), concept_shape(C("AssuranceSDA"))),
            one("hasSafetyAssurance"))),
        Constraint("C3", C("ControlledRisk"), and_(*(one(r) for r in (
            "isMitigatedBy", "hasAnalyzedRisk", "hasResidualRiskLevel")))),
    ]
    for x in C4_VARIANTS:
        left = seq(role_path(R("hasAnalyzedRisk")), role_path(R("hasInitialRiskLevel")),
                   role_path(R(x)), inverse(role_path(R("gt"))), inverse(role_path(R(x))))
        constraints.append(Constraint(
            f"C4.{x}", C("ControlledRisk"),
            path_neq(left, role_path(R("hasResidualRiskLevel"))),
            "residual {variant} exceeds the initial one: {detail}", x))
    constraints += [
        Constraint("C5", C("DomainSpecificHazard"), and_(*(one(r) for r in (
            "hasDeviceComponent", "hasDeviceFunction", "hasHazard")))),
        Constraint("C6", C("RiskLevel"), and_(one("hasProbability"), one("hasSeverity"))),
        Constraint("C7", C("SafeDesignArgument"),
                   exists(star(role_path(R("hasSubSDA"))), concept_shape(C("SDAI")))),
    ]
    return tuple(constraints)


def builtin_constraints(namespace: str = DEFAULT_NAMESPACE) -> List[Constraint]:
    """The ten RISKMAN constraints, with the residual-risk check per magnitude role"""
    return list(_builtin_constraints(namespace))


def _check_constraint(graph: Graph, constraint: Constraint) -> Tuple[List[Violation], int]:
    focus = graph.instances(constraint.head_concept)
    violations = []
    for node in focus:
        failed = constraint.first_failure(graph, node)
        if failed is not None:
            violations.append(Violation(constraint.id, node, constraint.message(graph, node, failed),
                                        constraint.variant, constraint.head_concept))
    return violations, len(focus)


def validate(graph: Graph, schema: Schema, workers: int = 1) -> ValidationReport:
    """
    Check every constraint A ← φ at every node labelled A in graph.

    Args:
        graph: saturated closure (read-only)
        schema: constraints to check
        workers: constraints checked concurrently when > 1
    """
    if workers > 1 and len(schema.constraints) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: _check_constraint(graph, c), schema.constraints))
    else:
        results = [_check_constraint(graph, c) for c in schema.constraints]

    violations: List[Violation] = []
    focus_counts: Dict[str, int] = {}
    for constraint, (found, count) in zip(schema.constraints, results):
        violations.extend(found)
        focus_counts[constraint.id] = count
    violations.sort(key=violation_sort_key)
    logger.info(f"Validated {len(schema.constraints)} constraints: {len(violations)} violation(s)")
    return ValidationReport(conforms=not violations, violations=violations, focus_counts=focus_counts)


# Shape DSL

class _ShapeReader:

    def __init__(self, prefixes: Dict[str, str], namespace: str,
                 vocabulary: Optional[Vocabulary], source: Optional[str]):
        self.prefixes = prefixes
        self.namespace = namespace
        self.vocabulary = vocabulary
        self.source = source

    def _name(self, node: SExpr, what: str, namespace: Optional[str] = None) -> Term:
        atom = expect_atom(node, what, self.source)
        return resolve_name(atom, self.prefixes, namespace or self.namespace, self.source)

    def role(self, node: SExpr) -> Term:
        term = self._name(node, "role name")
        if self.vocabulary is not None and not self.vocabulary.is_role(term):
            raise syntax_error(node, f"unknown role '{node}'", self.source, UnknownName)
        return term

    def concept(self, node: SExpr) -> Term:
        term = self._name(node, "class name")
        if self.vocabulary is not None and not self.vocabulary.is_concept(term):
            raise syntax_error(node, f"unknown class '{node}'", self.source, UnknownName)
        return term

    def path(self, node: SExpr) -> PathExpr:
        if isinstance(node, Atom):
            return role_path(self.role(node))
        form = expect_list(node, self.source)
        head = form.head
        if head == "path":
            expect_arity(form, 1, 1, self.source)
            return role_path(self.role(form.args[0]))
        if head in ("inv", "star"):
            expect_arity(form, 1, 1, self.source)
            inner = self.path(form.args[0])
            return inverse(inner) if head == "inv" else star(inner)
        if head in ("seq", "alt"):
            expect_arity(form, 1, None, self.source)
            parts = [self.path(a) for a in form.args]
            return seq(*parts) if head == "seq" else union(*parts)
        raise syntax_error(form, f"unknown path form '{head}'", self.source)

    def shape(self, node: SExpr) -> ShapeExpr:
        if isinstance(node, Atom) and not node.bracketed and node.value == "top":
            return TOP_SHAPE
        form = expect_list(node, self.source)
        head, args = form.head, form.args
        if head == "class":
            expect_arity(form, 1, 1, self.source)
            return concept_shape(self.concept(args[0]))
        if head == "ind":
            expect_arity(form, 1, 1, self.source)
            return individual_shape(self._name(args[0], "individual name", PS_NAMESPACE))
        if head == "and":
            expect_arity(form, 1, None, self.source)
            return and_(*(self.shape(a) for a in args))
        if head == "not":
            expect_arity(form, 1, 1, self.source)
            return not_(self.shape(args[0]))
        if head in ("geq", "leq", "exactly"):
            expect_arity(form, 3, 3, self.source)
            n = expect_int(args[0], "count", self.source)
            if head == "geq" and n < 1:
                raise syntax_error(args[0], "geq needs a count of at least 1", self.source)
            build = {"geq": geq, "leq": leq, "exactly": exactly}[head]
            return build(n, self.path(args[1]), self.shape(args[2]))
        if head == "some":
            expect_arity(form, 2, 2, self.source)
            return exists(self.path(args[0]), self.shape(args[1]))
        if head == "all":
            expect_arity(form, 2, 2, self.source)
            return forall(self.path(args[0]), self.shape(args[1]))
        if head in ("eq", "neq"):
            expect_arity(form, 2, 2, self.source)
            build = path_eq if head == "eq" else path_neq
            return build(self.path(args[0]), self.path(args[1]))
        raise syntax_error(form, f"unknown shape form '{head}'", self.source)


def parse_shape_dsl(text: str, vocabulary: Optional[Vocabulary] = None,
                    prefix_map: Optional[Dict[str, str]] = None,
                    namespace: str = DEFAULT_NAMESPACE, source: Optional[str] = None,
                    first_id: int = 1) -> List[Constraint]:
    """
    Parse shape DSL text into constraints with ids E<first_id>, E<first_id+1>, ...

    Raises:
        ParseError: syntax error with line and column
        UnknownName: a role or class missing from vocabulary (when given)
    """
    prefixes = default_prefix_map(namespace, prefix_map)
    reader = _ShapeReader(prefixes, namespace, vocabulary, source)
    constraints = []
    for node in read_sexprs(text, source):
        form = expect_list(node, source)
        if form.head != "constraint":
            raise syntax_error(form, f"expected (constraint NAME shape), found '{form.head}'", source)
        expect_arity(form, 2, 2, source)
        head = reader.concept(form.args[0])
        body = reader.shape(form.args[1])
        constraints.append(Constraint(f"E{first_id + len(constraints)}", head, body,
                                      "{head} ← {conjunct}"))
    return constraints


def render_path_dsl(p: PathExpr, prefixes: Dict[str, str], namespace: str) -> str:
    if p.kind == P_ROLE:
        return render_name(p.role, prefixes, namespace)
    if p.kind in (P_INVERSE, P_STAR):
        head = "inv" if p.kind == P_INVERSE else "star"
        return f"({head} {render_path_dsl(p.inner, prefixes, namespace)})"
    head = "seq" if p.kind == P_SEQ else "alt"
    return f"({head} " + " ".join(render_path_dsl(q, prefixes, namespace) for q in p.parts) + ")"


def _render_shape_dsl(s: ShapeExpr, prefixes: Dict[str, str], namespace: str) -> str:
    path = lambda p: render_path_dsl(p, prefixes, namespace)
    shape = lambda t: _render_shape_dsl(t, prefixes, namespace)
    if s.kind == S_TOP:
        return "top"
    if s.kind == S_CONCEPT:
        return f"(class {render_name(s.concept, prefixes, namespace)})"
    if s.kind == S_INDIVIDUAL:
        return f"(ind {render_name(s.individual, prefixes, PS_NAMESPACE)})"
    if s.kind == S_AND:
        return "(and " + " ".join(shape(p) for p in s.parts) + ")"
    if s.kind == S_NOT:
        return f"(not {shape(s.inner)})"
    if s.kind == S_GEQ:
        return f"(geq {s.n} {path(s.path)} {shape(s.filler)})"
    if s.kind == S_FORALL:
        return f"(all {path(s.path)} {shape(s.filler)})"
    return f"(eq {path(s.left)} {path(s.right)})"


def render_shape_dsl(constraint: Constraint, prefix_map: Optional[Dict[str, str]] = None,
                     namespace: str = DEFAULT_NAMESPACE) -> str:
    """Core-form DSL text that parses back to the same head and body"""
    prefixes = default_prefix_map(namespace, prefix_map)
    head = render_name(constraint.head_concept, prefixes, namespace)
    return f"(constraint {head} {_render_shape_dsl(constraint.body, prefixes, namespace)})"
