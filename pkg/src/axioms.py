#!/usr/bin/env python3
"""
Axioms - the restricted EL++ grammar and the built-in RISKMAN ontology

Concept expressions, axioms (GCIs, role inclusions, ranges, transitivity,
disjointness), the fragment check that keeps saturation free of fresh
individuals, hierarchy-derived disjointness, and the s-expression axiom
DSL used for ontology extensions.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Optional, Set, Tuple

from riskman_errors import CyclicHierarchy, UnsupportedAxiom
from sexpr import (Atom, expect_arity, expect_atom, expect_list, read_sexprs,
                   render_name, resolve_name, syntax_error)
from term_graph import Assertion, Term
from vocabulary import (DEFAULT_NAMESPACE, PS_NAMESPACE, Vocabulary,
                        default_prefix_map, default_vocabulary)

logger = logging.getLogger(__name__)

# ConceptExpr kinds
TOP = "top"
BOTTOM = "bottom"
NAME = "name"
NOMINAL = "nominal"
CONJ = "conj"
EXISTS = "exists"

# Axiom kinds
GCI = "gci"
ROLE_INCLUSION = "role_inclusion"
RANGE = "range"
TRANSITIVE = "transitive"
DISJOINT = "disjoint"


@dataclass(frozen=True)
class ConceptExpr:
    kind: str
    name: Optional[Term] = None
    individual: Optional[Term] = None
    conjuncts: Tuple["ConceptExpr", ...] = ()
    role: Optional[Term] = None
    filler: Optional["ConceptExpr"] = None

    @property
    def parts(self) -> Tuple["ConceptExpr", ...]:
        """Top-level conjuncts (a non-conjunction is its own single part)"""
        return self.conjuncts if self.kind == CONJ else (self,)

    def __str__(self) -> str:
        return render_concept(self)


TOP_CONCEPT = ConceptExpr(TOP)
BOTTOM_CONCEPT = ConceptExpr(BOTTOM)


def concept_name(name: Term) -> ConceptExpr:
    return ConceptExpr(NAME, name=name)


def nominal(individual: Term) -> ConceptExpr:
    return ConceptExpr(NOMINAL, individual=individual)


def conj(*parts: ConceptExpr) -> ConceptExpr:
    """Conjunction; nested conjunctions are flattened, one part collapses"""
    flat: List[ConceptExpr] = []
    for part in parts:
        flat.extend(part.conjuncts if part.kind == CONJ else (part,))
    if not flat:
        raise ValueError("conjunction needs at least one conjunct")
    if len(flat) == 1:
        return flat[0]
    return ConceptExpr(CONJ, conjuncts=tuple(flat))


def exists(role: Term, filler: ConceptExpr = TOP_CONCEPT) -> ConceptExpr:
    return ConceptExpr(EXISTS, role=role, filler=filler)


@dataclass(frozen=True)
class Axiom:
    kind: str
    lhs: Optional[ConceptExpr] = None
    rhs: Optional[ConceptExpr] = None
    chain: Tuple[Term, ...] = ()
    super_role: Optional[Term] = None
    role: Optional[Term] = None
    concept: Optional[Term] = None
    pair: Tuple[Term, ...] = ()
    label: Optional[str] = field(default=None, compare=False)

    def __str__(self) -> str:
        return render_axiom(self)


def gci(lhs: ConceptExpr, rhs: ConceptExpr, label: Optional[str] = None) -> Axiom:
    return Axiom(GCI, lhs=lhs, rhs=rhs, label=label)


def subclass(sub: Term, sup: Term, label: Optional[str] = None) -> Axiom:
    return gci(concept_name(sub), concept_name(sup), label)


def domain_axiom(role: Term, concept: Term, label: Optional[str] = None) -> Axiom:
    return gci(exists(role), concept_name(concept), label)


def role_inclusion(chain: Iterable[Term], super_role: Term, label: Optional[str] = None) -> Axiom:
    chain = tuple(chain)
    if not chain:
        raise ValueError("role chain needs at least one role")
    return Axiom(ROLE_INCLUSION, chain=chain, super_role=super_role, label=label)


def range_axiom(role: Term, concept: Term, label: Optional[str] = None) -> Axiom:
    return Axiom(RANGE, role=role, concept=concept, label=label)


def transitive(role: Term, label: Optional[str] = None) -> Axiom:
    return Axiom(TRANSITIVE, role=role, label=label)


def disjoint(a: Term, b: Term, label: Optional[str] = None) -> Axiom:
    return Axiom(DISJOINT, pair=tuple(sorted((a, b), key=lambda t: t.value)), label=label)


# DL notation

def render_concept(c: ConceptExpr) -> str:
    if c.kind == TOP:
        return "⊤"
    if c.kind == BOTTOM:
        return "⊥"
    if c.kind == NAME:
        return c.name.local_name
    if c.kind == NOMINAL:
        return "{" + c.individual.local_name + "}"
    if c.kind == CONJ:
        return " ⊓ ".join(render_concept(p) for p in c.conjuncts)
    filler = render_concept(c.filler)
    if c.filler.kind == CONJ:
        filler = f"({filler})"
    return f"∃{c.role.local_name}.{filler}"


def render_axiom(a: Axiom) -> str:
    """DL notation with local names, e.g. 'RiskSDA ⊓ SDAI ⊑ RiskSDAI'"""
    if a.kind == GCI:
        return f"{render_concept(a.lhs)} ⊑ {render_concept(a.rhs)}"
    if a.kind == ROLE_INCLUSION:
        return " ∘ ".join(r.local_name for r in a.chain) + f" ⊑ {a.super_role.local_name}"
    if a.kind == RANGE:
        return f"ran({a.role.local_name}) ⊑ {a.concept.local_name}"
    if a.kind == TRANSITIVE:
        return f"tra({a.role.local_name})"
    return f"{a.pair[0].local_name} ⊓ {a.pair[1].local_name} ⊑ ⊥"


# Fragment check

class FragmentVerdict(NamedTuple):
    ok: bool
    reason: Optional[str] = None
    offending: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


_OK = FragmentVerdict(True)


def _unsupported(reason: str, expr) -> FragmentVerdict:
    text = render_concept(expr) if isinstance(expr, ConceptExpr) else str(expr)
    return FragmentVerdict(False, reason, text)


def _check_lhs_conjunct(c: ConceptExpr) -> FragmentVerdict:
    if c.kind in (TOP, NAME):
        return _OK
    if c.kind == EXISTS:
        if c.filler.kind in (TOP, NAME, NOMINAL):
            return _OK
        if c.filler.kind == EXISTS:
            return _unsupported("nested existential restriction", c)
        return _unsupported("existential filler must be ⊤, a concept name or a nominal", c)
    if c.kind == NOMINAL:
        return _unsupported("nominal on the left-hand side outside an existential restriction", c)
    if c.kind == BOTTOM:
        return _unsupported("⊥ on the left-hand side", c)
    return _unsupported("unexpected left-hand side conjunct", c)


def check_fragment(axiom: Axiom) -> FragmentVerdict:
    """
    Check an axiom against the supported EL fragment.

    Left-hand sides are conjunctions of ⊤, concept names and existentials
    whose filler is ⊤, a name or a nominal. Right-hand sides are a concept
    name, ⊥, or an existential with a nominal filler, so saturation never
    has to invent individuals.
    """
    if axiom.kind == GCI:
        for part in axiom.lhs.parts:
            verdict = _check_lhs_conjunct(part)
            if not verdict:
                return verdict
        rhs = axiom.rhs
        if rhs.kind in (NAME, BOTTOM):
            return _OK
        if rhs.kind == EXISTS:
            if rhs.filler.kind == NOMINAL:
                return _OK
            return _unsupported(
                "existential on the right-hand side needs a nominal filler "
                "(anything else requires fresh individuals)", rhs)
        if rhs.kind == CONJ:
            return _unsupported("conjunction on the right-hand side (split it into one axiom per conjunct)", rhs)
        return _unsupported("right-hand side must be a concept name, ⊥ or ∃R.{a}", rhs)
    if axiom.kind == ROLE_INCLUSION:
        return _OK if axiom.chain else _unsupported("empty role chain", render_axiom(axiom))
    if axiom.kind in (RANGE, TRANSITIVE):
        return _OK
    if axiom.kind == DISJOINT:
        if len(axiom.pair) == 2 and axiom.pair[0] != axiom.pair[1]:
            return _OK
        return _unsupported("disjointness needs two distinct concepts", render_axiom(axiom))
    return _unsupported("unknown axiom kind", axiom.kind)


# Hierarchy and disjointness

Hierarchy = List[Tuple[Term, Term]]


def _supers(hierarchy: Iterable[Tuple[Term, Term]]) -> Dict[Term, Set[Term]]:
    supers: Dict[Term, Set[Term]] = {}
    for sub, sup in hierarchy:
        supers.setdefault(sub, set()).add(sup)
        supers.setdefault(sup, set())
    return supers


def _check_acyclic(supers: Dict[Term, Set[Term]]):
    state: Dict[Term, int] = {}
    path: List[Term] = []

    def visit(node: Term):
        state[node] = 1
        path.append(node)
        for sup in sorted(supers[node], key=lambda t: t.value):
            if state.get(sup) == 1:
                cycle = path[path.index(sup):] + [sup]
                raise CyclicHierarchy(t.local_name for t in cycle)
            if sup not in state:
                visit(sup)
        path.pop()
        state[node] = 2

    for node in sorted(supers, key=lambda t: t.value):
        if node not in state:
            visit(node)


def ancestors(hierarchy: Iterable[Tuple[Term, Term]]) -> Dict[Term, Set[Term]]:
    """Reflexive-transitive superclasses of every class in the hierarchy"""
    supers = _supers(hierarchy)
    _check_acyclic(supers)
    closed: Dict[Term, Set[Term]] = {}

    def up(node: Term) -> Set[Term]:
        if node not in closed:
            result = {node}
            for sup in supers[node]:
                result |= up(sup)
            closed[node] = result
        return closed[node]

    for node in supers:
        up(node)
    return closed


def derive_disjointness(hierarchy: Iterable[Tuple[Term, Term]],
                        concept_names: Iterable[Term]) -> Set[Tuple[Term, Term]]:
    """
    Pairs of declared concepts that are disjoint.

    Two classes are disjoint unless one subsumes the other or some declared
    class is a subclass of both.

    Raises:
        CyclicHierarchy: if the hierarchy has a cycle
    """
    names = sorted(set(concept_names), key=lambda t: t.value)
    up = ancestors(hierarchy)
    # descendants restricted to declared names; reflexive
    below: Dict[Term, Set[Term]] = {n: set() for n in names}
    for n in names:
        for a in up.get(n, {n}):
            if a in below:
                below[a].add(n)
    pairs = set()
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            if not below[a] & below[b]:
                pairs.add((a, b))
    return pairs


# Ontology

@dataclass(frozen=True)
class Ontology:
    axioms: Tuple[Axiom, ...] = ()
    abox_constants: Tuple[Assertion, ...] = ()
    hierarchy: Tuple[Tuple[Term, Term], ...] = ()
    vocabulary: Vocabulary = field(default_factory=default_vocabulary)

    def constants(self) -> Set[Term]:
        """Individuals introduced by the ontology (nominals and ABox constants)"""
        found: Set[Term] = set()

        def walk(c: Optional[ConceptExpr]):
            if c is None:
                return
            if c.kind == NOMINAL:
                found.add(c.individual)
            for part in c.conjuncts:
                walk(part)
            walk(c.filler)

        for a in self.axioms:
            walk(a.lhs)
            walk(a.rhs)
        for a in self.abox_constants:
            found.add(a.subject)
            if a.object is not None:
                found.add(a.object)
        return found

    def disjoint_pairs(self) -> Set[Tuple[Term, Term]]:
        return {a.pair for a in self.axioms if a.kind == DISJOINT}

    def merge(self, other: "Ontology") -> "Ontology":
        """Union of two ontologies; the vocabulary grows by the names other uses"""
        merged = self.extend(other.axioms, other.abox_constants)
        return replace(merged, hierarchy=merged.hierarchy + tuple(
            p for p in other.hierarchy if p not in merged.hierarchy))

    def extend(self, axioms: Iterable[Axiom] = (), abox: Iterable[Assertion] = ()) -> "Ontology":
        axioms = tuple(axioms)
        abox = tuple(abox)
        concepts, roles = axiom_names(axioms)
        for a in abox:
            if a.concept is not None:
                concepts.add(a.concept)
            if a.role is not None:
                roles.add(a.role)
        vocab = self.vocabulary
        new_concepts = {c for c in concepts if not vocab.is_role(c)}
        new_roles = {r for r in roles if not vocab.is_concept(r)}
        chains = [a for a in axioms if a.kind == ROLE_INCLUSION and len(a.chain) > 1]
        if chains and any(a.kind == RANGE for a in self.axioms + axioms):
            logger.warning(
                f"{len(chains)} added role chain(s) are not checked against the "
                "range/role-inclusion restriction; saturation may be incomplete")
        subclasses = tuple((a.lhs.name, a.rhs.name) for a in axioms if _is_subclass(a))
        return Ontology(
            axioms=self.axioms + axioms,
            abox_constants=self.abox_constants + abox,
            hierarchy=self.hierarchy + subclasses,
            vocabulary=vocab.extended(new_concepts, new_roles),
        )


def _is_subclass(a: Axiom) -> bool:
    return a.kind == GCI and a.lhs.kind == NAME and a.rhs.kind == NAME


def axiom_names(axioms: Iterable[Axiom]) -> Tuple[Set[Term], Set[Term]]:
    """(concept names, role names) occurring in axioms"""
    concepts: Set[Term] = set()
    roles: Set[Term] = set()

    def walk(c: Optional[ConceptExpr]):
        if c is None:
            return
        if c.kind == NAME:
            concepts.add(c.name)
        if c.role is not None:
            roles.add(c.role)
        for part in c.conjuncts:
            walk(part)
        walk(c.filler)

    for a in axioms:
        walk(a.lhs)
        walk(a.rhs)
        roles.update(a.chain)
        for r in (a.super_role, a.role):
            if r is not None:
                roles.add(r)
        if a.concept is not None:
            concepts.add(a.concept)
        concepts.update(a.pair)
    return concepts, roles


# Built-in RISKMAN ontology

SUBCLASSES = (
    ("AnalyzedRisk", "Risk"),
    ("ControlledRisk", "Risk"),
    ("SDAI", "SafeDesignArgument"),
    ("RiskSDA", "SafeDesignArgument"),
    ("RiskSDAI", "RiskSDA"),
    ("RiskSDAI", "SDAI"),
    ("AssuranceSDA", "SafeDesignArgument"),
    ("AssuranceSDAI", "AssuranceSDA"),
    ("AssuranceSDAI", "SDAI"),
)

# role -> (domain, range); gt stays untyped
TYPED_EDGES = {
    "hasParentHazard": ("Hazard", "Hazard"),
    "hasHazard": ("DomainSpecificHazard", "Hazard"),
    "hasDeviceFunction": ("DomainSpecificHazard", "DeviceFunction"),
    "hasDeviceProblem": ("DomainSpecificHazard", "DeviceProblem"),
    "hasDeviceComponent": ("DomainSpecificHazard", "DeviceComponent"),
    "isPartOfDeviceComponent": ("DeviceComponent", "DeviceComponent"),
    "hasDomainSpecificHazard": ("AnalyzedRisk", "DomainSpecificHazard"),
    "causesHarm": ("DomainSpecificHazard", "Harm"),
    "hasHarm": ("Risk", "Harm"),
    "hasAnalyzedRisk": ("ControlledRisk", "AnalyzedRisk"),
    "hasPrecedingEvent": ("Event", "Event"),
    "hasParentSituation": ("HazardousSituation", "HazardousSituation"),
    "hasEvent": ("HazardousSituation", "Event"),
    "hasProbability": ("RiskLevel", "Probability"),
    "hasProbability1": ("RiskLevel", "Probability"),
    "hasProbability2": ("RiskLevel", "Probability"),
    "hasSeverity": ("RiskLevel", "Severity"),
    "hasDeviceContext": ("AnalyzedRisk", "DeviceContext"),
    "hasHazardousSituation": ("AnalyzedRisk", "HazardousSituation"),
    "hasPatientProblem": ("AnalyzedRisk", "PatientProblem"),
    "hasInitialRiskLevel": ("AnalyzedRisk", "RiskLevel"),
    "hasRiskLevel": ("Risk", "RiskLevel"),
    "hasResidualRiskLevel": ("ControlledRisk", "RiskLevel"),
    "hasSubSDA": ("SafeDesignArgument", "SafeDesignArgument"),
    "isMitigatedBy": ("ControlledRisk", "SafeDesignArgument"),
    "hasImplementationManifest": ("SafeDesignArgument", "ImplementationManifest"),
    "hasSafetyAssurance": ("AssuranceSDA", "SafetyAssurance"),
}

TRANSITIVE_ROLES = ("hasParentHazard", "hasParentSituation",
                    "isPartOfDeviceComponent", "hasPrecedingEvent")


def _main_axioms(v: Vocabulary) -> List[Axiom]:
    C, R = v.concept, v.role
    ex = lambda role: exists(R(role))
    name = lambda c: concept_name(C(c))
    return [
        gci(conj(ex("hasDeviceContext"), ex("hasDomainSpecificHazard"), ex("hasHarm"),
                 ex("hasHazardousSituation"), ex("hasInitialRiskLevel")),
            name("AnalyzedRisk"), "gci:AnalyzedRisk"),
        gci(conj(name("SafeDesignArgument"), ex("hasSafetyAssurance")),
            name("AssuranceSDA"), "gci:AssuranceSDA"),
        gci(conj(name("SDAI"), name("AssuranceSDA")), name("AssuranceSDAI"), "gci:AssuranceSDAI"),
        gci(conj(ex("hasAnalyzedRisk"), ex("hasResidualRiskLevel"), ex("isMitigatedBy")),
            name("ControlledRisk"), "gci:ControlledRisk"),
        gci(conj(ex("hasDeviceComponent"), ex("hasDeviceFunction"), ex("hasHazard")),
            name("DomainSpecificHazard"), "gci:DomainSpecificHazard"),
        gci(ex("hasEvent"), name("HazardousSituation"), "gci:HazardousSituation"),
        gci(conj(ex("hasHarm"), ex("hasRiskLevel")), name("Risk"), "gci:Risk"),
        gci(conj(ex("hasProbability"), ex("hasSeverity")), name("RiskLevel"), "gci:RiskLevel"),
        gci(name("RiskSDA"), name("SafeDesignArgument"), "gci:RiskSDA"),
        gci(conj(name("RiskSDA"), name("SDAI")), name("RiskSDAI"), "gci:RiskSDAI"),
        gci(conj(name("SafeDesignArgument"), ex("hasImplementationManifest")),
            name("SDAI"), "gci:SDAI"),
        role_inclusion((R("hasAnalyzedRisk"), R("hasHarm")), R("hasHarm"), "ria:hasHarm"),
        role_inclusion((R("hasInitialRiskLevel"),), R("hasRiskLevel"), "ria:hasInitialRiskLevel"),
        role_inclusion((R("hasResidualRiskLevel"),), R("hasRiskLevel"), "ria:hasResidualRiskLevel"),
    ] + [transitive(R(r), f"transitive:{r}") for r in TRANSITIVE_ROLES]


@lru_cache(maxsize=None)
def builtin_riskman_ontology(namespace: str = DEFAULT_NAMESPACE) -> Ontology:
    """
    The RISKMAN TBox: main GCIs and RIAs, transitivity, subclass,
    domain, range and hierarchy-derived disjointness axioms.
    """
    v = default_vocabulary(namespace)
    C, R = v.concept, v.role
    axioms = _main_axioms(v)
    hierarchy = tuple((C(sub), C(sup)) for sub, sup in SUBCLASSES)
    for sub, sup in SUBCLASSES:
        axioms.append(subclass(C(sub), C(sup), f"subclass:{sub}"))
    for role, (dom, ran) in TYPED_EDGES.items():
        axioms.append(domain_axiom(R(role), C(dom), f"domain:{role}"))
        axioms.append(range_axiom(R(role), C(ran), f"range:{role}"))
    for a, b in sorted(derive_disjointness(hierarchy, v.concept_names),
                       key=lambda p: (p[0].value, p[1].value)):
        axioms.append(disjoint(a, b, f"disjoint:{a.local_name}|{b.local_name}"))
    return Ontology(axioms=tuple(axioms), hierarchy=hierarchy, vocabulary=v)


# Axiom DSL

class _AxiomReader:

    def __init__(self, prefixes: Dict[str, str], namespace: str, source: Optional[str]):
        self.prefixes = prefixes
        self.namespace = namespace
        self.source = source

    def name(self, node, what: str, namespace: Optional[str] = None) -> Term:
        atom = expect_atom(node, what, self.source)
        return resolve_name(atom, self.prefixes, namespace or self.namespace, self.source)

    def concept(self, node) -> ConceptExpr:
        if isinstance(node, Atom) and not node.bracketed:
            if node.value == "top":
                return TOP_CONCEPT
            if node.value == "bottom":
                return BOTTOM_CONCEPT
        form = expect_list(node, self.source)
        head = form.head
        if head == "class":
            expect_arity(form, 1, 1, self.source)
            return concept_name(self.name(form.args[0], "class name"))
        if head == "ind":
            expect_arity(form, 1, 1, self.source)
            return nominal(self.name(form.args[0], "individual name", PS_NAMESPACE))
        if head == "and":
            expect_arity(form, 1, None, self.source)
            return conj(*(self.concept(a) for a in form.args))
        if head == "some":
            expect_arity(form, 2, 2, self.source)
            return exists(self.name(form.args[0], "role name"), self.concept(form.args[1]))
        raise syntax_error(form, f"unknown concept form '{head}'", self.source)

    def axiom(self, node) -> Axiom:
        form = expect_list(node, self.source)
        head = form.head
        label = f"{self.source or 'dsl'}:{form.line}"
        if head == "gci":
            expect_arity(form, 2, 2, self.source)
            return gci(self.concept(form.args[0]), self.concept(form.args[1]), label)
        if head == "subclass":
            expect_arity(form, 2, 2, self.source)
            return subclass(self.name(form.args[0], "class name"),
                            self.name(form.args[1], "class name"), label)
        if head == "role-incl":
            expect_arity(form, 2, 2, self.source)
            chain = expect_list(form.args[0], self.source)
            if chain.head != "chain":
                raise syntax_error(chain, "expected (chain ROLE+)", self.source)
            expect_arity(chain, 1, None, self.source)
            roles = tuple(self.name(r, "role name") for r in chain.args)
            return role_inclusion(roles, self.name(form.args[1], "role name"), label)
        if head in ("range", "domain"):
            expect_arity(form, 2, 2, self.source)
            role = self.name(form.args[0], "role name")
            concept = self.name(form.args[1], "class name")
            if head == "range":
                return range_axiom(role, concept, label)
            return domain_axiom(role, concept, label)
        if head == "transitive":
            expect_arity(form, 1, 1, self.source)
            return transitive(self.name(form.args[0], "role name"), label)
        if head == "disjoint":
            expect_arity(form, 2, 2, self.source)
            return disjoint(self.name(form.args[0], "class name"),
                            self.name(form.args[1], "class name"), label)
        raise syntax_error(form, f"unknown axiom form '{head}'", self.source)


def parse_axiom_dsl(text: str, prefix_map: Optional[Dict[str, str]] = None,
                    namespace: str = DEFAULT_NAMESPACE,
                    source: Optional[str] = None) -> List[Axiom]:
    """
    Parse axiom DSL text.

    Bare names resolve to the vocabulary namespace, except inside
    ``(ind NAME)`` where they resolve to the probability-severity namespace.

    Raises:
        ParseError: syntax error with line and column
        UnsupportedAxiom: axiom outside the supported fragment
    """
    prefixes = default_prefix_map(namespace, prefix_map)
    reader = _AxiomReader(prefixes, namespace, source)
    axioms = []
    for node in read_sexprs(text, source):
        axiom = reader.axiom(node)
        verdict = check_fragment(axiom)
        if not verdict:
            raise UnsupportedAxiom(f"{verdict.reason} ({axiom.label})", verdict.offending)
        axioms.append(axiom)
    logger.debug(f"Parsed {len(axioms)} axiom(s) from {source or '<text>'}")
    return axioms


def render_concept_dsl(c: ConceptExpr, prefixes: Dict[str, str], namespace: str) -> str:
    if c.kind == TOP:
        return "top"
    if c.kind == BOTTOM:
        return "bottom"
    if c.kind == NAME:
        return f"(class {render_name(c.name, prefixes, namespace)})"
    if c.kind == NOMINAL:
        return f"(ind {render_name(c.individual, prefixes, PS_NAMESPACE)})"
    if c.kind == CONJ:
        return "(and " + " ".join(render_concept_dsl(p, prefixes, namespace) for p in c.conjuncts) + ")"
    return f"(some {render_name(c.role, prefixes, namespace)} {render_concept_dsl(c.filler, prefixes, namespace)})"


def render_axiom_dsl(axiom: Axiom, prefix_map: Optional[Dict[str, str]] = None,
                     namespace: str = DEFAULT_NAMESPACE) -> str:
    """DSL text that parses back to an equal axiom"""
    prefixes = default_prefix_map(namespace, prefix_map)
    n = lambda t: render_name(t, prefixes, namespace)
    if axiom.kind == GCI:
        return (f"(gci {render_concept_dsl(axiom.lhs, prefixes, namespace)} "
                f"{render_concept_dsl(axiom.rhs, prefixes, namespace)})")
    if axiom.kind == ROLE_INCLUSION:
        return f"(role-incl (chain {' '.join(n(r) for r in axiom.chain)}) {n(axiom.super_role)})"
    if axiom.kind == RANGE:
        return f"(range {n(axiom.role)} {n(axiom.concept)})"
    if axiom.kind == TRANSITIVE:
        return f"(transitive {n(axiom.role)})"
    return f"(disjoint {n(axiom.pair[0])} {n(axiom.pair[1])})"
