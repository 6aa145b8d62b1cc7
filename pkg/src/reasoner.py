#!/usr/bin/env python3
"""
Reasoner - rule compilation and ABox materialization

Axioms of the supported fragment compile to Horn rules over concept and
role facts. Saturation is semi-naive: every iteration joins at least one
fact derived in the previous iteration against the full fact store, and
all derivations of an iteration are merged at once. A naive engine that
re-applies every rule to the whole graph is kept as an independent oracle.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Set, Tuple

from axioms import (BOTTOM, DISJOINT, GCI, NAME, NOMINAL, RANGE, ROLE_INCLUSION,
                    TOP, TRANSITIVE, Axiom, Ontology, check_fragment)
from riskman_errors import ResourceLimitExceeded, UnsupportedAxiom
from term_graph import (CONCEPT, IRI, Assertion, Graph, Term, concept_assertion,
                        role_assertion)

logger = logging.getLogger(__name__)

DEFAULT_MAX_ASSERTIONS = 10_000_000
DEFAULT_MAX_SECONDS = 300

AUX_ROLE_PREFIX = "urn:riskman:aux:"

# Condition kinds
C_CONCEPT = "concept"
C_ROLE = "role"
C_ROLE_CONST = "role-const"
C_NODE = "node"

# Head kinds
H_CONCEPT = "add-concept"
H_ROLE = "add-role"
H_ROLE_CONST = "add-role-const"
H_CLASH = "clash"


class Condition(NamedTuple):
    """
    Body atom. Variables are small integers; x is 0.

    concept: predicate(args[0]); role: predicate(args[0], args[1]);
    role-const: predicate(args[0], constant); node: args[0] is any node.
    """
    kind: str
    predicate: Optional[Term]
    args: Tuple[int, ...]
    constant: Optional[Term] = None


class Head(NamedTuple):
    kind: str
    predicate: Optional[Term]
    args: Tuple[int, ...]
    constant: Optional[Term] = None
    concepts: Tuple[Term, ...] = ()


class Rule(NamedTuple):
    id: str
    body: Tuple[Condition, ...]
    head: Head

    def __str__(self) -> str:
        var = lambda i: "x" if i == 0 else f"y{i}"

        def atom(kind, pred, args, const):
            if kind == C_NODE:
                return f"⊤({var(args[0])})"
            if kind in (C_CONCEPT, H_CONCEPT):
                return f"{pred.local_name}({var(args[0])})"
            if kind in (C_ROLE, H_ROLE):
                return f"{pred.local_name}({var(args[0])},{var(args[1])})"
            return f"{pred.local_name}({var(args[0])},{const.local_name})"

        body = " ∧ ".join(atom(c.kind, c.predicate, c.args, c.constant) for c in self.body)
        if self.head.kind == H_CLASH:
            head = "⊥"
        else:
            head = atom(self.head.kind, self.head.predicate, self.head.args, self.head.constant)
        return f"{body} ⇒ {head}"


@dataclass(frozen=True)
class ClashRecord:
    individual: Term
    concepts: Tuple[Term, ...]
    provenance: str = field(default="", compare=False)

    def __str__(self) -> str:
        names = " ⊓ ".join(c.local_name for c in self.concepts)
        return f"{self.individual.local_name}: {names} ⊑ ⊥"


@dataclass
class SaturationStats:
    input_assertions: int = 0
    derived_assertions: int = 0
    iterations: int = 0
    elapsed_ms: int = field(default=0, compare=False)

    def to_dict(self) -> Dict[str, int]:
        return {
            "input_assertions": self.input_assertions,
            "derived_assertions": self.derived_assertions,
            "iterations": self.iterations,
            "elapsed_ms": self.elapsed_ms,
        }


class MaterializationResult(NamedTuple):
    closure: Graph
    stats: SaturationStats
    clashes: List[ClashRecord]


def is_aux_role(role: Term) -> bool:
    return role.value.startswith(AUX_ROLE_PREFIX)


# Rule compilation

class _RuleCompiler:

    def __init__(self):
        self.rules: List[Rule] = []
        self.aux_count = 0

    def _aux_role(self) -> Term:
        self.aux_count += 1
        return Term(IRI, f"{AUX_ROLE_PREFIX}{self.aux_count}")

    def add(self, index: int, axiom: Axiom):
        verdict = check_fragment(axiom)
        if not verdict:
            raise UnsupportedAxiom(verdict.reason, verdict.offending)
        rule_id = axiom.label or f"axiom{index}"
        if axiom.kind == GCI:
            self.rules.append(self._gci(rule_id, axiom))
        elif axiom.kind == RANGE:
            self.rules.append(Rule(rule_id, (Condition(C_ROLE, axiom.role, (0, 1)),),
                                   Head(H_CONCEPT, axiom.concept, (1,))))
        elif axiom.kind == TRANSITIVE:
            self._chain(rule_id, (axiom.role, axiom.role), axiom.role)
        elif axiom.kind == ROLE_INCLUSION:
            self._chain(rule_id, axiom.chain, axiom.super_role)
        elif axiom.kind == DISJOINT:
            a, b = axiom.pair
            self.rules.append(Rule(rule_id,
                                   (Condition(C_CONCEPT, a, (0,)), Condition(C_CONCEPT, b, (0,))),
                                   Head(H_CLASH, None, (0,), concepts=(a, b))))
        else:
            raise UnsupportedAxiom("unknown axiom kind", axiom.kind)

    def _gci(self, rule_id: str, axiom: Axiom) -> Rule:
        body: List[Condition] = []
        next_var = 1
        for part in axiom.lhs.parts:
            if part.kind == TOP:
                continue
            if part.kind == NAME:
                body.append(Condition(C_CONCEPT, part.name, (0,)))
                continue
            filler = part.filler
            if filler.kind == NOMINAL:
                body.append(Condition(C_ROLE_CONST, part.role, (0,), filler.individual))
                continue
            body.append(Condition(C_ROLE, part.role, (0, next_var)))
            if filler.kind == NAME:
                body.append(Condition(C_CONCEPT, filler.name, (next_var,)))
            next_var += 1
        if not body:
            body.append(Condition(C_NODE, None, (0,)))

        rhs = axiom.rhs
        if rhs.kind == NAME:
            head = Head(H_CONCEPT, rhs.name, (0,))
        elif rhs.kind == BOTTOM:
            names = tuple(c.name for c in axiom.lhs.parts if c.kind == NAME)
            head = Head(H_CLASH, None, (0,), concepts=names)
        else:
            head = Head(H_ROLE_CONST, rhs.role, (0,), rhs.filler.individual)
        return Rule(rule_id, tuple(body), head)

    def _chain(self, rule_id: str, chain: Tuple[Term, ...], super_role: Term):
        if len(chain) == 1:
            self.rules.append(Rule(rule_id, (Condition(C_ROLE, chain[0], (0, 1)),),
                                   Head(H_ROLE, super_role, (0, 1))))
            return
        left = chain[0]
        for step, right in enumerate(chain[1:], start=1):
            last = step == len(chain) - 1
            target = super_role if last else self._aux_role()
            self.rules.append(Rule(
                rule_id if last else f"{rule_id}#{step}",
                (Condition(C_ROLE, left, (0, 1)), Condition(C_ROLE, right, (1, 2))),
                Head(H_ROLE, target, (0, 2))))
            left = target


def compile_rules(ontology: Ontology) -> List[Rule]:
    """
    Compile every axiom of the ontology into rules.

    Role chains longer than two are split into binary steps through
    auxiliary roles that never appear in a closure.

    Raises:
        UnsupportedAxiom: for an axiom outside the supported fragment
    """
    compiler = _RuleCompiler()
    for index, axiom in enumerate(ontology.axioms):
        compiler.add(index, axiom)
    logger.debug(f"Compiled {len(ontology.axioms)} axioms into {len(compiler.rules)} rules")
    return compiler.rules


# Semi-naive engine

_EMPTY: frozenset = frozenset()


class _CompiledRule:
    """Rule over interned ids with one join plan per seed atom"""

    def __init__(self, rule: Rule, intern: Callable[[Term], int]):
        self.rule = rule
        self.atoms = []
        for c in rule.body:
            pred = intern(c.predicate) if c.predicate is not None else -1
            const = intern(c.constant) if c.constant is not None else -1
            self.atoms.append((c.kind, pred, c.args, const))
        self.nvars = 1 + max((max(c.args) for c in rule.body), default=0)
        h = rule.head
        self.head = (h.kind,
                     intern(h.predicate) if h.predicate is not None else -1,
                     h.args,
                     intern(h.constant) if h.constant is not None else -1)
        self.plans = [self._plan(i) for i in range(len(self.atoms))]

    def _plan(self, seed: int):
        bound = set(self.atoms[seed][2])
        remaining = [a for i, a in enumerate(self.atoms) if i != seed]
        plan = []
        while remaining:
            def cost(atom):
                kind, _, args, _ = atom
                free = [v for v in args if v not in bound]
                if not free:
                    return 0
                return 1 if len(free) < len(args) else 2
            best = min(remaining, key=cost)
            remaining.remove(best)
            plan.append(best)
            bound.update(best[2])
        return plan


class Saturator:
    """
    Fact store plus semi-naive fixpoint loop.

    Facts can be added after a run and run() called again; saturation
    resumes from the new facts only.
    """

    def __init__(self, rules: Iterable[Rule], max_assertions: int = DEFAULT_MAX_ASSERTIONS,
                 max_seconds: float = DEFAULT_MAX_SECONDS, track_provenance: bool = False):
        self.max_assertions = max_assertions
        self.max_seconds = max_seconds
        self.track_provenance = track_provenance

        # Interning
        self._ids: Dict[Term, int] = {}
        self._terms: List[Term] = []

        # Fact store
        self.members: Dict[int, Set[int]] = {}
        self.succ: Dict[int, Dict[int, Set[int]]] = {}
        self.pred: Dict[int, Dict[int, Set[int]]] = {}
        self.nodes: Set[int] = set()
        self.fact_count = 0

        # Pending delta
        self._delta_concepts: Dict[int, Set[int]] = {}
        self._delta_roles: Dict[int, Set[Tuple[int, int]]] = {}
        self._delta_nodes: Set[int] = set()

        self.rules = [_CompiledRule(r, self._intern) for r in rules]
        self._by_predicate: Dict[int, List[Tuple[_CompiledRule, int]]] = {}
        self._node_rules: List[Tuple[_CompiledRule, int]] = []
        for cr in self.rules:
            for i, (kind, pred, _, _) in enumerate(cr.atoms):
                if kind == C_NODE:
                    self._node_rules.append((cr, i))
                else:
                    self._by_predicate.setdefault(pred, []).append((cr, i))

        self.clashes: Dict[Tuple[int, Tuple[Term, ...]], ClashRecord] = {}
        self.provenance: Dict[Tuple, str] = {}
        self.input_facts = 0
        self.iterations = 0
        self.elapsed = 0.0
        self._deadline = None

    def _intern(self, term: Term) -> int:
        ident = self._ids.get(term)
        if ident is None:
            ident = len(self._terms)
            self._ids[term] = ident
            self._terms.append(term)
        return ident

    # Store primitives

    def _has_concept(self, c: int, n: int) -> bool:
        return n in self.members.get(c, _EMPTY)

    def _has_role(self, r: int, s: int, o: int) -> bool:
        return o in self.succ.get(r, {}).get(s, _EMPTY)

    def _store_concept(self, c: int, n: int) -> bool:
        members = self.members.setdefault(c, set())
        if n in members:
            return False
        members.add(n)
        if n not in self.nodes:
            self.nodes.add(n)
            self._delta_nodes.add(n)
        self._delta_concepts.setdefault(c, set()).add(n)
        self.fact_count += 1
        return True

    def _store_role(self, r: int, s: int, o: int) -> bool:
        objects = self.succ.setdefault(r, {}).setdefault(s, set())
        if o in objects:
            return False
        objects.add(o)
        self.pred.setdefault(r, {}).setdefault(o, set()).add(s)
        for n in (s, o):
            if n not in self.nodes:
                self.nodes.add(n)
                self._delta_nodes.add(n)
        self._delta_roles.setdefault(r, set()).add((s, o))
        self.fact_count += 1
        return True

    def add(self, assertions: Iterable[Assertion]) -> int:
        """Add input facts; returns how many were new"""
        added = 0
        for a in assertions:
            s = self._intern(a.subject)
            if a.kind == CONCEPT:
                added += self._store_concept(self._intern(a.concept), s)
            else:
                added += self._store_role(self._intern(a.role), s, self._intern(a.object))
        self.input_facts += added
        return added

    # Joins

    def _solve(self, plan, k: int, binding: List[Optional[int]], fire):
        if k == len(plan):
            fire(binding)
            return
        kind, p, args, const = plan[k]
        if kind == C_CONCEPT:
            v = args[0]
            members = self.members.get(p, _EMPTY)
            if binding[v] is not None:
                if binding[v] in members:
                    self._solve(plan, k + 1, binding, fire)
            else:
                for n in members:
                    binding[v] = n
                    self._solve(plan, k + 1, binding, fire)
                binding[v] = None
        elif kind == C_ROLE:
            a, b = args
            sa, sb = binding[a], binding[b]
            if sa is not None and sb is not None:
                if self._has_role(p, sa, sb):
                    self._solve(plan, k + 1, binding, fire)
            elif sa is not None:
                for o in self.succ.get(p, {}).get(sa, _EMPTY):
                    binding[b] = o
                    self._solve(plan, k + 1, binding, fire)
                binding[b] = None
            elif sb is not None:
                for s in self.pred.get(p, {}).get(sb, _EMPTY):
                    binding[a] = s
                    self._solve(plan, k + 1, binding, fire)
                binding[a] = None
            else:
                for s, objects in self.succ.get(p, {}).items():
                    binding[a] = s
                    for o in objects:
                        if a == b and o != s:
                            continue
                        binding[b] = o
                        self._solve(plan, k + 1, binding, fire)
                    binding[b] = None
                binding[a] = None
        elif kind == C_ROLE_CONST:
            v = args[0]
            if binding[v] is not None:
                if self._has_role(p, binding[v], const):
                    self._solve(plan, k + 1, binding, fire)
            else:
                for s in self.pred.get(p, {}).get(const, _EMPTY):
                    binding[v] = s
                    self._solve(plan, k + 1, binding, fire)
                binding[v] = None
        else:
            v = args[0]
            if binding[v] is not None:
                self._solve(plan, k + 1, binding, fire)
            else:
                for n in self.nodes:
                    binding[v] = n
                    self._solve(plan, k + 1, binding, fire)
                binding[v] = None

    def _seeds(self, atom, delta_concepts, delta_roles, delta_nodes):
        kind, p, args, const = atom
        if kind == C_CONCEPT:
            for n in delta_concepts.get(p, _EMPTY):
                yield ((args[0], n),)
        elif kind == C_ROLE:
            a, b = args
            for s, o in delta_roles.get(p, _EMPTY):
                if a == b and s != o:
                    continue
                yield ((a, s), (b, o))
        elif kind == C_ROLE_CONST:
            for s, o in delta_roles.get(p, _EMPTY):
                if o == const:
                    yield ((args[0], s),)
        else:
            for n in delta_nodes:
                yield ((args[0], n),)

    # Fixpoint

    def _check_limits(self, pending: int = 0):
        if self.fact_count + pending > self.max_assertions:
            raise ResourceLimitExceeded("max-assertions", self.max_assertions, self.fact_count + pending)
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise ResourceLimitExceeded("max-seconds", self.max_seconds,
                                        f"{time.monotonic() - self._deadline + self.max_seconds:.1f}s")

    def run(self) -> int:
        """Saturate; returns the number of iterations performed"""
        started = time.monotonic()
        self._deadline = started + self.max_seconds
        rounds = 0
        try:
            while self._delta_concepts or self._delta_roles or self._delta_nodes:
                rounds += 1
                delta_concepts, self._delta_concepts = self._delta_concepts, {}
                delta_roles, self._delta_roles = self._delta_roles, {}
                delta_nodes, self._delta_nodes = self._delta_nodes, set()
                new_concepts, new_roles, pending = self._iterate(delta_concepts, delta_roles, delta_nodes)
                self._check_limits(pending)
                for (c, n), rule_id in new_concepts.items():
                    self._store_concept(c, n)
                for (r, s, o), rule_id in new_roles.items():
                    self._store_role(r, s, o)
                if self.track_provenance:
                    self.provenance.update(((C_CONCEPT,) + k, v) for k, v in new_concepts.items())
                    self.provenance.update(((C_ROLE,) + k, v) for k, v in new_roles.items())
                logger.debug(f"Iteration {self.iterations + rounds}: "
                             f"{len(new_concepts)} concept and {len(new_roles)} role facts derived")
        finally:
            self.iterations += rounds
            self.elapsed += time.monotonic() - started
        return rounds

    def _iterate(self, delta_concepts, delta_roles, delta_nodes):
        new_concepts: Dict[Tuple[int, int], str] = {}
        new_roles: Dict[Tuple[int, int, int], str] = {}

        triggered: List[Tuple[_CompiledRule, int]] = []
        for p in list(delta_concepts) + list(delta_roles):
            triggered.extend(self._by_predicate.get(p, ()))
        if delta_nodes:
            triggered.extend(self._node_rules)

        for cr, seed in triggered:
            self._check_limits(len(new_concepts) + len(new_roles))
            hkind, hpred, hargs, hconst = cr.head
            rule_id = cr.rule.id

            if hkind == H_CONCEPT:
                v = hargs[0]

                def fire(b, hpred=hpred, v=v, rule_id=rule_id):
                    n = b[v]
                    if not self._has_concept(hpred, n) and (hpred, n) not in new_concepts:
                        new_concepts[(hpred, n)] = rule_id
            elif hkind == H_ROLE:
                va, vb = hargs

                def fire(b, hpred=hpred, va=va, vb=vb, rule_id=rule_id):
                    s, o = b[va], b[vb]
                    if not self._has_role(hpred, s, o) and (hpred, s, o) not in new_roles:
                        new_roles[(hpred, s, o)] = rule_id
            elif hkind == H_ROLE_CONST:
                v = hargs[0]

                def fire(b, hpred=hpred, v=v, hconst=hconst, rule_id=rule_id):
                    s = b[v]
                    if not self._has_role(hpred, s, hconst) and (hpred, s, hconst) not in new_roles:
                        new_roles[(hpred, s, hconst)] = rule_id
            else:
                v = hargs[0]
                concepts = cr.rule.head.concepts

                def fire(b, v=v, concepts=concepts, rule_id=rule_id):
                    key = (b[v], concepts)
                    if key not in self.clashes:
                        self.clashes[key] = ClashRecord(self._terms[b[v]], concepts, rule_id)

            plan = cr.plans[seed]
            for seed_binding in self._seeds(cr.atoms[seed], delta_concepts, delta_roles, delta_nodes):
                binding: List[Optional[int]] = [None] * cr.nvars
                for var, value in seed_binding:
                    binding[var] = value
                self._solve(plan, 0, binding, fire)
        return new_concepts, new_roles, len(new_concepts) + len(new_roles)

    # Export

    def assertions(self) -> Iterable[Assertion]:
        terms = self._terms
        for c, members in self.members.items():
            concept = terms[c]
            for n in members:
                yield concept_assertion(concept, terms[n])
        for r, index in self.succ.items():
            role = terms[r]
            if is_aux_role(role):
                continue
            for s, objects in index.items():
                for o in objects:
                    yield role_assertion(role, terms[s], terms[o])

    def to_graph(self, literal_triples=()) -> Graph:
        graph = Graph(self.assertions())
        graph.literal_triples = set(literal_triples)
        return graph

    def provenance_assertions(self) -> Dict[Assertion, str]:
        """Derived assertion -> id of the rule that first derived it"""
        terms = self._terms
        result: Dict[Assertion, str] = {}
        for key, rule_id in self.provenance.items():
            if key[0] == C_CONCEPT:
                result[concept_assertion(terms[key[1]], terms[key[2]])] = rule_id
            elif not is_aux_role(terms[key[1]]):
                result[role_assertion(terms[key[1]], terms[key[2]], terms[key[3]])] = rule_id
        return result

    def clash_records(self) -> List[ClashRecord]:
        return sorted(self.clashes.values(),
                      key=lambda c: (c.individual.sort_key, tuple(t.value for t in c.concepts)))

    def result(self, literal_triples=()) -> MaterializationResult:
        closure = self.to_graph(literal_triples)
        stats = SaturationStats(
            input_assertions=self.input_facts,
            derived_assertions=len(closure) - self.input_facts,
            iterations=self.iterations,
            elapsed_ms=int(round(self.elapsed * 1000)),
        )
        return MaterializationResult(closure, stats, self.clash_records())


def materialize(graph: Graph, rules: Iterable[Rule],
                max_assertions: int = DEFAULT_MAX_ASSERTIONS,
                max_seconds: float = DEFAULT_MAX_SECONDS,
                provenance: Optional[Dict[Assertion, str]] = None) -> MaterializationResult:
    """
    Saturate graph under rules.

    Args:
        graph: input ABox (not modified)
        rules: compiled rules
        max_assertions: abort when the fact store would exceed this size
        max_seconds: abort when saturation runs longer than this
        provenance: if given, filled with derived assertion -> rule id

    Returns:
        (closure, stats, clashes); the closure is frozen

    Raises:
        ResourceLimitExceeded: if a limit is hit
    """
    saturator = Saturator(rules, max_assertions, max_seconds, track_provenance=provenance is not None)
    saturator.add(graph.assertions)
    saturator.run()
    result = saturator.result(graph.literal_triples)
    result.closure.freeze()
    if provenance is not None:
        provenance.update(saturator.provenance_assertions())
    logger.info(f"Saturation: {result.stats.input_assertions} input, "
                f"{result.stats.derived_assertions} derived in {result.stats.iterations} iterations")
    return result


# Naive oracle

def _naive_matches(graph: Graph, body: Tuple[Condition, ...], k: int, binding: Dict[int, Term]):
    if k == len(body):
        yield dict(binding)
        return
    c = body[k]
    if c.kind == C_NODE:
        candidates = [{c.args[0]: n} for n in graph.nodes()]
    elif c.kind == C_CONCEPT:
        candidates = [{c.args[0]: n} for n in graph.instances(c.predicate)]
    elif c.kind == C_ROLE_CONST:
        candidates = [{c.args[0]: s} for s, o in graph.role_pairs(c.predicate) if o == c.constant]
    else:
        a, b = c.args
        candidates = [{a: s, b: o} for s, o in graph.role_pairs(c.predicate) if a != b or s == o]
    for candidate in candidates:
        if all(binding.get(v, t) == t for v, t in candidate.items()):
            extended = dict(binding)
            extended.update(candidate)
            yield from _naive_matches(graph, body, k + 1, extended)


def naive_materialize(graph: Graph, rules: Iterable[Rule],
                      max_assertions: int = DEFAULT_MAX_ASSERTIONS,
                      max_seconds: float = DEFAULT_MAX_SECONDS) -> Graph:
    """Fixpoint by re-applying every rule to the whole graph until nothing changes"""
    rules = list(rules)
    closure = graph.copy()
    deadline = time.monotonic() + max_seconds
    changed = True
    while changed:
        changed = False
        derived: List[Assertion] = []
        for rule in rules:
            h = rule.head
            if h.kind == H_CLASH:
                continue
            for b in _naive_matches(closure, rule.body, 0, {}):
                if h.kind == H_CONCEPT:
                    derived.append(concept_assertion(h.predicate, b[h.args[0]]))
                elif h.kind == H_ROLE:
                    derived.append(role_assertion(h.predicate, b[h.args[0]], b[h.args[1]]))
                else:
                    derived.append(role_assertion(h.predicate, b[h.args[0]], h.constant))
            if time.monotonic() > deadline:
                raise ResourceLimitExceeded("max-seconds", max_seconds, "naive saturation")
        for a in derived:
            if closure.add_assertion(a):
                changed = True
        if len(closure) > max_assertions:
            raise ResourceLimitExceeded("max-assertions", max_assertions, len(closure))
    result = Graph(a for a in closure.assertions if a.kind == CONCEPT or not is_aux_role(a.role))
    result.literal_triples = set(graph.literal_triples)
    return result.freeze()


# Consistency

def check_consistency(closure: Graph, disjoint_pairs: Iterable[Tuple[Term, Term]]) -> List[ClashRecord]:
    """One record per individual and disjoint pair whose two memberships both hold"""
    records = []
    for a, b in disjoint_pairs:
        pair = tuple(sorted((a, b), key=lambda t: t.value))
        for node in closure.instances(a) & closure.instances(b):
            records.append(ClashRecord(node, pair, "disjoint"))
    return sorted(records, key=lambda c: (c.individual.sort_key, tuple(t.value for t in c.concepts)))
