"""
Unit tests for rule compilation, semi-naive saturation and consistency
"""

import pytest

from axioms import Ontology, TOP_CONCEPT, concept_name, gci, role_inclusion
from fixture_data import fixture_individuals
from reasoner import (AUX_ROLE_PREFIX, ClashRecord, Saturator, check_consistency, compile_rules,
                      is_aux_role, materialize, naive_materialize)
from riskman_errors import ResourceLimitExceeded, UnsupportedAxiom
from term_graph import IRI, Graph, Term, concept_assertion, role_assertion

EX = "http://example.org/chain#"


def T(name):
    return Term(IRI, EX + name)


class TestCompileRules:
    """Test axiom to rule compilation"""

    @pytest.mark.unit
    def test_gci_rule_text(self, riskman_rules):
        rule = next(r for r in riskman_rules if r.id == "gci:RiskLevel")
        assert str(rule) == "hasProbability(x,y1) ∧ hasSeverity(x,y2) ⇒ RiskLevel(x)"

    @pytest.mark.unit
    def test_nominal_head(self, riskman_rules):
        rule = next(r for r in riskman_rules if r.id == "ps:p3*p4=p2")
        assert str(rule) == "hasProbability1(x,p3) ∧ hasProbability2(x,p4) ⇒ hasProbability(x,p2)"

    @pytest.mark.unit
    def test_disjointness_compiles_to_clash(self, riskman_rules):
        rule = next(r for r in riskman_rules if r.id == "disjoint:DeviceComponent|Hazard")
        assert str(rule).endswith("⇒ ⊥")

    @pytest.mark.unit
    def test_long_chain_uses_auxiliary_roles(self):
        onto = Ontology().extend([role_inclusion((T("r1"), T("r2"), T("r3")), T("r"), "chain")])
        rules = compile_rules(onto)
        assert [r.id for r in rules] == ["chain#1", "chain"]
        assert rules[0].head.predicate.value.startswith(AUX_ROLE_PREFIX)

    @pytest.mark.unit
    def test_unsupported_axiom(self, C, R):
        from axioms import exists
        onto = Ontology(axioms=(gci(concept_name(C("Risk")), exists(R("hasHarm"), concept_name(C("Harm")))),))
        with pytest.raises(UnsupportedAxiom):
            compile_rules(onto)


class TestFixtureClosure:
    """Test materialization of the infusion-pump example"""

    @pytest.mark.unit
    def test_exact_delta(self, fixture_graph, fixture_closure, riskman_ontology):
        """Test that saturation adds exactly the expected assertions over the example"""
        submission, expected = fixture_graph
        scope = set(fixture_individuals())
        ps_abox = set(riskman_ontology.abox_constants)
        delta = [a for a in fixture_closure
                 if a not in submission and a not in ps_abox
                 and a.subject in scope and (a.object is None or a.object in scope)]
        assert sorted(delta, key=lambda a: a.sort_key) == expected

    @pytest.mark.unit
    def test_closure_contains_input(self, fixture_graph, fixture_closure):
        submission, _ = fixture_graph
        assert submission.assertions <= fixture_closure.assertions
        assert fixture_closure.literal_triples == submission.literal_triples

    @pytest.mark.unit
    def test_closure_is_frozen(self, fixture_closure, C, ex):
        with pytest.raises(RuntimeError):
            fixture_closure.add_concept(C("Risk"), ex("sd0"))

    @pytest.mark.unit
    def test_no_clashes(self, fixture_graph, saturate):
        submission, _ = fixture_graph
        assert saturate(submission).clashes == []

    @pytest.mark.unit
    def test_no_auxiliary_roles_in_closure(self, fixture_closure):
        assert not any(is_aux_role(r) for r in fixture_closure.roles())

    @pytest.mark.unit
    def test_stats(self, fixture_graph, riskman_ontology, saturate):
        submission, _ = fixture_graph
        result = saturate(submission)
        stats = result.stats
        assert stats.input_assertions == len(submission) + len(set(riskman_ontology.abox_constants))
        assert stats.derived_assertions == len(result.closure) - stats.input_assertions
        assert stats.iterations >= 2
        assert set(stats.to_dict()) == {"input_assertions", "derived_assertions", "iterations", "elapsed_ms"}

    @pytest.mark.unit
    def test_idempotent(self, fixture_closure, riskman_rules):
        """Test that saturating a closure adds nothing"""
        again = materialize(fixture_closure, riskman_rules)
        assert again.closure.assertions == fixture_closure.assertions
        assert again.stats.derived_assertions == 0

    @pytest.mark.unit
    def test_provenance(self, fixture_graph, riskman_ontology, riskman_rules, C, R, ex):
        """Test that each derived assertion names the rule that produced it"""
        submission, _ = fixture_graph
        graph = submission.copy()
        graph.update(riskman_ontology.abox_constants)
        provenance = {}
        result = materialize(graph, riskman_rules, provenance=provenance)
        assert provenance[concept_assertion(C("SDAI"), ex("sd1"))] == "gci:SDAI"
        assert provenance[role_assertion(R("hasHarm"), ex("cr"), ex("hr"))] == "ria:hasHarm"
        assert provenance[role_assertion(R("gt"), ex("p5"), ex("p3"))] == "transitive:gt"
        assert provenance[role_assertion(R("hasProbability"), ex("irl"), ex("p4"))] == "ps:p5*p4=p4"
        assert set(provenance) == result.closure.assertions - graph.assertions


class TestClashes:
    """Test disjointness clash reporting"""

    @pytest.mark.unit
    def test_hazard_on_component_clashes(self, fixture_graph, saturate, riskman_ontology, C, ex):
        submission, _ = fixture_graph
        graph = submission.copy()
        graph.add_concept(C("Hazard"), ex("dcm"))
        result = saturate(graph)
        expected = [ClashRecord(ex("dcm"), (C("DeviceComponent"), C("Hazard")))]
        assert result.clashes == expected
        assert result.clashes[0].provenance == "disjoint:DeviceComponent|Hazard"
        assert check_consistency(result.closure, riskman_ontology.disjoint_pairs()) == expected

    @pytest.mark.unit
    def test_clash_text(self, C, ex):
        record = ClashRecord(ex("dcm"), (C("DeviceComponent"), C("Hazard")))
        assert str(record) == "dcm: DeviceComponent ⊓ Hazard ⊑ ⊥"


class TestLimits:
    """Test resource limits"""

    @pytest.mark.unit
    def test_assertion_limit(self, fixture_graph, riskman_rules):
        submission, _ = fixture_graph
        with pytest.raises(ResourceLimitExceeded) as exc:
            materialize(submission, riskman_rules, max_assertions=40)
        assert exc.value.limit == "max-assertions"
        assert exc.value.code == "resource-limit"

    @pytest.mark.unit
    def test_time_limit(self, fixture_graph, riskman_rules):
        submission, _ = fixture_graph
        with pytest.raises(ResourceLimitExceeded) as exc:
            materialize(submission, riskman_rules, max_seconds=-1)
        assert exc.value.limit == "max-seconds"


class TestSaturator:
    """Test the resumable fact store"""

    @pytest.mark.unit
    def test_resume_after_new_facts(self, fixture_graph, riskman_ontology, riskman_rules, R, ex):
        """Test that adding facts after a run and running again reaches the full closure"""
        submission, _ = fixture_graph
        late = role_assertion(R("hasSafetyAssurance"), ex("sd5"), ex("sa"))
        early = Graph(a for a in submission if a != late)
        early.update(riskman_ontology.abox_constants)

        saturator = Saturator(riskman_rules)
        saturator.add(early.assertions)
        saturator.run()
        assert saturator.add([late]) == 1
        assert saturator.run() >= 1

        full = submission.copy()
        full.update(riskman_ontology.abox_constants)
        assert saturator.to_graph().assertions == materialize(full, riskman_rules).closure.assertions

    @pytest.mark.unit
    def test_adding_known_fact_is_noop(self, riskman_rules, R, ex):
        saturator = Saturator(riskman_rules)
        fact = role_assertion(R("hasSubSDA"), ex("sd0"), ex("sd1"))
        assert saturator.add([fact, fact]) == 1
        saturator.run()
        assert saturator.add([fact]) == 0
        assert saturator.run() == 0


class TestSmallOntologies:
    """Test rule shapes on hand-built ontologies"""

    @pytest.mark.unit
    def test_top_lhs_labels_every_node(self):
        onto = Ontology().extend([gci(TOP_CONCEPT, concept_name(T("Thing")))])
        graph = Graph([role_assertion(T("p"), T("a"), T("b"))])
        closure = materialize(graph, compile_rules(onto)).closure
        assert closure.instances(T("Thing")) == {T("a"), T("b")}

    @pytest.mark.unit
    def test_three_step_chain(self):
        onto = Ontology().extend([role_inclusion((T("r1"), T("r2"), T("r3")), T("r"))])
        graph = Graph([role_assertion(T("r1"), T("a"), T("b")),
                       role_assertion(T("r2"), T("b"), T("c")),
                       role_assertion(T("r3"), T("c"), T("d"))])
        closure = materialize(graph, compile_rules(onto)).closure
        assert closure.successors(T("r"), T("a")) == {T("d")}
        assert len(closure) == 4

    @pytest.mark.unit
    def test_naive_oracle_agrees_on_example(self, fixture_graph, riskman_ontology, riskman_rules):
        submission, _ = fixture_graph
        graph = submission.copy()
        graph.update(riskman_ontology.abox_constants)
        assert naive_materialize(graph, riskman_rules).assertions == \
            materialize(graph, riskman_rules).closure.assertions
