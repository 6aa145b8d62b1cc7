"""
Unit tests for the s-expression reader, the axiom grammar and the
built-in RISKMAN ontology
"""

import pytest

from axioms import (TOP_CONCEPT, builtin_riskman_ontology, check_fragment, concept_name, conj,
                    derive_disjointness, disjoint, exists, gci, nominal, parse_axiom_dsl,
                    range_axiom, render_axiom_dsl, role_inclusion, subclass, ancestors)
from riskman_errors import CyclicHierarchy, ParseError, UnknownPrefix, UnsupportedAxiom
from sexpr import Atom, SList, read_sexprs, render_name, resolve_name
from term_graph import IRI, Term
from vocabulary import DEFAULT_NAMESPACE, PS_NAMESPACE, default_prefix_map


class TestSexprReader:
    """Test the shared s-expression reader"""

    @pytest.mark.unit
    def test_nested_forms_and_comments(self):
        forms = read_sexprs("; leading comment\n(gci (class A) (some r <http://x.org/b>)) ; tail\n(x)")
        assert len(forms) == 2
        first = forms[0]
        assert isinstance(first, SList)
        assert first.head == "gci"
        assert first.line == 2
        inner = first.args[1]
        assert inner.items[2] == Atom("http://x.org/b", 2, 24, True)

    @pytest.mark.unit
    def test_unbalanced_close(self):
        with pytest.raises(ParseError) as exc:
            read_sexprs("(a b))")
        assert exc.value.column == 6

    @pytest.mark.unit
    def test_unclosed_open_reports_opening_position(self):
        """Test that an unclosed form points at its '('"""
        with pytest.raises(ParseError) as exc:
            read_sexprs("(a\n  (b c)\n", source="x.axioms")
        assert (exc.value.line, exc.value.column) == (1, 1)
        assert "x.axioms:1:1" in str(exc.value)

    @pytest.mark.unit
    def test_resolve_name(self):
        """Test bare, prefixed and bracketed names"""
        prefixes = default_prefix_map()
        atom = lambda text: Atom(text, 1, 1)
        assert resolve_name(atom("SDAI"), prefixes, DEFAULT_NAMESPACE) == Term(IRI, DEFAULT_NAMESPACE + "SDAI")
        assert resolve_name(atom("ps:p3"), prefixes, DEFAULT_NAMESPACE) == Term(IRI, PS_NAMESPACE + "p3")
        assert resolve_name(Atom("http://x.org/a", 1, 1, True), prefixes, DEFAULT_NAMESPACE) == \
            Term(IRI, "http://x.org/a")
        with pytest.raises(UnknownPrefix):
            resolve_name(atom("zz:a"), prefixes, DEFAULT_NAMESPACE)

    @pytest.mark.unit
    def test_render_name_is_shortest(self):
        prefixes = default_prefix_map()
        assert render_name(Term(IRI, DEFAULT_NAMESPACE + "SDAI"), prefixes, DEFAULT_NAMESPACE) == "SDAI"
        assert render_name(Term(IRI, PS_NAMESPACE + "p3"), prefixes, DEFAULT_NAMESPACE) == "ps:p3"
        assert render_name(Term(IRI, "http://x.org/a"), prefixes, DEFAULT_NAMESPACE) == "<http://x.org/a>"


class TestFragment:
    """Test the supported-fragment check"""

    @pytest.mark.unit
    def test_builtin_axioms_are_in_fragment(self):
        for axiom in builtin_riskman_ontology().axioms:
            assert check_fragment(axiom), str(axiom)

    @pytest.mark.unit
    def test_existential_rhs_needs_nominal(self, C, R):
        verdict = check_fragment(gci(concept_name(C("Risk")), exists(R("hasHarm"), concept_name(C("Harm")))))
        assert not verdict
        assert "fresh individuals" in verdict.reason
        assert verdict.offending == "∃hasHarm.Harm"

    @pytest.mark.unit
    def test_nested_existential_on_lhs(self, C, R):
        lhs = exists(R("hasSubSDA"), exists(R("hasSubSDA"), TOP_CONCEPT))
        verdict = check_fragment(gci(lhs, concept_name(C("SafeDesignArgument"))))
        assert verdict.reason == "nested existential restriction"

    @pytest.mark.unit
    def test_conjunction_on_rhs(self, C):
        verdict = check_fragment(gci(concept_name(C("RiskSDAI")),
                                     conj(concept_name(C("RiskSDA")), concept_name(C("SDAI")))))
        assert not verdict
        assert "split it" in verdict.reason

    @pytest.mark.unit
    def test_nominal_rhs_filler_accepted(self, R):
        from ps_ontology import probability
        assert check_fragment(gci(exists(R("hasProbability1"), nominal(probability(1))),
                                  exists(R("hasProbability"), nominal(probability(1)))))


class TestRendering:
    """Test DL notation"""

    @pytest.mark.unit
    def test_gci_notation(self, C):
        axiom = gci(conj(concept_name(C("RiskSDA")), concept_name(C("SDAI"))), concept_name(C("RiskSDAI")))
        assert str(axiom) == "RiskSDA ⊓ SDAI ⊑ RiskSDAI"

    @pytest.mark.unit
    def test_other_axiom_kinds(self, C, R):
        assert str(role_inclusion((R("hasAnalyzedRisk"), R("hasHarm")), R("hasHarm"))) == \
            "hasAnalyzedRisk ∘ hasHarm ⊑ hasHarm"
        assert str(range_axiom(R("hasHarm"), C("Harm"))) == "ran(hasHarm) ⊑ Harm"
        assert str(disjoint(C("Risk"), C("Harm"))) == "Harm ⊓ Risk ⊑ ⊥"

    @pytest.mark.unit
    def test_existential_with_conjunctive_filler(self, C, R):
        c = exists(R("hasSubSDA"), conj(concept_name(C("SDAI")), concept_name(C("RiskSDA"))))
        assert str(c) == "∃hasSubSDA.(SDAI ⊓ RiskSDA)"


class TestHierarchy:
    """Test ancestors and derived disjointness"""

    @pytest.mark.unit
    def test_cycle_detected(self, C):
        with pytest.raises(CyclicHierarchy) as exc:
            ancestors([(C("Risk"), C("Harm")), (C("Harm"), C("Risk"))])
        assert exc.value.code == "cyclic-hierarchy"
        assert exc.value.cycle[0] == exc.value.cycle[-1]

    @pytest.mark.unit
    def test_builtin_disjointness(self, C):
        """Test which pairs the built-in hierarchy makes disjoint"""
        pairs = builtin_riskman_ontology().disjoint_pairs()
        key = lambda a, b: tuple(sorted((C(a), C(b)), key=lambda t: t.value))
        assert key("AnalyzedRisk", "ControlledRisk") in pairs
        assert key("RiskSDA", "AssuranceSDA") in pairs
        assert key("DeviceComponent", "Hazard") in pairs
        assert key("Risk", "AnalyzedRisk") not in pairs
        assert key("SDAI", "RiskSDA") not in pairs
        assert key("AssuranceSDA", "SDAI") not in pairs
        # 24 names give 276 pairs, 13 of which share a subclass
        assert len(pairs) == 263

    @pytest.mark.unit
    def test_shared_subclass_blocks_disjointness(self, C):
        hierarchy = [(C("RiskSDAI"), C("RiskSDA")), (C("RiskSDAI"), C("SDAI"))]
        pairs = derive_disjointness(hierarchy, [C("RiskSDA"), C("SDAI"), C("RiskSDAI")])
        assert pairs == set()


class TestOntology:
    """Test ontology composition"""

    @pytest.mark.unit
    def test_extend_grows_vocabulary_and_hierarchy(self, C):
        critical = Term(IRI, DEFAULT_NAMESPACE + "CriticalRiskLevel")
        onto = builtin_riskman_ontology().extend([subclass(critical, C("RiskLevel"))])
        assert onto.vocabulary.is_concept(critical)
        assert (critical, C("RiskLevel")) in onto.hierarchy
        assert not builtin_riskman_ontology().vocabulary.is_concept(critical)

    @pytest.mark.unit
    def test_constants_include_nominals(self, riskman_ontology):
        from ps_ontology import probability, severity
        constants = riskman_ontology.constants()
        assert probability(1) in constants
        assert severity(5) in constants


class TestAxiomDsl:
    """Test the axiom DSL"""

    @pytest.mark.unit
    def test_extension_text(self, C, R):
        from fixture_data import EXTENSION_AXIOMS_DSL
        from ps_ontology import probability, severity
        axioms = parse_axiom_dsl(EXTENSION_AXIOMS_DSL, source="critical.axioms")
        critical = Term(IRI, DEFAULT_NAMESPACE + "CriticalRiskLevel")
        assert axioms == [gci(conj(exists(R("hasProbability"), nominal(probability(5))),
                                   exists(R("hasSeverity"), nominal(severity(3)))),
                              concept_name(critical))]
        assert axioms[0].label == "critical.axioms:2"

    @pytest.mark.unit
    def test_every_form(self, C, R):
        text = """
            (subclass RiskSDAI SDAI)
            (role-incl (chain hasAnalyzedRisk hasHarm) hasHarm)
            (range hasHarm Harm)
            (domain hasHarm Risk)
            (transitive gt)
            (disjoint Harm Risk)
            (gci top (class Event))
        """
        axioms = parse_axiom_dsl(text)
        assert [a.kind for a in axioms] == ["gci", "role_inclusion", "range", "gci",
                                            "transitive", "disjoint", "gci"]
        assert axioms[3] == gci(exists(R("hasHarm")), concept_name(C("Risk")))

    @pytest.mark.unit
    def test_unsupported_axiom_is_rejected(self):
        with pytest.raises(UnsupportedAxiom) as exc:
            parse_axiom_dsl("(gci (class Risk) (some hasHarm (class Harm)))")
        assert exc.value.code == "unsupported"
        assert exc.value.offending == "∃hasHarm.Harm"

    @pytest.mark.unit
    @pytest.mark.parametrize("text", [
        "(gci (class A))",
        "(frobnicate A B)",
        "(role-incl (hasHarm) hasHarm)",
        "(gci (klass A) (class B))",
        "gci",
    ])
    def test_syntax_errors(self, text):
        with pytest.raises(ParseError):
            parse_axiom_dsl(text)

    @pytest.mark.unit
    def test_builtin_ontology_renders_to_parseable_dsl(self):
        """Test that the DSL rendering of every built-in axiom parses back to it"""
        axioms = builtin_riskman_ontology().axioms
        text = "\n".join(render_axiom_dsl(a) for a in axioms)
        assert tuple(parse_axiom_dsl(text)) == axioms
