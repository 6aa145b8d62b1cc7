"""
Unit tests for the term and graph data model
"""

import pytest

from riskman_errors import TermError
from term_graph import (BLANK, IRI, LITERAL, RDF_LANG_STRING, XSD_STRING, Graph, Term,
                        concept_assertion, iri, literal, make_term, role_assertion)


class TestMakeTerm:
    """Test term construction and normalization"""

    @pytest.mark.unit
    def test_absolute_iri(self):
        """Test that an absolute IRI is kept unchanged"""
        t = make_term(IRI, "http://example.org/pump#cr")
        assert t == Term(IRI, "http://example.org/pump#cr")

    @pytest.mark.unit
    def test_relative_iri_without_base_is_malformed(self):
        """Test that a relative IRI needs a base"""
        with pytest.raises(TermError) as exc:
            make_term(IRI, "cr")
        assert exc.value.code == "malformed-iri"

    @pytest.mark.unit
    def test_relative_iri_resolved_against_base(self):
        """Test relative IRI resolution"""
        t = make_term(IRI, "cr", base="http://example.org/pump/doc.html")
        assert t.value == "http://example.org/pump/cr"

    @pytest.mark.unit
    def test_empty_iri_rejected(self):
        """Test that empty IRIs and blank labels are rejected"""
        with pytest.raises(TermError) as exc:
            make_term(IRI, "")
        assert exc.value.code == "empty-value"
        with pytest.raises(TermError):
            make_term(BLANK, "")

    @pytest.mark.unit
    def test_plain_literal_gets_xsd_string(self):
        """Test that plain literals normalize to xsd:string"""
        assert literal("Alarm").datatype == XSD_STRING
        assert literal("Alarm") == literal("Alarm", XSD_STRING)

    @pytest.mark.unit
    def test_language_literal(self):
        """Test that language tags are lowercased and typed rdf:langString"""
        t = literal("Alarm", language="EN-GB")
        assert t.language == "en-gb"
        assert t.datatype == RDF_LANG_STRING

    @pytest.mark.unit
    def test_empty_literal_allowed(self):
        """Test that an empty lexical form is a valid literal"""
        assert literal("").value == ""


class TestTermRendering:
    """Test display helpers"""

    @pytest.mark.unit
    def test_local_name(self):
        assert iri("http://example.org/pump#sd2").local_name == "sd2"
        assert iri("https://w3id.org/riskman/ps#p3").local_name == "p3"
        assert Term(BLANK, "b0").local_name == "_:b0"

    @pytest.mark.unit
    def test_n3(self):
        """Test N-Triples spelling of each term kind"""
        assert iri("http://a.org/x").n3() == "<http://a.org/x>"
        assert Term(BLANK, "b1").n3() == "_:b1"
        assert literal('say "hi"\n').n3() == '"say \\"hi\\"\\n"'
        assert literal("5", "http://www.w3.org/2001/XMLSchema#integer").n3() == \
            '"5"^^<http://www.w3.org/2001/XMLSchema#integer>'
        assert literal("x", language="de").n3() == '"x"@de'

    @pytest.mark.unit
    def test_literal_cannot_be_individual(self):
        with pytest.raises(ValueError):
            concept_assertion(iri("http://a.org/C"), literal("x"))
        with pytest.raises(ValueError):
            role_assertion(iri("http://a.org/r"), iri("http://a.org/a"), literal("x"))


class TestGraph:
    """Test the indexed assertion set"""

    @pytest.fixture
    def small(self, C, R, ex):
        g = Graph()
        g.add_role(R("hasSubSDA"), ex("sd0"), ex("sd1"))
        g.add_role(R("hasSubSDA"), ex("sd0"), ex("sd2"))
        g.add_concept(C("SDAI"), ex("sd1"))
        return g

    @pytest.mark.unit
    def test_add_is_idempotent(self, small, R, ex):
        """Test that adding an existing assertion reports no growth"""
        assert small.add_role(R("hasSubSDA"), ex("sd0"), ex("sd1")) is False
        assert len(small) == 3

    @pytest.mark.unit
    def test_nodes_are_individuals_of_assertions(self, small, ex):
        assert small.nodes() == {ex("sd0"), ex("sd1"), ex("sd2")}

    @pytest.mark.unit
    def test_successors_and_predecessors(self, small, R, ex):
        assert small.successors(R("hasSubSDA"), ex("sd0")) == {ex("sd1"), ex("sd2")}
        assert small.predecessors(R("hasSubSDA"), ex("sd2")) == {ex("sd0")}
        assert small.successors(R("hasSubSDA"), ex("sd2")) == set()

    @pytest.mark.unit
    def test_views_match_copies(self, small, R, ex):
        """Test that the non-copying views agree with the copying lookups"""
        assert set(small.successor_view(R("hasSubSDA"), ex("sd0"))) == \
            small.successors(R("hasSubSDA"), ex("sd0"))
        assert set(small.predecessor_view(R("isMitigatedBy"), ex("sd0"))) == set()
        assert small.has_node(ex("sd2"))
        assert not small.has_node(ex("cr"))

    @pytest.mark.unit
    def test_lookups_return_copies(self, small, C, ex):
        """Test that mutating a returned set does not touch the graph"""
        members = small.instances(C("SDAI"))
        members.add(ex("sd2"))
        assert not small.has_concept(C("SDAI"), ex("sd2"))

    @pytest.mark.unit
    def test_concepts_of(self, small, C, ex):
        assert small.concepts_of(ex("sd1")) == {C("SDAI")}
        assert small.about(ex("sd1")) == {concept_assertion(C("SDAI"), ex("sd1"))}

    @pytest.mark.unit
    def test_frozen_graph_rejects_writes(self, small, C, ex):
        """Test that a frozen graph raises on mutation"""
        small.freeze()
        with pytest.raises(RuntimeError):
            small.add_concept(C("SDAI"), ex("sd2"))
        clone = small.copy()
        assert not clone.frozen
        assert clone.add_concept(C("SDAI"), ex("sd2"))
        assert len(small) == 3

    @pytest.mark.unit
    def test_literal_triples_kept_apart(self, small):
        """Test that literal triples are not assertions"""
        triple = (iri("http://a.org/x"), iri("http://a.org/label"), literal("x"))
        assert small.add_literal_triple(triple)
        assert len(small) == 3
        assert small.get_stats()["literal_triples"] == 1

    @pytest.mark.unit
    def test_stats(self, small):
        stats = small.get_stats()
        assert stats["assertions"] == 3
        assert stats["concept_assertions"] == 1
        assert stats["role_assertions"] == 2
        assert stats["nodes"] == 3

    @pytest.mark.unit
    def test_sorted_assertions_concepts_first(self, small):
        kinds = [a.kind for a in small.sorted_assertions()]
        assert kinds == ["concept", "role", "role"]
