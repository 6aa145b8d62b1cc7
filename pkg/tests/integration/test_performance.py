"""
Performance tests on synthetic corpora shaped like the infusion-pump example
Run with: pytest -m slow
"""

import time

import pytest

from fixture_data import synthetic_corpus
from reasoner import materialize
from shapes import Schema, builtin_constraints, validate


def saturate_corpus(n, riskman_ontology, riskman_rules):
    graph = synthetic_corpus(n)
    graph.update(riskman_ontology.abox_constants)
    return materialize(graph, riskman_rules)


class TestSyntheticCorpus:
    """Test that the synthetic corpus scales linearly in closure size"""

    @pytest.mark.integration
    def test_closure_grows_per_risk(self, riskman_ontology, riskman_rules):
        sizes = [len(saturate_corpus(n, riskman_ontology, riskman_rules).closure) for n in (0, 4, 8)]
        # the PS ABox and its gt closure are shared by every risk
        assert sizes[2] - sizes[1] == sizes[1] - sizes[0] > 0
        assert len(synthetic_corpus(3)) == 3 * 30

    @pytest.mark.integration
    def test_each_risk_has_its_own_individuals(self):
        """Test that node names carry the risk index and the corpus base"""
        graph = synthetic_corpus(2, base="http://example.org/load#")
        subjects = {a.subject.value for a in graph.assertions}
        assert {"http://example.org/load#r0_cr", "http://example.org/load#r1_cr"} <= subjects
        assert not any("r0_" in s and "r1_" in s for s in subjects)

    @pytest.mark.integration
    def test_validation_finds_every_risk(self, riskman_ontology, riskman_rules):
        closure = saturate_corpus(8, riskman_ontology, riskman_rules).closure
        report = validate(closure, Schema(builtin_constraints()), workers=4)
        assert report.focus_counts["C3"] == 8
        assert report.focus_counts["C7"] == 8 * 6


class TestDeskScale:
    """Test materialization and validation time on a large corpus"""

    @pytest.mark.slow
    @pytest.mark.timeout(120)
    def test_ten_thousand_risks(self, riskman_ontology, riskman_rules):
        started = time.monotonic()
        result = saturate_corpus(10_000, riskman_ontology, riskman_rules)
        report = validate(result.closure, Schema(builtin_constraints()), workers=4)
        elapsed = time.monotonic() - started

        assert result.clashes == []
        assert report.focus_counts["C3"] == 10_000
        assert elapsed <= 30.0, f"materialize + validate took {elapsed:.1f} s"

    @pytest.mark.slow
    def test_benchmark_materialize(self, benchmark, riskman_ontology, riskman_rules):
        graph = synthetic_corpus(500)
        graph.update(riskman_ontology.abox_constants)
        result = benchmark(materialize, graph, riskman_rules)
        assert result.stats.derived_assertions > 0

    @pytest.mark.slow
    def test_benchmark_validate(self, benchmark, riskman_ontology, riskman_rules):
        closure = saturate_corpus(500, riskman_ontology, riskman_rules).closure
        schema = Schema(builtin_constraints())
        report = benchmark(validate, closure, schema, 4)
        assert report.focus_counts["C3"] == 500
