"""
Shared pytest fixtures for RISKMAN tests
"""

import os
import sys

import pytest

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))


@pytest.fixture
def vocab():
    """Default RISKMAN vocabulary"""
    from vocabulary import default_vocabulary
    return default_vocabulary()


@pytest.fixture
def C(vocab):
    """Concept name by local name"""
    return vocab.concept


@pytest.fixture
def R(vocab):
    """Role name by local name"""
    return vocab.role


@pytest.fixture
def ex():
    """Fixture individual (or PS magnitude) by short name"""
    from fixture_data import fixture_term
    return fixture_term


@pytest.fixture
def fixture_graph():
    """Infusion-pump submission and its expected closure delta"""
    from fixture_data import fixture_infusion_pump
    return fixture_infusion_pump()


@pytest.fixture(scope="session")
def riskman_ontology():
    """Built-in TBox merged with PS(5,5)"""
    from axioms import builtin_riskman_ontology
    from ps_ontology import generate_ps
    return builtin_riskman_ontology().merge(generate_ps().to_ontology())


@pytest.fixture(scope="session")
def riskman_rules(riskman_ontology):
    from reasoner import compile_rules
    return compile_rules(riskman_ontology)


@pytest.fixture
def saturate(riskman_ontology, riskman_rules):
    """Materialize a submission together with the PS ABox"""
    from reasoner import materialize

    def run(graph):
        g = graph.copy()
        g.update(riskman_ontology.abox_constants)
        return materialize(g, riskman_rules)

    return run


@pytest.fixture
def fixture_closure(fixture_graph, saturate):
    """Saturated infusion-pump closure"""
    submission, _ = fixture_graph
    return saturate(submission).closure


@pytest.fixture
def fixture_files(tmp_path):
    """The infusion-pump example written in every supported format"""
    from pipeline import write_fixture
    write_fixture(tmp_path)
    return tmp_path
