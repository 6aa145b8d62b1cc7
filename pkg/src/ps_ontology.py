#!/usr/bin/env python3
"""
Probability-severity ontology generator

Builds PS(pi, sigma): magnitude individuals p1..p_pi and s1..s_sigma, the
gt ordering between neighbouring magnitudes, and one multiplication GCI
per pair of probability magnitudes. Magnitudes are exponents of interval
upper bounds, so multiplying two probabilities adds exponents:
k = max(1, i + j - pi).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List

from axioms import Axiom, Ontology, conj, exists, gci, nominal, transitive
from riskman_errors import ConfigError
from term_graph import (IRI, LITERAL, XSD_STRING, Assertion, Term, Triple,
                        concept_assertion, role_assertion)
from vocabulary import DEFAULT_NAMESPACE, PS_NAMESPACE, RDFS_LABEL, default_vocabulary

logger = logging.getLogger(__name__)

DEFAULT_PI = 5
DEFAULT_SIGMA = 5

PROBABILITY_LABELS = ("improbable", "remote", "occasional", "probable", "frequent")
SEVERITY_LABELS = ("negligible", "minor", "serious", "critical", "catastrophic")


@dataclass(frozen=True)
class PsConfig:
    """Interval counts for probability (pi) and severity (sigma)"""
    pi: int = DEFAULT_PI
    sigma: int = DEFAULT_SIGMA

    def __post_init__(self):
        for name in ("pi", "sigma"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")


def multiply_magnitudes(i: int, j: int, pi: int) -> int:
    """
    Magnitude of the product of probabilities with magnitudes i and j.

    Raises:
        ConfigError: if i or j is outside 1..pi
    """
    for index in (i, j):
        if not 1 <= index <= pi:
            raise ConfigError(f"magnitude index {index} outside 1..{pi}")
    return max(1, i + j - pi)


def probability(i: int) -> Term:
    return Term(IRI, f"{PS_NAMESPACE}p{i}")


def severity(i: int) -> Term:
    return Term(IRI, f"{PS_NAMESPACE}s{i}")


@dataclass
class PsOntology:
    config: PsConfig
    tbox: List[Axiom] = field(default_factory=list)
    abox: List[Assertion] = field(default_factory=list)
    probabilities: List[Term] = field(default_factory=list)
    severities: List[Term] = field(default_factory=list)
    labels: List[Triple] = field(default_factory=list)

    @property
    def individuals(self) -> List[Term]:
        return self.probabilities + self.severities

    def to_ontology(self, namespace: str = DEFAULT_NAMESPACE) -> Ontology:
        return Ontology(vocabulary=default_vocabulary(namespace)).extend(self.tbox, self.abox)

    def get_stats(self) -> Dict[str, int]:
        return {
            "gcis": sum(1 for a in self.tbox if a.kind == "gci"),
            "concept_assertions": sum(1 for a in self.abox if a.kind == "concept"),
            "gt_assertions": sum(1 for a in self.abox if a.kind == "role"),
        }


def generate_ps(config: PsConfig = PsConfig(), namespace: str = DEFAULT_NAMESPACE) -> PsOntology:
    """Generate the probability-severity ontology for config"""
    v = default_vocabulary(namespace)
    has_p, has_p1, has_p2 = v.role("hasProbability"), v.role("hasProbability1"), v.role("hasProbability2")
    gt = v.role("gt")
    pi, sigma = config.pi, config.sigma

    ps = PsOntology(config)
    ps.probabilities = [probability(i) for i in range(1, pi + 1)]
    ps.severities = [severity(i) for i in range(1, sigma + 1)]

    for i in range(1, pi + 1):
        for j in range(1, pi + 1):
            k = multiply_magnitudes(i, j, pi)
            ps.tbox.append(gci(
                conj(exists(has_p1, nominal(probability(i))), exists(has_p2, nominal(probability(j)))),
                exists(has_p, nominal(probability(k))),
                f"ps:p{i}*p{j}=p{k}"))
    ps.tbox.append(transitive(gt, "transitive:gt"))

    ps.abox += [concept_assertion(v.concept("Probability"), p) for p in ps.probabilities]
    ps.abox += [concept_assertion(v.concept("Severity"), s) for s in ps.severities]
    ps.abox += [role_assertion(gt, ps.probabilities[i + 1], ps.probabilities[i]) for i in range(pi - 1)]
    ps.abox += [role_assertion(gt, ps.severities[i + 1], ps.severities[i]) for i in range(sigma - 1)]

    if pi == 5 and sigma == 5:
        for term, label in zip(ps.probabilities, PROBABILITY_LABELS):
            ps.labels.append((term, RDFS_LABEL, Term(LITERAL, label, XSD_STRING)))
        for term, label in zip(ps.severities, SEVERITY_LABELS):
            ps.labels.append((term, RDFS_LABEL, Term(LITERAL, label, XSD_STRING)))

    logger.debug(f"Generated PS({pi},{sigma}): {ps.get_stats()}")
    return ps
