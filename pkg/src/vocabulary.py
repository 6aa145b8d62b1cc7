#!/usr/bin/env python3
"""
RISKMAN vocabulary: namespaces, the 24 concept names and 28 role names,
and the default prefix map shared by the parsers and both DSLs.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Optional

from term_graph import IRI, Term

DEFAULT_NAMESPACE = "https://w3id.org/riskman/ontology#"
PS_NAMESPACE = "https://w3id.org/riskman/ps#"

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = Term(IRI, RDF_NS + "type")
RDFS_LABEL = Term(IRI, RDFS_NS + "label")
RDFS_COMMENT = Term(IRI, RDFS_NS + "comment")

CONCEPT_LOCAL_NAMES = (
    "AnalyzedRisk", "AssuranceSDA", "AssuranceSDAI", "ControlledRisk",
    "DeviceComponent", "DeviceContext", "DeviceFunction", "DeviceProblem",
    "DomainSpecificHazard", "Event", "Harm", "Hazard", "HazardousSituation",
    "ImplementationManifest", "PatientProblem", "Probability", "Risk",
    "RiskLevel", "RiskSDA", "RiskSDAI", "SafeDesignArgument", "SafetyAssurance",
    "SDAI", "Severity",
)

ROLE_LOCAL_NAMES = (
    "hasAnalyzedRisk", "hasDeviceComponent", "hasDeviceContext",
    "hasDeviceFunction", "hasDeviceProblem", "hasDomainSpecificHazard",
    "hasEvent", "hasHarm", "hasHazard", "hasHazardousSituation",
    "hasImplementationManifest", "hasInitialRiskLevel", "hasParentHazard",
    "hasParentSituation", "hasPatientProblem", "hasPrecedingEvent",
    "hasProbability", "hasProbability1", "hasProbability2",
    "hasResidualRiskLevel", "hasRiskLevel", "hasSafetyAssurance",
    "hasSeverity", "hasSubSDA", "isMitigatedBy", "isPartOfDeviceComponent",
    "causesHarm", "gt",
)


@dataclass(frozen=True)
class Vocabulary:
    """Concept and role names known to the reasoner and validator"""

    namespace: str = DEFAULT_NAMESPACE
    concept_names: FrozenSet[Term] = field(default_factory=frozenset)
    role_names: FrozenSet[Term] = field(default_factory=frozenset)

    def __post_init__(self):
        overlap = self.concept_names & self.role_names
        if overlap:
            names = ", ".join(sorted(t.value for t in overlap))
            raise ValueError(f"names used both as concept and role: {names}")

    def concept(self, local: str) -> Term:
        return Term(IRI, self.namespace + local)

    def role(self, local: str) -> Term:
        return Term(IRI, self.namespace + local)

    def is_concept(self, term: Term) -> bool:
        return term in self.concept_names

    def is_role(self, term: Term) -> bool:
        return term in self.role_names

    def extended(self, concepts: Iterable[Term] = (), roles: Iterable[Term] = ()) -> "Vocabulary":
        """New vocabulary with extension names added"""
        return Vocabulary(
            namespace=self.namespace,
            concept_names=self.concept_names | frozenset(concepts),
            role_names=self.role_names | frozenset(roles),
        )


@lru_cache(maxsize=None)
def default_vocabulary(namespace: str = DEFAULT_NAMESPACE) -> Vocabulary:
    return Vocabulary(
        namespace=namespace,
        concept_names=frozenset(Term(IRI, namespace + n) for n in CONCEPT_LOCAL_NAMES),
        role_names=frozenset(Term(IRI, namespace + n) for n in ROLE_LOCAL_NAMES),
    )


def default_prefix_map(namespace: str = DEFAULT_NAMESPACE,
                       overrides: Optional[Dict[str, str]] = None) -> Dict[str, str]:
    prefixes = {
        "rdf": RDF_NS,
        "rdfs": RDFS_NS,
        "xsd": XSD_NS,
        "rm": namespace,
        "ps": PS_NAMESPACE,
    }
    if overrides:
        prefixes.update(overrides)
    return prefixes
