#!/usr/bin/env python3
"""
Embedded infusion-pump example

The submission is the asserted part of a single controlled risk for a
non-audio alarm: only role assertions and rdfs:label annotations, no class
labels. Materializing it with the built-in ontology and PS(5,5) must add
exactly EXPECTED_CONCEPT_DELTA and EXPECTED_ROLE_DELTA over the fixture's
individuals.

Also holds the CriticalRiskLevel extension texts and a synthetic corpus
generator for load testing.
"""

from functools import partial
from typing import Dict, List, Tuple

from ps_ontology import probability, severity
from term_graph import IRI, LITERAL, XSD_STRING, Assertion, Graph, Term, concept_assertion, role_assertion
from vocabulary import DEFAULT_NAMESPACE, RDFS_LABEL, default_vocabulary

FIXTURE_NAMESPACE = "http://example.org/pump#"
FIXTURE_PREFIX = "ex"

INDIVIDUALS = (
    "cr", "ar", "dsh", "hz", "dcm", "df", "dp", "hr", "pp", "dcx", "hs",
    "ev1", "ev2", "irl", "rrl", "sd0", "sd1", "sd2", "sd3", "sd4", "sd5",
    "im1", "im2", "im4", "im5", "sa",
)
MAGNITUDES = ("p3", "p4", "p5", "s4")

# (role, subject, object); objects named p*/s* are PS magnitudes
ROLE_EDGES = (
    ("isMitigatedBy", "cr", "sd0"),
    ("hasAnalyzedRisk", "cr", "ar"),
    ("hasResidualRiskLevel", "cr", "rrl"),
    ("hasProbability", "rrl", "p3"),
    ("hasSeverity", "rrl", "s4"),
    ("hasInitialRiskLevel", "ar", "irl"),
    ("hasDomainSpecificHazard", "ar", "dsh"),
    ("hasHazardousSituation", "ar", "hs"),
    ("hasDeviceContext", "ar", "dcx"),
    ("hasPatientProblem", "ar", "pp"),
    ("hasHarm", "ar", "hr"),
    ("hasProbability1", "irl", "p5"),
    ("hasProbability2", "irl", "p4"),
    ("hasSeverity", "irl", "s4"),
    ("hasDeviceProblem", "dsh", "dp"),
    ("hasDeviceFunction", "dsh", "df"),
    ("hasDeviceComponent", "dsh", "dcm"),
    ("hasHazard", "dsh", "hz"),
    ("hasEvent", "hs", "ev2"),
    ("hasPrecedingEvent", "ev2", "ev1"),
    ("hasSubSDA", "sd0", "sd1"),
    ("hasSubSDA", "sd0", "sd2"),
    ("hasSubSDA", "sd0", "sd3"),
    ("hasSubSDA", "sd3", "sd4"),
    ("hasSubSDA", "sd3", "sd5"),
    ("hasImplementationManifest", "sd1", "im1"),
    ("hasImplementationManifest", "sd2", "im2"),
    ("hasImplementationManifest", "sd4", "im4"),
    ("hasImplementationManifest", "sd5", "im5"),
    ("hasSafetyAssurance", "sd5", "sa"),
)

LABELS = {
    "dcm": "Non-audio alarm",
    "df": "Alarm",
    "dp": "Defective Alarm (IMDRF A160106)",
    "hz": "Non-audio alarm malfunction",
    "pp": "Loss of consciousness (IMDRF E0119)",
    "hr": "Loss of consciousness",
    "dcx": "Normal use",
    "hs": "Underdose",
    "ev1": "Vibration mechanism fails",
    "ev2": "Vibration cannot be felt",
    "sd0": "Alternative alerting when vibration mechanism of non-audio alarm fails",
    "sd1": "Additional visual (blinking) signal",
    "sd2": "Notification recurs every X minutes",
    "sd3": "Additional audio alarm",
    "sd4": "Audio signal if vibration signal not acknowledged",
    "sd5": "Audible signal is at least X db at Y m",
    "im1": "Sec. 10.3 of Alarm report",
    "im2": "X := 0.5, Sec. 10.7 of Alarm report",
    "im4": "Sec. 10.11 of Alarm report",
    "im5": "X := 45, Y := 1, Sec. 5.3 of Loudspeaker test",
    "sa": "IEC 60601",
}

EXPECTED_CONCEPT_DELTA = (
    ("AnalyzedRisk", "ar"), ("ControlledRisk", "cr"), ("Risk", "ar"), ("Risk", "cr"),
    ("SafeDesignArgument", "sd0"), ("SafeDesignArgument", "sd1"), ("SafeDesignArgument", "sd2"),
    ("SafeDesignArgument", "sd3"), ("SafeDesignArgument", "sd4"), ("SafeDesignArgument", "sd5"),
    ("SDAI", "sd1"), ("SDAI", "sd2"), ("SDAI", "sd4"), ("SDAI", "sd5"),
    ("AssuranceSDA", "sd5"), ("AssuranceSDAI", "sd5"),
    ("HazardousSituation", "hs"), ("Event", "ev1"), ("Event", "ev2"),
    ("RiskLevel", "irl"), ("RiskLevel", "rrl"),
    ("DeviceContext", "dcx"), ("Harm", "hr"), ("PatientProblem", "pp"),
    ("DomainSpecificHazard", "dsh"), ("Hazard", "hz"), ("DeviceComponent", "dcm"),
    ("DeviceFunction", "df"), ("DeviceProblem", "dp"),
    ("ImplementationManifest", "im1"), ("ImplementationManifest", "im2"),
    ("ImplementationManifest", "im4"), ("ImplementationManifest", "im5"),
    ("SafetyAssurance", "sa"),
)

EXPECTED_ROLE_DELTA = (
    ("hasHarm", "cr", "hr"),
    ("hasRiskLevel", "cr", "rrl"),
    ("hasRiskLevel", "ar", "irl"),
    ("hasProbability", "irl", "p4"),
    ("gt", "p5", "p3"),
)

EXTENSION_AXIOMS_DSL = """\
; a residual risk level with probability p5 and severity s3 is critical
(gci (and (some hasProbability (ind p5)) (some hasSeverity (ind s3)))
     (class CriticalRiskLevel))
"""

EXTENSION_SHAPES_DSL = """\
(constraint ControlledRisk
  (not (some (path hasResidualRiskLevel) (class CriticalRiskLevel))))
"""


def fixture_term(name: str) -> Term:
    """Fixture individual or PS magnitude by short name"""
    if name in MAGNITUDES or name[:1] in ("p", "s") and name[1:].isdigit():
        return probability(int(name[1:])) if name[0] == "p" else severity(int(name[1:]))
    return Term(IRI, FIXTURE_NAMESPACE + name)


def fixture_individuals() -> List[Term]:
    return [fixture_term(n) for n in INDIVIDUALS + MAGNITUDES]


def fixture_infusion_pump(namespace: str = DEFAULT_NAMESPACE) -> Tuple[Graph, List[Assertion]]:
    """
    The infusion-pump submission and the assertions materialization adds.

    Returns:
        (submission, expected_delta); the delta is restricted to the
        fixture's individuals and excludes the PS ABox
    """
    v = default_vocabulary(namespace)
    graph = Graph(role_assertion(v.role(r), fixture_term(s), fixture_term(o)) for r, s, o in ROLE_EDGES)
    for name, label in LABELS.items():
        graph.add_literal_triple((fixture_term(name), RDFS_LABEL, Term(LITERAL, label, XSD_STRING)))

    delta = [concept_assertion(v.concept(c), fixture_term(n)) for c, n in EXPECTED_CONCEPT_DELTA]
    delta += [role_assertion(v.role(r), fixture_term(s), fixture_term(o)) for r, s, o in EXPECTED_ROLE_DELTA]
    return graph, sorted(delta, key=lambda a: a.sort_key)


def fixture_prefixes(namespace: str = DEFAULT_NAMESPACE) -> Dict[str, str]:
    return {FIXTURE_PREFIX: FIXTURE_NAMESPACE, "rm": namespace}


def _corpus_term(base: str, k: int, name: str) -> Term:
    return Term(IRI, f"{base}r{k}_{name}")


def synthetic_corpus(n: int, namespace: str = DEFAULT_NAMESPACE,
                     base: str = "http://example.org/synthetic#") -> Graph:
    """
    n controlled risks shaped like the infusion-pump example, each with its
    own individuals and a six-node SDA tree; magnitudes vary per risk.
    """
    v = default_vocabulary(namespace)
    graph = Graph()
    for k in range(n):
        t = partial(_corpus_term, base, k)
        initial = 2 + k % 4
        edges = [(r, t(s), t(o) if o not in ("p3", "p4", "p5", "s4") else None, o)
                 for r, s, o in ROLE_EDGES]
        for role, subject, obj, short in edges:
            if obj is None:
                if role == "hasProbability1":
                    obj = probability(initial)
                elif role == "hasProbability2":
                    obj = probability(5 - k % 2)
                else:
                    obj = fixture_term(short)
            graph.add_role(v.role(role), subject, obj)
    return graph
