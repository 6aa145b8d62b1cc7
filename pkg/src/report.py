#!/usr/bin/env python3
"""
Validation report values and their text and JSON renderings.

Both renderings are byte-deterministic: violations are sorted by
(constraint id, focus node) and elapsed time is written as 0 unless
timing output is requested.
"""

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from reasoner import ClashRecord, SaturationStats
from term_graph import BLANK, IRI, Term


@dataclass(frozen=True)
class Violation:
    constraint_id: str
    focus_node: Term
    message: str
    variant: Optional[str] = None
    head: Optional[Term] = field(default=None, compare=False)


@dataclass
class ValidationReport:
    conforms: bool = True
    inconsistent: bool = False
    violations: List[Violation] = field(default_factory=list)
    clashes: List[ClashRecord] = field(default_factory=list)
    leftover_triple_count: int = 0
    stats: SaturationStats = field(default_factory=SaturationStats)
    focus_counts: Dict[str, int] = field(default_factory=dict, compare=False)
    warnings: List[str] = field(default_factory=list, compare=False)


def violation_sort_key(v: Violation):
    return (v.constraint_id, node_text(v.focus_node))


def node_text(term: Term) -> str:
    """IRI text, or _:label for blank nodes"""
    return "_:" + term.value if term.kind == BLANK else term.value


def _node_term(text: str) -> Term:
    if text.startswith("_:"):
        return Term(BLANK, text[2:])
    return Term(IRI, text)


def render_report_text(report: ValidationReport, include_timing: bool = False) -> str:
    """Human-readable report, violations grouped by constraint"""
    lines = ["RISKMAN validation report"]
    if report.conforms:
        lines.append("Result: CONFORMS")
    else:
        lines.append(f"Result: DOES NOT CONFORM ({len(report.violations)} violation(s))")
    if report.inconsistent:
        lines.append(f"Consistency: INCONSISTENT ({len(report.clashes)} clash(es))")
    else:
        lines.append("Consistency: consistent")

    s = report.stats
    stats = (f"Statistics: {s.input_assertions} input assertions, "
             f"{s.derived_assertions} derived, {s.iterations} iterations, "
             f"{report.leftover_triple_count} leftover triples")
    if include_timing:
        stats += f", {s.elapsed_ms} ms"
    lines.append(stats)

    groups: Dict[str, List[Violation]] = {}
    for v in sorted(report.violations, key=violation_sort_key):
        groups.setdefault(v.constraint_id, []).append(v)
    for cid, violations in groups.items():
        lines.append("")
        lines.append(f"[{cid}] {len(violations)} violation(s)")
        for v in violations:
            head = v.head.local_name if v.head is not None else "-"
            lines.append(f"{cid} {head} {v.focus_node.local_name}: {v.message}")

    if report.clashes:
        lines.append("")
        lines.append("[clashes]")
        for c in report.clashes:
            lines.append(f"{c.individual.local_name}: {' ⊓ '.join(t.local_name for t in c.concepts)} ⊑ ⊥")

    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    return "\n".join(lines) + "\n"


def report_to_dict(report: ValidationReport, include_timing: bool = False) -> dict:
    s = report.stats
    return {
        "conforms": report.conforms,
        "inconsistent": report.inconsistent,
        "violations": [
            {"constraint": v.constraint_id, "focus": node_text(v.focus_node),
             "variant": v.variant, "message": v.message}
            for v in sorted(report.violations, key=violation_sort_key)
        ],
        "clashes": [
            {"individual": node_text(c.individual), "concepts": [t.value for t in c.concepts]}
            for c in report.clashes
        ],
        "stats": {
            "input_assertions": s.input_assertions,
            "derived_assertions": s.derived_assertions,
            "iterations": s.iterations,
            "leftover_triples": report.leftover_triple_count,
            "elapsed_ms": s.elapsed_ms if include_timing else 0,
        },
    }


def render_report_json(report: ValidationReport, include_timing: bool = False) -> str:
    return json.dumps(report_to_dict(report, include_timing), indent=2, ensure_ascii=False) + "\n"


def parse_report_json(text: str) -> ValidationReport:
    """Inverse of render_report_json"""
    data = json.loads(text)
    stats = data["stats"]
    violations = [
        Violation(v["constraint"], _node_term(v["focus"]), v["message"], v.get("variant"))
        for v in data["violations"]
    ]
    clashes = [
        ClashRecord(_node_term(c["individual"]), tuple(Term(IRI, t) for t in c["concepts"]))
        for c in data["clashes"]
    ]
    return ValidationReport(
        conforms=data["conforms"],
        inconsistent=data["inconsistent"],
        violations=violations,
        clashes=clashes,
        leftover_triple_count=stats["leftover_triples"],
        stats=SaturationStats(stats["input_assertions"], stats["derived_assertions"],
                              stats["iterations"], stats["elapsed_ms"]),
    )
