#!/usr/bin/env python3
"""
RISKMAN Pipeline - ingestion, materialization, validation, report

One ValidationPipeline instance runs one job: parse every input
(concurrently), merge the graphs, assemble the ontology (built-in TBox,
generated probability-severity ontology, extension axioms), saturate,
check consistency and validate against the built-in and extension
constraints.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from axioms import Ontology, builtin_riskman_ontology, parse_axiom_dsl, render_axiom_dsl
from fixture_data import EXTENSION_AXIOMS_DSL, EXTENSION_SHAPES_DSL, fixture_infusion_pump, fixture_prefixes
from ingestion import (InputFormat, TripleDoc, detect_format, load_file, render_rdfa_html,
                       render_turtle, serialize_ntriples, triples_to_abox)
from ps_ontology import PsConfig, PsOntology, generate_ps
from reasoner import (DEFAULT_MAX_ASSERTIONS, DEFAULT_MAX_SECONDS, ClashRecord,
                      MaterializationResult, SaturationStats, check_consistency,
                      compile_rules, materialize)
from report import ValidationReport, render_report_json, render_report_text
from riskman_errors import ConfigError, InputNotFound, RiskmanError
from shapes import Schema, builtin_constraints, parse_shape_dsl, render_shape_dsl, validate
from term_graph import Assertion, Graph, concept_assertion
from vocabulary import DEFAULT_NAMESPACE, default_prefix_map

logger = logging.getLogger(__name__)

DEFAULT_WORKERS = 4


class ExitCode(IntEnum):
    CONFORMS = 0
    VIOLATIONS = 1
    ERROR = 2
    INCONSISTENT = 3


class ReportFormat(Enum):
    TEXT = "text"
    JSON = "json"


@dataclass
class PipelineConfig:
    """Everything one pipeline run needs; defaults match the command line"""
    inputs: List[Path] = field(default_factory=list)
    input_format: InputFormat = InputFormat.AUTO
    ps: Optional[PsConfig] = field(default_factory=PsConfig)  # None disables PS
    extra_ontologies: List[Path] = field(default_factory=list)
    extra_shapes: List[Path] = field(default_factory=list)
    prefix_map: Dict[str, str] = field(default_factory=dict)
    namespace: str = DEFAULT_NAMESPACE
    base: Optional[str] = None
    emit_materialized: Optional[Path] = None
    provenance_path: Optional[Path] = None
    report_format: ReportFormat = ReportFormat.TEXT
    include_timing: bool = False
    assume_risk_sda: bool = False
    max_assertions: int = DEFAULT_MAX_ASSERTIONS
    max_seconds: float = DEFAULT_MAX_SECONDS
    workers: int = DEFAULT_WORKERS

    def validate(self, require_inputs: bool = True) -> "PipelineConfig":
        """
        Raises:
            ConfigError: if the configuration cannot be run
        """
        if require_inputs and not self.inputs:
            raise ConfigError("at least one input file is required")
        if self.max_assertions < 1:
            raise ConfigError(f"max_assertions must be positive, got {self.max_assertions}")
        if self.max_seconds <= 0:
            raise ConfigError(f"max_seconds must be positive, got {self.max_seconds}")
        if self.workers < 1:
            raise ConfigError(f"workers must be positive, got {self.workers}")
        if not self.namespace or self.namespace[-1] not in "#/":
            raise ConfigError(f"namespace must end with '#' or '/', got {self.namespace!r}")
        return self


@dataclass
class Submission:
    """Merged ABox of all inputs"""
    graph: Graph
    leftover_count: int = 0
    warnings: List[str] = field(default_factory=list)


def exit_code_for(report: ValidationReport) -> ExitCode:
    if report.inconsistent:
        return ExitCode.INCONSISTENT
    if not report.conforms:
        return ExitCode.VIOLATIONS
    return ExitCode.CONFORMS


def _clash_key(c: ClashRecord):
    return (c.individual.sort_key, tuple(t.value for t in c.concepts))


def _read_text(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputNotFound(f"no such file: {path}") from None
    except OSError as e:
        raise InputNotFound(f"cannot read {path}: {e.strerror}") from None


class ValidationPipeline:
    """
    Orchestrates one validation job.

    Callbacks:
        on_stage(stage, details): called when a stage finishes
        on_error(message): called before a RiskmanError propagates
    """

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.prefixes = default_prefix_map(config.namespace, config.prefix_map)

        # Callbacks
        self.on_stage: Optional[Callable[[str, Dict], None]] = None
        self.on_error: Optional[Callable[[str], None]] = None

        # Stats
        self.files_parsed = 0
        self.triples_parsed = 0
        self.stage_ms: Dict[str, int] = {}

        # Results of the last run
        self.ontology: Optional[Ontology] = None
        self.ps: Optional[PsOntology] = None
        self.result: Optional[MaterializationResult] = None
        self.provenance: Dict[Assertion, str] = {}

    def _stage_done(self, stage: str, started: float, **details):
        self.stage_ms[stage] = int(round((time.monotonic() - started) * 1000))
        logger.info(f"Stage {stage} done: {details}")
        if self.on_stage:
            self.on_stage(stage, details)

    # Ontology and schema

    def build_ontology(self) -> Ontology:
        """Built-in TBox + PS(pi, sigma) + extension axiom files"""
        started = time.monotonic()
        cfg = self.config
        ontology = builtin_riskman_ontology(cfg.namespace)
        if cfg.ps is not None:
            self.ps = generate_ps(cfg.ps, cfg.namespace)
            ontology = ontology.merge(self.ps.to_ontology(cfg.namespace))
        for path in cfg.extra_ontologies:
            axioms = parse_axiom_dsl(_read_text(path), self.prefixes, cfg.namespace, str(path))
            ontology = ontology.extend(axioms)
        self.ontology = ontology
        self._stage_done("ontology", started, axioms=len(ontology.axioms),
                         extensions=len(cfg.extra_ontologies))
        return ontology

    def build_schema(self, ontology: Ontology) -> Schema:
        """Built-in constraints + shape files, extension ids numbered across files"""
        cfg = self.config
        schema = Schema(builtin_constraints(cfg.namespace))
        next_id = 1
        for path in cfg.extra_shapes:
            parsed = parse_shape_dsl(_read_text(path), ontology.vocabulary, self.prefixes,
                                     cfg.namespace, str(path), next_id)
            schema = schema.extend(parsed)
            for c in parsed:
                logger.debug(f"{c.id} from {path}: {render_shape_dsl(c, self.prefixes, cfg.namespace)}")
            next_id += len(parsed)
        return schema

    # Ingestion

    def _load_one(self, indexed: Tuple[int, Path]) -> TripleDoc:
        index, path = indexed
        blank_prefix = f"i{index}_" if len(self.config.inputs) > 1 else ""
        return load_file(path, self.config.input_format, self.config.base,
                         self.prefixes, blank_prefix)

    def load_submission(self, ontology: Ontology) -> Submission:
        """Parse all inputs concurrently and merge them into one ABox"""
        started = time.monotonic()
        inputs = list(enumerate(self.config.inputs))
        if len(inputs) > 1 and self.config.workers > 1:
            with ThreadPoolExecutor(max_workers=min(self.config.workers, len(inputs))) as pool:
                docs = list(pool.map(self._load_one, inputs))
        else:
            docs = [self._load_one(i) for i in inputs]

        submission = Submission(Graph())
        for (_, path), doc in zip(inputs, docs):
            graph, leftover = triples_to_abox(doc, ontology.vocabulary)
            submission.graph.update(graph.assertions)
            for triple in graph.literal_triples:
                submission.graph.add_literal_triple(triple)
            submission.leftover_count += len(leftover)
            submission.warnings += [f"{path}: {w}" for w in doc.warnings]
            self.files_parsed += 1
            self.triples_parsed += len(doc.triples)
        if submission.leftover_count:
            logger.warning(f"{submission.leftover_count} triple(s) use names outside the vocabulary")
        self._stage_done("ingest", started, files=self.files_parsed,
                         assertions=len(submission.graph), leftover=submission.leftover_count)
        return submission

    # Reasoning

    def saturate(self, submission: Graph, ontology: Ontology) -> MaterializationResult:
        """Saturate submission plus the ontology's ABox constants"""
        started = time.monotonic()
        cfg = self.config
        rules = compile_rules(ontology)
        graph = submission.copy()
        graph.update(ontology.abox_constants)
        provenance = {} if cfg.provenance_path is not None else None
        result = materialize(graph, rules, cfg.max_assertions, cfg.max_seconds, provenance)

        if cfg.assume_risk_sda:
            result = self._assume_risk_sda(result, rules, provenance)
        if provenance is not None:
            self.provenance = provenance
        self.result = result
        self._stage_done("materialize", started, **result.stats.to_dict())
        return result

    def _assume_risk_sda(self, result: MaterializationResult, rules,
                         provenance: Optional[Dict[Assertion, str]]) -> MaterializationResult:
        ns = self.config.namespace
        sda, assurance, risk_sda = (f"{ns}SafeDesignArgument", f"{ns}AssuranceSDA", f"{ns}RiskSDA")
        closure = result.closure
        labels = [concept_assertion(risk_sda, n)
                  for n in closure.instances(sda) - closure.instances(assurance)]
        if not labels:
            return result
        logger.info(f"Labelling {len(labels)} SDA(s) as RiskSDA")
        graph = closure.copy()
        graph.update(labels)
        again = materialize(graph, rules, self.config.max_assertions, self.config.max_seconds, provenance)
        if provenance is not None:
            for label in labels:
                provenance[label] = "assume-risk-sda"
        stats = SaturationStats(
            input_assertions=result.stats.input_assertions,
            derived_assertions=len(again.closure) - result.stats.input_assertions,
            iterations=result.stats.iterations + again.stats.iterations,
            elapsed_ms=result.stats.elapsed_ms + again.stats.elapsed_ms,
        )
        clashes = sorted(set(result.clashes) | set(again.clashes), key=_clash_key)
        return MaterializationResult(again.closure, stats, clashes)

    def consistency(self, result: MaterializationResult, ontology: Ontology) -> List[ClashRecord]:
        """Clashes reported by saturation plus the disjointness recheck"""
        rechecked = check_consistency(result.closure, ontology.disjoint_pairs())
        return sorted(set(result.clashes) | set(rechecked), key=_clash_key)

    # Whole run

    def run(self) -> ValidationReport:
        """
        Execute every stage.

        Raises:
            RiskmanError: any parse, configuration or limit error
        """
        try:
            self.config.validate()
            ontology = self.build_ontology()
            schema = self.build_schema(ontology)
            submission = self.load_submission(ontology)
            result = self.saturate(submission.graph, ontology)
            clashes = self.consistency(result, ontology)

            started = time.monotonic()
            report = validate(result.closure, schema, self.config.workers)
            self._stage_done("validate", started, constraints=len(schema.constraints),
                             violations=len(report.violations))
        except RiskmanError as e:
            if self.on_error:
                self.on_error(str(e))
            raise

        report.inconsistent = bool(clashes)
        report.clashes = clashes
        report.leftover_triple_count = submission.leftover_count
        report.stats = result.stats
        report.warnings = submission.warnings
        if clashes:
            logger.warning(f"Closure is inconsistent: {len(clashes)} clash(es)")
        self.write_outputs(result)
        return report

    def write_outputs(self, result: MaterializationResult):
        cfg = self.config
        if cfg.emit_materialized is not None:
            write_graph(cfg.emit_materialized, result.closure, self.prefixes)
        if cfg.provenance_path is not None:
            write_provenance(cfg.provenance_path, self.provenance)

    def render(self, report: ValidationReport) -> str:
        if self.config.report_format == ReportFormat.JSON:
            return render_report_json(report, self.config.include_timing)
        return render_report_text(report, self.config.include_timing)

    def get_stats(self) -> Dict:
        stats = {
            "files_parsed": self.files_parsed,
            "triples_parsed": self.triples_parsed,
            "stage_ms": dict(self.stage_ms),
        }
        if self.result is not None:
            stats.update(self.result.stats.to_dict())
            stats["clashes"] = len(self.result.clashes)
        return stats


# Writers

def write_graph(path: Path, graph: Graph, prefixes: Optional[Dict[str, str]] = None):
    """Write graph in the format its file extension names (N-Triples otherwise)"""
    path = Path(path)
    try:
        fmt = detect_format(path)
    except RiskmanError:
        fmt = InputFormat.NTRIPLES
    if fmt == InputFormat.TURTLE:
        text = render_turtle(graph, prefixes)
    elif fmt == InputFormat.RDFA_HTML:
        text = render_rdfa_html(graph, prefixes)
    else:
        text = serialize_ntriples(graph)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(graph)} assertions to {path}")


def write_provenance(path: Path, provenance: Dict[Assertion, str]):
    """Tab-separated rule id and N-Triples form of each derived assertion"""
    lines = []
    for assertion in sorted(provenance, key=lambda a: a.sort_key):
        graph = Graph([assertion])
        lines.append(f"{provenance[assertion]}\t{serialize_ntriples(graph).strip()}")
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def run_validate(config: PipelineConfig) -> Tuple[ValidationReport, ExitCode]:
    """Run the full pipeline; returns the report and its exit code"""
    report = ValidationPipeline(config).run()
    return report, exit_code_for(report)


def run_materialize(config: PipelineConfig, output: Path) -> MaterializationResult:
    """Ingest and saturate without validating; writes the closure to output"""
    pipeline = ValidationPipeline(config)
    config.validate()
    ontology = pipeline.build_ontology()
    submission = pipeline.load_submission(ontology)
    result = pipeline.saturate(submission.graph, ontology)
    write_graph(output, result.closure, pipeline.prefixes)
    if config.provenance_path is not None:
        write_provenance(config.provenance_path, pipeline.provenance)
    return result


def ps_gen(ps_config: PsConfig, output: Path, namespace: str = DEFAULT_NAMESPACE) -> Tuple[Path, Path]:
    """
    Write PS(pi, sigma) as axiom DSL (<output>.axioms) and its ABox with
    labels as N-Triples (<output>.nt).
    """
    ps = generate_ps(ps_config, namespace)
    output = Path(output)
    dsl_path, nt_path = output.with_suffix(".axioms"), output.with_suffix(".nt")
    prefixes = default_prefix_map(namespace)
    header = f"; probability-severity ontology PS({ps_config.pi},{ps_config.sigma})\n"
    dsl_path.write_text(header + "".join(render_axiom_dsl(a, prefixes, namespace) + "\n" for a in ps.tbox),
                        encoding="utf-8")
    abox = Graph(ps.abox)
    for triple in ps.labels:
        abox.add_literal_triple(triple)
    nt_path.write_text(serialize_ntriples(abox), encoding="utf-8")
    logger.info(f"Wrote {len(ps.tbox)} axioms to {dsl_path} and {len(ps.abox)} assertions to {nt_path}")
    return dsl_path, nt_path


def distill(html_path: Path, output: Path, base: Optional[str] = None,
            prefixes: Optional[Dict[str, str]] = None) -> TripleDoc:
    """Extract the RDFa triples of an HTML file as N-Triples"""
    doc = load_file(html_path, InputFormat.RDFA_HTML, base, prefixes)
    Path(output).write_text(serialize_ntriples(doc.triples), encoding="utf-8")
    return doc


def write_fixture(directory: Path, namespace: str = DEFAULT_NAMESPACE) -> List[Path]:
    """Write the infusion-pump example in all three formats plus the extension files"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    graph, _ = fixture_infusion_pump(namespace)
    prefixes = fixture_prefixes(namespace)
    written = []
    for name in ("infusion_pump.nt", "infusion_pump.ttl", "infusion_pump.html"):
        write_graph(directory / name, graph, prefixes)
        written.append(directory / name)
    for name, text in (("critical_risk.axioms", EXTENSION_AXIOMS_DSL),
                       ("critical_risk.shapes", EXTENSION_SHAPES_DSL)):
        (directory / name).write_text(text, encoding="utf-8")
        written.append(directory / name)
    return written
