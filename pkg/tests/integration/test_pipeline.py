"""
Integration tests for the validation pipeline
Runs the infusion-pump example end to end through files on disk
"""

import json

import pytest

import pipeline as pipeline_module
from ingestion import load_file, triples_to_abox
from pipeline import (ExitCode, PipelineConfig, ReportFormat, ValidationPipeline, distill,
                      exit_code_for, ps_gen, run_materialize, run_validate, write_graph)
from ps_ontology import PsConfig
from axioms import parse_axiom_dsl
from riskman_errors import ConfigError, InputNotFound, ResourceLimitExceeded
from term_graph import BLANK, concept_assertion


def config_for(*paths, **kwargs):
    return PipelineConfig(inputs=list(paths), **kwargs)


class TestConformingExample:
    """Test that the example conforms in every input format"""

    @pytest.mark.integration
    @pytest.mark.parametrize("name", ["infusion_pump.nt", "infusion_pump.ttl", "infusion_pump.html"])
    def test_conforms(self, fixture_files, name):
        report, code = run_validate(config_for(fixture_files / name))
        assert code == ExitCode.CONFORMS
        assert report.conforms and not report.inconsistent
        assert report.violations == []
        assert report.leftover_triple_count == 0

    @pytest.mark.integration
    def test_focus_counts(self, fixture_files):
        report, _ = run_validate(config_for(fixture_files / "infusion_pump.nt"))
        assert report.focus_counts["C6"] == 2
        assert report.focus_counts["C7"] == 6
        assert report.focus_counts["C2"] == 1
        assert report.focus_counts["C1"] == 1

    @pytest.mark.integration
    def test_formats_give_the_same_closure(self, fixture_files):
        closures = []
        for name in ("infusion_pump.nt", "infusion_pump.ttl", "infusion_pump.html"):
            p = ValidationPipeline(config_for(fixture_files / name))
            p.run()
            closures.append(p.result.closure.assertions)
        assert closures[0] == closures[1] == closures[2]

    @pytest.mark.integration
    def test_input_statistics(self, fixture_files):
        """Test that stats count the submission plus the PS ABox"""
        report, _ = run_validate(config_for(fixture_files / "infusion_pump.nt"))
        # 30 role assertions, 10 magnitude typings and 8 gt edges of PS(5,5)
        assert report.stats.input_assertions == 30 + 18
        assert report.stats.derived_assertions > 0


class TestPipelineStages:
    """Test stage callbacks, statistics and error reporting"""

    @pytest.mark.integration
    def test_stage_sequence(self, fixture_files):
        stages = []
        p = ValidationPipeline(config_for(fixture_files / "infusion_pump.nt"))
        p.on_stage = lambda stage, details: stages.append(stage)
        p.run()
        assert stages == ["ontology", "ingest", "materialize", "validate"]

    @pytest.mark.integration
    def test_stats(self, fixture_files):
        p = ValidationPipeline(config_for(fixture_files / "infusion_pump.nt"))
        p.run()
        stats = p.get_stats()
        assert stats["files_parsed"] == 1
        assert stats["triples_parsed"] == 30 + 21
        assert set(stats["stage_ms"]) == {"ontology", "ingest", "materialize", "validate"}
        assert stats["clashes"] == 0

    @pytest.mark.integration
    def test_missing_input_reported(self, tmp_path):
        errors = []
        p = ValidationPipeline(config_for(tmp_path / "absent.nt"))
        p.on_error = errors.append
        with pytest.raises(InputNotFound):
            p.run()
        assert len(errors) == 1
        assert errors[0].startswith("file-not-found: no such file")

    @pytest.mark.integration
    def test_limit_error_reported(self, fixture_files, mocker):
        """Test that a saturation failure reaches on_error and propagates"""
        mocker.patch.object(pipeline_module, "materialize",
                            side_effect=ResourceLimitExceeded("max-assertions", 10, 11))
        errors = []
        p = ValidationPipeline(config_for(fixture_files / "infusion_pump.nt"))
        p.on_error = errors.append
        with pytest.raises(ResourceLimitExceeded):
            p.run()
        assert errors and errors[0].startswith("resource-limit")

    @pytest.mark.integration
    def test_validate_uses_configured_workers(self, fixture_files, mocker):
        spy = mocker.spy(pipeline_module, "validate")
        run_validate(config_for(fixture_files / "infusion_pump.nt", workers=2))
        assert spy.call_count == 1
        assert spy.call_args.args[2] == 2

    @pytest.mark.integration
    def test_real_assertion_limit(self, fixture_files):
        with pytest.raises(ResourceLimitExceeded):
            run_validate(config_for(fixture_files / "infusion_pump.nt", max_assertions=40))

    @pytest.mark.integration
    def test_json_render(self, fixture_files):
        p = ValidationPipeline(config_for(fixture_files / "infusion_pump.nt",
                                          report_format=ReportFormat.JSON))
        data = json.loads(p.render(p.run()))
        assert data["conforms"] is True
        assert data["violations"] == []


class TestConfiguration:
    """Test configuration checks"""

    @pytest.mark.unit
    def test_requires_inputs(self):
        with pytest.raises(ConfigError):
            PipelineConfig().validate()

    @pytest.mark.unit
    def test_inputs_optional_when_not_required(self):
        assert PipelineConfig().validate(require_inputs=False).workers >= 1

    @pytest.mark.unit
    @pytest.mark.parametrize("kwargs", [
        {"max_assertions": 0},
        {"max_seconds": 0},
        {"workers": 0},
        {"namespace": "http://example.org/riskman"},
        {"namespace": ""},
    ])
    def test_rejected(self, tmp_path, kwargs):
        with pytest.raises(ConfigError):
            config_for(tmp_path / "x.nt", **kwargs).validate()

    @pytest.mark.integration
    def test_config_error_is_value_error(self, tmp_path):
        with pytest.raises(ValueError):
            run_validate(config_for(tmp_path / "x.nt", workers=0))


class TestOptions:
    """Test optional pipeline behaviour"""

    @pytest.mark.integration
    def test_without_ps_combined_probability_is_missing(self, fixture_files):
        """Test that disabling PS leaves the initial risk level without a probability"""
        report, code = run_validate(config_for(fixture_files / "infusion_pump.nt", ps=None))
        assert code == ExitCode.VIOLATIONS
        assert [(v.constraint_id, v.focus_node.local_name) for v in report.violations] == [("C6", "irl")]

    @pytest.mark.integration
    def test_emit_materialized_round_trips(self, fixture_files, tmp_path):
        out = tmp_path / "closure.ttl"
        p = ValidationPipeline(config_for(fixture_files / "infusion_pump.nt", emit_materialized=out))
        p.run()
        graph, leftover = triples_to_abox(load_file(out))
        assert leftover == []
        assert graph.assertions == p.result.closure.assertions

    @pytest.mark.integration
    def test_provenance_file(self, fixture_files, tmp_path, C, ex):
        prov = tmp_path / "closure.prov"
        p = ValidationPipeline(config_for(fixture_files / "infusion_pump.nt", provenance_path=prov))
        p.run()
        lines = prov.read_text(encoding="utf-8").splitlines()
        assert len(lines) == len(p.provenance) == p.result.stats.derived_assertions
        expected = f"gci:SDAI\t{ex('sd1').n3()} <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> " \
                   f"{C('SDAI').n3()} ."
        assert expected in lines

    @pytest.mark.integration
    def test_assume_risk_sda(self, fixture_files, tmp_path, C, ex):
        prov = tmp_path / "closure.prov"
        p = ValidationPipeline(config_for(fixture_files / "infusion_pump.nt", assume_risk_sda=True,
                                          provenance_path=prov))
        report = p.run()
        assert exit_code_for(report) == ExitCode.CONFORMS
        closure = p.result.closure
        assert closure.instances(C("RiskSDA")) == {ex(f"sd{i}") for i in range(5)}
        assert closure.instances(C("RiskSDAI")) == {ex("sd1"), ex("sd2"), ex("sd4")}
        assert p.provenance[concept_assertion(C("RiskSDA"), ex("sd0"))] == "assume-risk-sda"

    @pytest.mark.integration
    def test_duplicate_inputs_merge(self, fixture_files):
        report, code = run_validate(config_for(fixture_files / "infusion_pump.nt",
                                               fixture_files / "infusion_pump.ttl"))
        assert code == ExitCode.CONFORMS
        assert report.stats.input_assertions == 30 + 18

    @pytest.mark.integration
    def test_blank_nodes_kept_apart_across_inputs(self, tmp_path, R):
        harm = R("hasHarm").value
        first, second = tmp_path / "a.nt", tmp_path / "b.nt"
        first.write_text(f"_:r <{harm}> <http://example.org/pump#h1> .\n", encoding="utf-8")
        second.write_text(f"_:r <{harm}> <http://example.org/pump#h2> .\n", encoding="utf-8")
        p = ValidationPipeline(config_for(first, second))
        submission = p.load_submission(p.build_ontology())
        subjects = {a.subject for a in submission.graph}
        assert len(subjects) == 2
        assert all(s.kind == BLANK for s in subjects)

    @pytest.mark.integration
    def test_leftover_triples_counted(self, fixture_files, tmp_path):
        extra = tmp_path / "notes.nt"
        extra.write_text("<http://example.org/pump#cr> <http://example.org/notes#seeAlso> "
                         "<http://example.org/pump#doc> .\n", encoding="utf-8")
        report, code = run_validate(config_for(fixture_files / "infusion_pump.nt", extra))
        assert code == ExitCode.CONFORMS
        assert report.leftover_triple_count == 1

    @pytest.mark.integration
    def test_extension_on_conforming_example(self, fixture_files):
        """Test that the critical-risk extension accepts the example as is"""
        report, code = run_validate(config_for(
            fixture_files / "infusion_pump.nt",
            extra_ontologies=[fixture_files / "critical_risk.axioms"],
            extra_shapes=[fixture_files / "critical_risk.shapes"]))
        assert code == ExitCode.CONFORMS
        assert report.focus_counts["E1"] == 1

    @pytest.mark.integration
    def test_shape_files_numbered_across_files(self, fixture_files, tmp_path, caplog):
        second = tmp_path / "second.shapes"
        second.write_text("(constraint RiskLevel (some hasSeverity top))\n", encoding="utf-8")
        config = config_for(fixture_files / "infusion_pump.nt",
                            extra_ontologies=[fixture_files / "critical_risk.axioms"],
                            extra_shapes=[fixture_files / "critical_risk.shapes", second])
        pipe = ValidationPipeline(config)
        caplog.set_level("DEBUG", logger="pipeline")
        schema = pipe.build_schema(pipe.build_ontology())
        ids = [c.id for c in schema.constraints]
        assert ids[-2:] == ["E1", "E2"]
        assert len(ids) == len(set(ids))
        assert f"E2 from {second}: (constraint RiskLevel (geq 1 hasSeverity top))" in caplog.text


class TestSideCommands:
    """Test materialize, ps-gen and distill helpers"""

    @pytest.mark.integration
    def test_run_materialize(self, fixture_files, tmp_path, fixture_closure):
        out = tmp_path / "closure.nt"
        result = run_materialize(config_for(fixture_files / "infusion_pump.ttl"), out)
        assert result.clashes == []
        graph, _ = triples_to_abox(load_file(out))
        assert graph.assertions == fixture_closure.assertions

    @pytest.mark.integration
    def test_ps_gen(self, tmp_path):
        dsl_path, nt_path = ps_gen(PsConfig(3, 3), tmp_path / "ps")
        assert dsl_path.name == "ps.axioms" and nt_path.name == "ps.nt"
        axioms = parse_axiom_dsl(dsl_path.read_text(encoding="utf-8"))
        # nine products plus transitivity of gt
        assert len(axioms) == 10
        abox, leftover = triples_to_abox(load_file(nt_path))
        assert leftover == []
        # six magnitude typings and four gt edges; labels exist only for PS(5,5)
        assert len(abox) == 10
        assert abox.literal_triples == set()

    @pytest.mark.integration
    def test_distill(self, fixture_files, tmp_path):
        out = tmp_path / "distilled.nt"
        doc = distill(fixture_files / "infusion_pump.html", out)
        assert len(doc.triples) == 30 + 21
        assert len(out.read_text(encoding="utf-8").splitlines()) == 30 + 21

    @pytest.mark.integration
    def test_write_graph_defaults_to_ntriples(self, fixture_graph, tmp_path):
        submission, _ = fixture_graph
        out = tmp_path / "closure.out"
        write_graph(out, submission)
        assert out.read_text(encoding="utf-8").splitlines()[0].endswith(" .")
