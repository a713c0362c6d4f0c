"""Unit tests for the pydantic wire and configuration models."""

import pytest
from pydantic import ValidationError

from affine_tl.models import (
    CliConfig,
    DiagramModel,
    SuiteSpec,
    SuitesConfig,
    VerificationReport,
)


def test_report_failures():
    report = VerificationReport(suite="relations", rank=2, max_len=0)
    assert report.passed
    report.add_failure([1, 2], "mismatch")
    assert not report.passed
    assert report.failures[0].word == [1, 2]


def test_report_merge():
    first = VerificationReport(suite="s", rank=3, max_len=2, checked=4)
    second = VerificationReport(suite="s", rank=3, max_len=5, checked=1)
    second.add_failure([3], "bad")
    merged = first.merge(second)
    assert merged.checked == 5
    assert merged.max_len == 5
    assert len(merged.failures) == 1


def test_report_rank_bound():
    with pytest.raises(ValidationError):
        VerificationReport(suite="s", rank=1, max_len=0)


def test_diagram_loops():
    edges = [{"ends": ["t1", "b1"]}]
    assert DiagramModel(rank=2, edges=edges, loops=2).loops == 2
    assert DiagramModel(rank=2, edges=edges, loops=[["ct", "ot"]]).loops == [
        ["ct", "ot"]
    ]
    with pytest.raises(ValidationError):
        DiagramModel(rank=2, edges=edges, loops=-1)


@pytest.mark.parametrize(
    "data",
    [
        {"name": "relations", "ranks": []},
        {"name": "relations", "ranks": [1]},
        {"name": "relations", "ranks": [2], "max_len": -1},
        {"name": "relations", "ranks": [2], "samples": -5},
    ],
)
def test_suite_spec_rejects(data):
    with pytest.raises(ValidationError):
        SuiteSpec.model_validate(data)


def test_suites_config_defaults():
    config = SuitesConfig.model_validate(
        {"suites": [{"name": "relations", "ranks": [2, 3]}]}
    )
    spec = config.suites[0]
    assert spec.enabled
    assert spec.max_len == 6
    assert spec.samples == 0


def test_cli_config():
    config = CliConfig(command="mul", rank=3, words=["1 2"])
    assert config.output_format == "text"
    with pytest.raises(ValidationError):
        CliConfig(command="mul", output_format="pdf")
    with pytest.raises(ValidationError):
        CliConfig(command="verify", workers=0)
