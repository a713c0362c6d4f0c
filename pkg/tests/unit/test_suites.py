"""Unit tests for suite configuration loading and the suite manager."""

import json

import pytest

from affine_tl.errors import ConfigError
from affine_tl.harness import SUITES
from affine_tl.models import SuiteSpec
from affine_tl.suites import DEFAULT_CONFIG_PATH, SuiteManager, SuiteStatus, load_config


def write_config(path, suites):
    path.write_text(json.dumps({"version": "1.0", "suites": suites}))
    return str(path)


class TestLoadConfig:
    """Reading and validating suites.json files."""

    def test_bundled_config(self):
        config = load_config(DEFAULT_CONFIG_PATH)
        names = [spec.name for spec in config.suites]
        assert set(names) == set(SUITES)
        ranks = {spec.name: spec.ranks for spec in config.suites}
        assert ranks["associativity"] == [2, 3, 4]

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(str(tmp_path / "absent.json"))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "suites.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_schema_error(self, tmp_path):
        path = write_config(tmp_path / "suites.json", [{"name": "relations"}])
        with pytest.raises(ConfigError):
            load_config(path)

    def test_unknown_suite(self, tmp_path):
        path = write_config(
            tmp_path / "suites.json", [{"name": "bogus", "ranks": [2]}]
        )
        with pytest.raises(ConfigError):
            load_config(path)


class TestSuiteManager:
    """Planning and executing runs."""

    specs = [
        SuiteSpec(name="relations", ranks=[2, 3], max_len=0),
        SuiteSpec(name="injectivity", ranks=[2], max_len=3),
        SuiteSpec(name="confluence", ranks=[2], max_len=6, enabled=False),
    ]

    def test_rejects_zero_workers(self):
        with pytest.raises(ConfigError):
            SuiteManager(workers=0)

    def test_plan_skips_disabled(self):
        manager = SuiteManager(workers=1)
        runs = manager.plan(self.specs)
        assert [run.name for run in runs] == [
            "relations[n=2]",
            "relations[n=3]",
            "injectivity[n=2]",
        ]
        assert all(run.status is SuiteStatus.QUEUED for run in runs)

    def test_plan_only_includes_disabled(self):
        manager = SuiteManager(workers=1)
        runs = manager.plan(self.specs, only=["confluence"], max_len=4, ranks=[3])
        assert [(run.suite, run.rank, run.max_len) for run in runs] == [
            ("confluence", 3, 4)
        ]

    def test_plan_only_unknown(self):
        with pytest.raises(ConfigError):
            SuiteManager(workers=1).plan(self.specs, only=["bogus"])

    def test_execute_inline(self):
        manager = SuiteManager(workers=1)
        manager.plan(self.specs)
        runs = manager.execute()
        assert all(run.is_finished for run in runs)
        assert all(run.duration_seconds is not None for run in runs)
        assert manager.all_passed
        assert manager.failed_runs == []
        assert len(manager.reports()) == 3
        summary = manager.summary()
        assert "VERIFICATION SUMMARY" in summary
        assert summary.endswith("3/3 run(s) passed")

    def test_execute_pool_keeps_order(self):
        manager = SuiteManager(workers=2)
        manager.plan(self.specs)
        runs = manager.execute()
        assert [run.name for run in runs] == [
            "relations[n=2]",
            "relations[n=3]",
            "injectivity[n=2]",
        ]
        assert [report.rank for report in manager.reports()] == [2, 3, 2]
        assert manager.all_passed

    def test_error_is_recorded(self, monkeypatch):
        def explode(run):
            raise RuntimeError("boom")

        monkeypatch.setattr("affine_tl.suites._execute", explode)
        manager = SuiteManager(workers=1)
        manager.plan(self.specs[:1], ranks=[2])
        (run,) = manager.execute()
        assert run.status is SuiteStatus.ERROR
        assert run.error_message == "RuntimeError: boom"
        assert not manager.all_passed
        assert manager.failed_runs == [run]
        assert "ERROR RuntimeError: boom" in manager.summary()

    def test_nothing_planned(self):
        manager = SuiteManager(workers=1)
        assert manager.execute() == []
        assert not manager.all_passed
