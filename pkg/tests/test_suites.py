import pytest

from volut.config import VolutConfig
from volut.errors import PreconditionError, ResourceCapExceeded, ValidationReport
from volut.suites import (
    BATTERIES,
    Status,
    SuiteReport,
    dagger_battery,
    linrel_battery,
    prof_battery,
    run_suite,
    run_suites,
)


@pytest.fixture
def light():
    return VolutConfig(samples=20, seed=3)


def test_guard_turns_caps_into_skips():
    report = SuiteReport("demo", 0)
    with report.guard("capped"):
        raise ResourceCapExceeded("demo", 10, 20)
    with report.guard("broken"):
        raise PreconditionError("no", witness="a")
    with report.guard("fine"):
        report.add("fine", True)
    assert [c.status for c in report.checks] == [Status.SKIP, Status.FAIL, Status.PASS]
    assert report.checks[0].witness == {"limit": 10, "required": 20}
    assert report.checks[1].witness == "a"
    assert not report.ok


def test_record_keeps_the_first_witness():
    report = SuiteReport("demo", 0)
    bad = ValidationReport("x")
    bad.add("unit", "broken", "f")
    report.record("good", ValidationReport("y"))
    report.record("bad", bad)
    assert report.count(Status.PASS) == 1
    assert report.failures()[0].witness["witness"] == "f"
    document = report.to_dict()
    assert document["counts"] == {"pass": 1, "fail": 1, "skip": 0}
    assert "witness: " in report.render_text()


def test_linrel_suite(light):
    report = linrel_battery(light)
    assert report.ok
    # adjoints of composites agree in finite dimension, so no strict witness exists
    assert report.checks[-1].status is Status.SKIP


def test_dagger_suite(light):
    report = dagger_battery(light)
    assert report.ok
    assert report.count(Status.PASS) >= 5


def test_prof_suite_on_a_few_cases(light):
    report = prof_battery(light, cases=3)
    assert report.ok, report.render_text()


def test_run_suite_times_the_battery(light):
    report = run_suite("linrel", light)
    assert report.suite == "linrel"
    assert report.wall_time > 0


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nonsense")


def test_all_expands_in_canonical_order(monkeypatch, light):
    monkeypatch.setattr(
        "volut.suites.run_suite", lambda name, config=None: SuiteReport(name, config.seed)
    )
    reports = run_suites(["all"], light)
    assert [r.suite for r in reports] == list(BATTERIES)
    assert all(r.seed == 3 for r in reports)
