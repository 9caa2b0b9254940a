from __future__ import annotations

import json

from timelike.suite import PROPERTIES, SUITES, run_property, run_suite


def test_every_suite_listed():
    assert set(SUITES) == set(PROPERTIES)


def test_report_is_reproducible_and_omits_wall_time():
    a = run_suite("desitter", 7, 30)
    a.wall_time = 1.0
    b = run_suite("desitter", 7, 30)
    b.wall_time = 2.0
    assert a.to_json() == b.to_json()
    assert a.to_csv() == b.to_csv()
    assert "wall" not in a.to_json()
    doc = json.loads(a.to_json())
    assert doc["seed"] == 7 and doc["passed"]


def test_seed_changes_instances():
    a = run_property("funk.dual_form", 1, 20)
    b = run_property("funk.dual_form", 2, 20)
    assert a.passed and b.passed
    assert a.max_violation != b.max_violation


def test_small_runs_of_each_suite_pass():
    for suite in SUITES:
        report = run_suite(suite, 3, 15)
        assert report.passed, [p for p in report.properties if not p.passed]
