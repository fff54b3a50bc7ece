"""Smoke tests for the python bindings.

Run either against an installed `orbispace` package or directly against the
`_core` extension in the CMake build tree (PYTHONPATH pointing at both the
build dir and python/).
"""

import json
import os
import pathlib

import pytest

try:
    import orbispace as eng
except ImportError:
    import _core as eng  # build-tree fallback: the raw extension

    def _run_checked(command, document, **kwargs):
        if isinstance(document, dict):
            document = json.dumps(document)
        report, code = eng.run(command, document, **kwargs)
        report = json.loads(report)
        assert code == 0, report
        return report

    eng.analyze = lambda doc, **kw: _run_checked("analyze", doc, **kw)["verdict"]
    eng.component_group = lambda doc, **kw: _run_checked("group", doc, **kw)

DOCS = pathlib.Path(os.environ.get("ORBISPACE_DOCS", "docs/examples"))


def load_doc(name):
    return (DOCS / name).read_text()


def test_q_stability():
    assert eng.is_q_stable([[1, 0], [0, 1], [1, 1]], 1)
    assert not eng.is_q_stable([[1, 0], [0, 1], [1, 1]], 2)
    assert eng.is_q_stable([[1, 0], [0, 1], [1, 1], [1, -1]], 2)


def test_equivalence_classes():
    assert eng.equivalence_classes([[1, 0], [1, 0], [0, 1], [1, 1]]) == [[0], [1], [2, 3]]


def test_components():
    blocks, zeros = eng.indecomposable_components([[1, 0], [2, 0], [0, 1]])
    assert blocks == [[0, 1], [2]]
    assert zeros == []


def test_class_relation():
    rel = eng.class_relation([[2, 0], [1, 0], [0, 1]], [0, 1])
    assert rel["flips"] == [1, -1]
    assert rel["exponents"] == [1, 2]


def test_linear_algebra():
    reduced, pivots = eng.rref([["1", "1"], ["2", "2"]])
    assert pivots == [0]
    assert reduced[0] == ["1", "1"]

    u, s, v = eng.smith_normal_form([[2, 0], [0, 3]])
    assert s[0][0] == 1 and s[1][1] == 6

    assert eng.integer_kernel([[1], [1]]) == [[1, -1]]


def test_group_order():
    report = eng.component_group(load_doc("g23.json"))
    assert report["coset_count"] == 24


def test_analyze_verdicts():
    verdict = eng.analyze(load_doc("g23.json"))
    assert verdict["topological"] == "yes"
    assert any(step["theorem"] == "GiHr" for step in verdict["certificate"])

    verdict = eng.analyze(load_doc("not_one_stable.json"))
    assert verdict["topological"] == "no"
    assert verdict["smooth_for_all_d"] == "no"

    verdict = eng.analyze(load_doc("scalar_three_lines.json"))
    assert verdict["smooth_for_all_d"] == "no"
    assert any(step["theorem"] == "Abel" for step in verdict["certificate"])


def test_determinism():
    doc = load_doc("rank_two_conjugation.json")
    first = eng.run("analyze", doc)
    second = eng.run("analyze", doc)
    assert first == second


def test_error_reporting():
    report, code = eng.run("analyze", "{ not valid json")
    assert code == 1
    assert json.loads(report)["error"]["code"] == "InvalidInput"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
