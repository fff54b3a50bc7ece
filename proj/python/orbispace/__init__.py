"""Exact decision engine for orbit spaces of compact monomial group actions.

Thin wrapper over the C++ core. The heavy commands take and return JSON
documents with the same schema as the command-line tool.
"""

import json

from orbispace._core import (  # noqa: F401
    EngineError,
    class_relation,
    equivalence_classes,
    indecomposable_components,
    integer_kernel,
    is_q_stable,
    kernel_basis,
    rref,
    run,
    smith_normal_form,
)

__all__ = [
    "EngineError",
    "analyze",
    "class_relation",
    "component_group",
    "equivalence_classes",
    "indecomposable_components",
    "integer_kernel",
    "is_q_stable",
    "kernel_basis",
    "reduce_to_2stable",
    "rref",
    "run",
    "smith_normal_form",
]


def _run_checked(command, document, **kwargs):
    if isinstance(document, dict):
        document = json.dumps(document)
    report, code = run(command, document, **kwargs)
    report = json.loads(report)
    if code != 0:
        err = report.get("error", {})
        raise EngineError(f"{err.get('code', 'Error')}: {err.get('message', command)}")
    return report


def analyze(document, **kwargs):
    """Full decision pipeline; returns the verdict with its certificate."""
    return _run_checked("analyze", document, **kwargs)["verdict"]


def reduce_to_2stable(document, **kwargs):
    """Elimination pipeline; returns {"reduction_trace": [...], "final": document}."""
    report = _run_checked("reduce", document, **kwargs)
    return {"reduction_trace": report["reduction_trace"], "final": report["final"]}


def component_group(document, **kwargs):
    """Coset enumeration of the component group."""
    report = _run_checked("group", document, **kwargs)
    return report
