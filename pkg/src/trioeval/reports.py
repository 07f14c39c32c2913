"""JSON documents exchanged by the CLI: sketches, truth files and reports."""

from __future__ import annotations

import json
from importlib import resources

from . import __version__
from .diagnostics import diagnostics_report
from .evaluators import decode, independent_evaluate, mv_evaluate
from .forward import (
    correlated_trio_frequencies,
    materialization_size,
    minimal_test_size,
    synthesize_sketch,
)
from .numerics import PRNG_NAME, format_scalar
from .points import CorrelationSet, EvaluationPoint
from .sketch import DecisionSketch
from .variety import blind_spot_report, project, residuals

SCHEMA_VERSION = 1
SCHEMAS = ("sketch", "truth", "report", "projection", "diagnostics")


def load_schema(name: str) -> dict:
    text = resources.files("trioeval").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def versions() -> dict:
    return {
        "trioeval": __version__,
        "prng": PRNG_NAME,
        "schemas": {name: SCHEMA_VERSION for name in SCHEMAS},
    }


def read_truth(doc: dict, exact: bool = True) -> tuple[EvaluationPoint, CorrelationSet]:
    return EvaluationPoint.from_dict(doc, exact), CorrelationSet.from_dict(doc.get("corr"), exact)


def evaluation_report(sketch: DecisionSketch, exact: bool = True, hint=None, hint_value=None) -> dict:
    mv = mv_evaluate(sketch, exact)
    outcome = independent_evaluate(sketch, exact)
    independent = outcome.to_dict()
    if hint:
        independent["decoded"] = [p.to_dict() for p in decode(outcome, hint, hint_value)]
    return {
        "n": sketch.n,
        "mv": mv.to_dict(),
        "independent": independent,
        "diagnostics": diagnostics_report(sketch, exact),
    }


def synth_document(point: EvaluationPoint, corr: CorrelationSet, exact: bool = True) -> dict:
    """Sketch at the minimal test size plus the generating frequencies."""
    freqs = correlated_trio_frequencies(point, corr)
    sketch = synthesize_sketch(point, corr)
    doc = sketch.to_dict()
    doc["frequencies"] = {e: format_scalar(v if exact else float(v)) for e, v in freqs.items()}
    doc["minimal_test_size"] = minimal_test_size(freqs)
    doc["materialization_size"] = materialization_size(point, corr)
    return doc


def projection_report(point: EvaluationPoint, sketch: DecisionSketch, grid: int, refinements: int) -> dict:
    proj = project(point, sketch, grid, refinements)
    out = proj.to_dict()
    out["residuals_at_input"] = residuals(point, sketch).to_dict()
    return out


def blind_spots_document(point: EvaluationPoint, sketch: DecisionSketch, threshold) -> list:
    rows = blind_spot_report(point, sketch, threshold)
    return [
        {k: v if k == "classifier" or isinstance(v, bool) else format_scalar(v) for k, v in row.items()}
        for row in rows
    ]
