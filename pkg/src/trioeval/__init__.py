"""Algebraic evaluation of three binary classifiers from unlabeled decisions."""

__version__ = "0.1.0"

from .errors import TrioEvalError  # noqa: E402
from .evaluators import (  # noqa: E402
    EvaluationOutcome,
    FailureMode,
    MVEstimate,
    decode,
    independent_evaluate,
    is_rational_square,
    mv_evaluate,
    sister_point,
)
from .estimators import IndependentEvaluator, MajorityVoteEvaluator, VarietyDistance  # noqa: E402
from .forward import (  # noqa: E402
    correlated_trio_frequencies,
    independent_frequencies,
    materialize_stream,
    sample_stream,
    synthesize_sketch,
)
from .points import CorrelationSet, EvaluationPoint, GroundTruthPoint  # noqa: E402
from .sketch import DecisionSketch, ingest_decisions, statistics, truth_statistics  # noqa: E402
from .variety import project, residuals  # noqa: E402

__all__ = [
    "CorrelationSet",
    "DecisionSketch",
    "EvaluationOutcome",
    "EvaluationPoint",
    "FailureMode",
    "GroundTruthPoint",
    "IndependentEvaluator",
    "MVEstimate",
    "MajorityVoteEvaluator",
    "TrioEvalError",
    "VarietyDistance",
    "correlated_trio_frequencies",
    "decode",
    "independent_evaluate",
    "independent_frequencies",
    "ingest_decisions",
    "is_rational_square",
    "materialize_stream",
    "mv_evaluate",
    "project",
    "residuals",
    "sample_stream",
    "sister_point",
    "statistics",
    "synthesize_sketch",
    "truth_statistics",
]
