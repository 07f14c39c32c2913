"""scikit-learn style wrappers.

The estimators take a vote matrix ``X`` of shape ``(n_items, 3)`` (labels
``"a"``/``"b"``, or ``0``/``1`` with ``1`` meaning beta), build its decision
sketch in ``fit`` and expose results as trailing-underscore attributes. A
ready-made :class:`~trioeval.sketch.DecisionSketch` is accepted in place of
``X``. Nothing is learned from labels; ``y`` is accepted and ignored so the
objects sit in pipelines.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .evaluators import decode as decode_outcome
from .evaluators import independent_evaluate, mv_evaluate
from .sketch import DecisionSketch
from .variety import project


def check_votes(X) -> np.ndarray:
    """Validate a vote matrix and return pattern indices ``0..7``.

    Pattern index bits are classifier 1 (most significant) to 3, beta = 1.
    """
    arr = np.asarray(X)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected votes of shape (n_items, 3), got {arr.shape}")
    if arr.dtype.kind in "USO":
        low = np.char.lower(np.char.strip(arr.astype(str)))
        bad = ~np.isin(low, ["a", "b"])
        if bad.any():
            r, c = np.argwhere(bad)[0]
            raise ValueError(f"invalid vote {arr[r, c]!r} at item {r}, classifier {c + 1}")
        bits = (low == "b").astype(np.int64)
    else:
        arr = check_array(arr, dtype=None, ensure_min_samples=0)
        if not np.isin(arr, [0, 1]).all():
            raise ValueError("numeric votes must be 0 (alpha) or 1 (beta)")
        bits = arr.astype(np.int64)
    return bits[:, 0] * 4 + bits[:, 1] * 2 + bits[:, 2]


def _sketch_from(X, sketch: DecisionSketch | None = None) -> DecisionSketch:
    if isinstance(X, DecisionSketch):
        return X.copy() if sketch is None else sketch.merge(X)
    out = sketch.copy() if sketch is not None else DecisionSketch()
    return out.update_many(check_votes(X))


class MajorityVoteEvaluator(BaseEstimator):
    """Prevalence and accuracies assuming the majority vote is the true label.

    Attributes after ``fit``: ``sketch_``, ``estimate_``, ``prevalence_``,
    ``accuracies_`` (shape ``(3, 2)``, columns alpha/beta, ``nan`` if undefined).
    """

    def __init__(self, exact=True):
        self.exact = exact

    def fit(self, X, y=None):
        self.sketch_ = _sketch_from(X)
        self.estimate_ = mv_evaluate(self.sketch_, self.exact)
        self.prevalence_ = self.estimate_.prevalence
        self.accuracies_ = np.array(
            [
                [np.nan if a is None else float(a), np.nan if b is None else float(b)]
                for a, b in zip(self.estimate_.acc_alpha, self.estimate_.acc_beta)
            ]
        )
        return self


class IndependentEvaluator(BaseEstimator):
    """Exact evaluation assuming sample-independent errors.

    ``fit`` solves for the two-point evaluation variety. ``outcome_`` holds the
    full result; ``points_`` the two points (empty on failure) and
    ``failure_`` the failure mode (``None`` on success). With a ``decode`` hint
    that singles out one point, ``point_``, ``prevalence_`` and
    ``accuracies_`` are also set.

    ``partial_fit`` adds votes to the existing sketch and re-solves.
    """

    def __init__(self, exact=True, decode=None, prevalence_hint=None):
        self.exact = exact
        self.decode = decode
        self.prevalence_hint = prevalence_hint

    def _solve(self):
        self.outcome_ = independent_evaluate(self.sketch_, self.exact)
        self.points_ = list(self.outcome_.points or [])
        self.failure_ = self.outcome_.failure
        for attr in ("point_", "prevalence_", "accuracies_"):
            if hasattr(self, attr):
                delattr(self, attr)
        if self.decode and self.outcome_.ok:
            chosen = decode_outcome(self.outcome_, self.decode, self.prevalence_hint)
            if len(chosen) == 1:
                self.point_ = chosen[0]
                self.prevalence_ = chosen[0].prevalence
                self.accuracies_ = np.array(
                    [[float(a), float(b)] for a, b in zip(chosen[0].acc_alpha, chosen[0].acc_beta)]
                )
        return self

    def fit(self, X, y=None):
        self.sketch_ = _sketch_from(X)
        return self._solve()

    def partial_fit(self, X, y=None):
        self.sketch_ = _sketch_from(X, getattr(self, "sketch_", None))
        return self._solve()


class VarietyDistance(TransformerMixin, BaseEstimator):
    """Distance of evaluation points to the containing variety of the fitted sketch.

    ``transform`` maps an array of 7-vectors
    ``(P_a, P_1a, P_1b, P_2a, P_2b, P_3a, P_3b)`` to a column of distances.
    """

    def __init__(self, grid=512, refinements=40):
        self.grid = grid
        self.refinements = refinements

    def fit(self, X, y=None):
        self.sketch_ = _sketch_from(X)
        return self

    def transform(self, X):
        check_is_fitted(self, "sketch_")
        pts = check_array(X, dtype=float)
        if pts.shape[1] != 7:
            raise ValueError(f"expected 7 coordinates per point, got {pts.shape[1]}")
        out = [project(p, self.sketch_, self.grid, self.refinements).distance for p in pts]
        return np.array(out).reshape(-1, 1)
