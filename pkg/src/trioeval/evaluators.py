"""Majority-voting and independent-model evaluators.

Both read nothing but the decision sketch. Majority voting always answers with
numbers in ``[0, 1]``. The independent evaluator solves the sketch's polynomial
system exactly and either returns the two points of the evaluation variety or
says why it cannot: empty variety, complex roots, points outside the unit cube,
or (exact mode) a square root that does not resolve to a rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .numerics import FLOAT_TOL, Scalar, format_scalar, is_exact, is_rational_square, rational_sqrt
from .points import PAIRS, EvaluationPoint
from .sketch import as_frequencies, statistics

EMPTY_VARIETY = "EmptyVariety"
COMPLEX_SOLUTION = "ComplexSolution"
OUTSIDE_UNIT_CUBE = "OutsideUnitCube"
UNRESOLVED_SQUARE_ROOT = "UnresolvedSquareRoot"
FAILURE_KINDS = (EMPTY_VARIETY, COMPLEX_SOLUTION, OUTSIDE_UNIT_CUBE, UNRESOLVED_SQUARE_ROOT)


@dataclass(frozen=True)
class MVEstimate:
    """Majority-vote estimates; an accuracy is ``None`` when its label never won."""

    prevalence: Scalar
    acc_alpha: tuple
    acc_beta: tuple

    def fields(self) -> list:
        return [self.prevalence, *self.acc_alpha, *self.acc_beta]

    def to_dict(self) -> dict:
        fmt = lambda x: None if x is None else format_scalar(x)  # noqa: E731
        return {
            "prevalence": fmt(self.prevalence),
            "acc": {
                str(i + 1): {"a": fmt(self.acc_alpha[i]), "b": fmt(self.acc_beta[i])}
                for i in range(3)
            },
        }


@dataclass(frozen=True)
class FailureMode:
    kind: str
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "detail": _jsonable(self.detail)}


@dataclass(frozen=True)
class EvaluationOutcome:
    """Either two variety points or a failure mode.

    ``radicands`` carries the intermediate quantities (triple moment, delta
    product, discriminant, squared g values) so a caller can audit the verdict.
    """

    points: Optional[tuple]
    failure: Optional[FailureMode]
    exact: bool
    radicands: dict

    @property
    def status(self) -> str:
        return "points" if self.points is not None else "failure"

    @property
    def ok(self) -> bool:
        return self.points is not None

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "points": [p.to_dict() for p in self.points] if self.points else [],
            "failure": self.failure.to_dict() if self.failure else None,
            "radicands": _jsonable(self.radicands),
            "exact": self.exact,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (Fraction, float)) or (isinstance(obj, int) and not isinstance(obj, bool)):
        return format_scalar(obj)
    return obj


def mv_evaluate(data, exact: bool | None = None) -> MVEstimate:
    """Majority-vote evaluation.

    The prevalence is the frequency with which alpha won the vote. A classifier
    is counted wrong when it is the lone dissenter, so its alpha accuracy is
    ``1 - f(lone beta vote) / P_mv``.
    """
    f = as_frequencies(data, exact)
    pa = f["aaa"] + f["aab"] + f["aba"] + f["baa"]
    pb = 1 - pa
    lone_beta = ("baa", "aba", "aab")
    lone_alpha = ("abb", "bab", "bba")
    acc_a = tuple(None if pa == 0 else 1 - f[e] / pa for e in lone_beta)
    acc_b = tuple(None if pb == 0 else 1 - f[e] / pb for e in lone_alpha)
    return MVEstimate(pa, acc_a, acc_b)


def sister_point(p: EvaluationPoint) -> EvaluationPoint:
    """The other variety point: swap label roles and complement accuracies."""
    return EvaluationPoint(
        1 - p.prevalence,
        tuple(1 - b for b in p.acc_beta),
        tuple(1 - a for a in p.acc_alpha),
    )


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _canonical(points) -> tuple:
    return tuple(sorted(points, key=lambda p: (p.prevalence, p.acc_alpha[0])))


def _point_from(root, g, f_beta) -> EvaluationPoint:
    acc_b = tuple(f_beta[i] + root * g[i] for i in range(3))
    acc_a = tuple((1 - f_beta[i]) + (1 - root) * g[i] for i in range(3))
    return EvaluationPoint(root, acc_a, acc_b)


def independent_evaluate(data, exact: bool | None = None) -> EvaluationOutcome:
    """Solve for the evaluation variety of a sample-independent trio.

    With ``D`` the product of the three pair deltas and ``T`` the triple moment
    of the beta votes, the alpha prevalence solves a quadratic whose roots are
    ``1/2 +- T / (2 sqrt(T^2 + 4 D))``. Each root fixes ``P_a (1 - P_a)`` and so
    the squared accuracy offsets ``g_i``; the signs of the deltas fix the
    relative signs of the ``g_i`` and the sign of ``T`` the overall one.
    """
    freqs = as_frequencies(data, exact)
    exact = is_exact(next(iter(freqs.values())))
    st = statistics(freqs)
    delta = st.delta
    T = st.triple_delta
    is_zero = (lambda x: x == 0) if exact else (lambda x: abs(x) < FLOAT_TOL)

    D = delta[(0, 1)] * delta[(0, 2)] * delta[(1, 2)]
    disc = T * T + 4 * D
    radicands = {
        "triple_delta": T,
        "delta": {f"{i + 1}{j + 1}": delta[(i, j)] for i, j in PAIRS},
        "delta_product": D,
        "discriminant": disc,
    }

    def fail(kind, **detail):
        return EvaluationOutcome(None, FailureMode(kind, detail), exact, radicands)

    zero_pairs = [f"{i + 1}{j + 1}" for i, j in PAIRS if is_zero(delta[(i, j)])]
    if zero_pairs:
        return fail(EMPTY_VARIETY, reason="zero pair delta", pairs=zero_pairs)
    if is_zero(disc):
        return fail(EMPTY_VARIETY, reason="zero discriminant", discriminant=disc)
    if disc < 0:
        return fail(COMPLEX_SOLUTION, reason="negative discriminant", discriminant=disc)

    root_disc = rational_sqrt(disc) if exact else math.sqrt(disc)
    unresolved = root_disc is None
    if unresolved:
        root_disc = math.sqrt(disc)
        T_work, f_beta = float(T), tuple(float(x) for x in st.f_beta)
        delta_work = {p: float(v) for p, v in delta.items()}
    else:
        T_work, f_beta, delta_work = T, st.f_beta, delta

    half = Fraction(1, 2) if not unresolved and exact else 0.5
    shift = T_work / (2 * root_disc)
    roots = (half - shift, half + shift)
    q = roots[0] * (1 - roots[0])
    if is_zero(q):
        return fail(EMPTY_VARIETY, reason="degenerate prevalence", roots=list(roots))

    d12, d13, d23 = delta_work[(0, 1)], delta_work[(0, 2)], delta_work[(1, 2)]
    g_sq = (d12 * d13 / (d23 * q), d12 * d23 / (d13 * q), d13 * d23 / (d12 * q))
    radicands["g_squared"] = list(g_sq)
    if any(v < 0 for v in g_sq):
        return fail(COMPLEX_SOLUTION, reason="negative squared accuracy offset", g_squared=list(g_sq))

    if unresolved or not exact:
        mags = tuple(math.sqrt(v) for v in g_sq)
    else:
        mags = tuple(rational_sqrt(v) for v in g_sq)
        if any(m is None for m in mags):
            unresolved = True
            mags = tuple(math.sqrt(v) for v in g_sq)
            f_beta = tuple(float(x) for x in f_beta)
            roots = tuple(float(r) for r in roots)

    rel = (1, _sign(d12), _sign(d13))
    points = []
    for root in roots:
        tie = T_work == 0 if exact and not unresolved else abs(T_work) < FLOAT_TOL
        if tie:
            # both roots are 1/2; the two variety points differ by a global flip
            signs = (1, -1) if root is roots[0] else ()
        else:
            g_prod_sign = _sign(T_work) * _sign(q) * _sign(2 * root - 1)
            signs = (g_prod_sign * _sign(d12 * d13),)
        for s in signs:
            g = tuple(s * rel[i] * mags[i] for i in range(3))
            points.append(_point_from(root, g, f_beta))
    points = _canonical(points)

    if unresolved:
        return fail(
            UNRESOLVED_SQUARE_ROOT,
            radicand=disc,
            approximate_points=[p.as_vector() for p in points],
            outside_unit_cube=not all(p.in_unit_cube() for p in points),
        )
    tol = 0 if exact else FLOAT_TOL
    outside = [p for p in points if not p.in_unit_cube(tol)]
    if outside:
        return fail(
            OUTSIDE_UNIT_CUBE,
            points=[p.as_vector() for p in points],
        )
    if not exact:
        # rounding can push a boundary value such as an accuracy of 1 just outside
        points = tuple(p.clipped() for p in points)
    return EvaluationOutcome(points, None, exact, radicands)


MAJORITY_COMPETENT = "assume-majority-competent"
PREVALENCE_NEAR = "assume-prevalence-near"


def decode(outcome: EvaluationOutcome, hint: str, value=None) -> list:
    """Pick variety points using side information.

    ``assume-majority-competent`` keeps points where at least two classifiers
    have ``P_ia + P_ib > 1``; ``assume-prevalence-near`` keeps the point whose
    prevalence is closest to ``value``.
    """
    if not outcome.ok:
        return []
    if hint == MAJORITY_COMPETENT:
        return [p for p in outcome.points if sum(g > 0 for g in p.g()) >= 2]
    if hint == PREVALENCE_NEAR:
        if value is None:
            raise ValueError(f"{PREVALENCE_NEAR} needs a prevalence value")
        best = min(abs(p.prevalence - value) for p in outcome.points)
        return [p for p in outcome.points if abs(p.prevalence - value) == best][:1]
    raise ValueError(f"unknown decoding hint {hint!r}")


def prevalence_branches(data, exact: bool | None = None) -> tuple:
    """The two prevalence roots as ``(1/2 - s, 1/2 + s)``, ``s = T / (2 sqrt(disc))``.

    Unlike the canonical (sorted) order of :func:`independent_evaluate`, the
    order here follows the sign in front of ``s``, so each entry is a fixed
    algebraic function of the frequencies. Returns floats when the square root
    does not resolve; ``None`` when the discriminant is not positive.
    """
    freqs = as_frequencies(data, exact)
    st = statistics(freqs)
    d = st.delta
    disc = st.triple_delta**2 + 4 * d[(0, 1)] * d[(0, 2)] * d[(1, 2)]
    if disc <= 0:
        return None
    root = rational_sqrt(disc) if is_exact(disc) else None
    if root is None:
        s = float(st.triple_delta) / (2 * math.sqrt(float(disc)))
        return (0.5 - s, 0.5 + s)
    s = st.triple_delta / (2 * root)
    return (Fraction(1, 2) - s, Fraction(1, 2) + s)
