"""Forward models: from a chosen ground truth to sketches and streams.

The forward direction is the oracle side of the package. Given prevalence,
accuracies and (optionally) sample correlations, it produces the exact decision
event frequencies, the smallest test realising them, and labelled streams whose
sample statistics reproduce the inputs.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Mapping

import numpy as np

from .errors import IndivisibleTestSize, InfeasibleMoments
from .numerics import Scalar, lcm_of_denominators, make_rng, random_fraction
from .points import ALPHA, BETA, LABELS, PAIRS, CorrelationSet, EvaluationPoint
from .sketch import EVENTS, DecisionSketch, FrequencyVector, LabeledStream

__all__ = [
    "conditional_table",
    "correlated_pair_table",
    "correlated_trio_frequencies",
    "correlation_design",
    "delta_closed_form",
    "independent_frequencies",
    "is_feasible",
    "joint_frequencies",
    "materialization_size",
    "materialize_stream",
    "minimal_test_size",
    "random_correlations",
    "random_point",
    "sample_correlations",
    "sample_stream",
    "synthesize_sketch",
]


def _check_point(point: EvaluationPoint) -> None:
    for k, x in enumerate(point.as_vector()):
        if not 0 <= x <= 1:
            raise InfeasibleMoments(f"coordinate {k} = {x} outside [0, 1]", value=x)


def independent_frequencies(point: EvaluationPoint) -> FrequencyVector:
    """Event frequencies of a sample-independent trio.

    Each frequency is ``P_a * prod(h_i) + (1 - P_a) * prod(h'_i)`` where ``h_i``
    is the accuracy when classifier ``i`` votes the true label and its
    complement otherwise.
    """
    pa = point.prevalence
    out = {}
    for e in EVENTS:
        term_a = pa
        term_b = 1 - pa
        for i, vote in enumerate(e):
            term_a *= point.acc_alpha[i] if vote == ALPHA else 1 - point.acc_alpha[i]
            term_b *= point.acc_beta[i] if vote == BETA else 1 - point.acc_beta[i]
        out[e] = term_a + term_b
    return out


def _correct_moment(acc, corr: CorrelationSet, label: str, idx: tuple) -> Scalar:
    """Mean of the product of correctness indicators over ``idx`` given ``label``."""
    if not idx:
        return 1
    if len(idx) == 1:
        return acc[idx[0]]
    if len(idx) == 2:
        i, j = idx
        return acc[i] * acc[j] + corr.pair_value(i, j, label)
    p = acc
    return (
        p[0] * p[1] * p[2]
        + p[0] * corr.pair_value(1, 2, label)
        + p[1] * corr.pair_value(0, 2, label)
        + p[2] * corr.pair_value(0, 1, label)
        + corr.triple_value(label)
    )


def conditional_frequencies(
    point: EvaluationPoint, corr: CorrelationSet, label: str
) -> dict:
    """Frequency of each pattern among items whose true label is ``label``.

    The composite indicator ``prod(c_i) * prod(1 - c_j)`` (right voters ``i``,
    wrong voters ``j``) is expanded into signed moments of the correctness
    indicators, which are then written with accuracies and correlations.
    """
    acc = point.acc_alpha if label == ALPHA else point.acc_beta
    out = {}
    for e in EVENTS:
        right = [i for i, v in enumerate(e) if v == label]
        wrong = [i for i, v in enumerate(e) if v != label]
        total = 0
        for r in range(len(wrong) + 1):
            for extra in combinations(wrong, r):
                idx = tuple(sorted(right + list(extra)))
                m = _correct_moment(acc, corr, label, idx)
                total = total - m if r % 2 else total + m
        out[e] = total
    return out


def conditional_table(
    point: EvaluationPoint, corr: CorrelationSet | None = None, strict: bool = True
) -> dict:
    """Both labels' conditional pattern frequencies.

    With ``strict`` every entry must lie in ``[0, 1]``, which is exactly the
    condition for the table to be realisable by counts.
    """
    corr = corr if corr is not None else CorrelationSet.zero()
    table = {lab: conditional_frequencies(point, corr, lab) for lab in LABELS}
    if strict:
        _check_point(point)
        for lab in LABELS:
            for e, v in table[lab].items():
                if not 0 <= v <= 1:
                    raise InfeasibleMoments(
                        f"conditional frequency of {e} given {lab} is {v}",
                        label=lab,
                        event=e,
                        value=v,
                    )
    return table


def correlated_trio_frequencies(
    point: EvaluationPoint, corr: CorrelationSet | None = None, strict: bool = True
) -> FrequencyVector:
    """Pattern frequencies of a possibly correlated trio.

    ``strict=False`` skips the feasibility check; the result is then the value
    of the generating polynomials, which may not be realisable by any test.
    """
    table = conditional_table(point, corr, strict=strict)
    pa = point.prevalence
    return {e: pa * table[ALPHA][e] + (1 - pa) * table[BETA][e] for e in EVENTS}


def joint_frequencies(
    point: EvaluationPoint, corr: CorrelationSet | None = None, strict: bool = True
) -> dict:
    """``{(label, pattern): P_label * conditional frequency}``."""
    table = conditional_table(point, corr, strict=strict)
    return {
        (lab, e): point.label_prevalence(lab) * table[lab][e]
        for lab in LABELS
        for e in EVENTS
    }


def correlated_pair_table(
    prevalence, acc_i, acc_j, gamma_alpha, gamma_beta
) -> dict:
    """The four vote-pair frequencies of a correlated classifier pair.

    ``acc_i`` and ``acc_j`` are ``(alpha accuracy, beta accuracy)`` pairs. Keys
    are two-letter patterns ``"aa", "ab", "ba", "bb"``.
    """
    pa, pb = prevalence, 1 - prevalence
    ia, ib = acc_i
    ja, jb = acc_j
    cond_a = {
        "aa": ia * ja + gamma_alpha,
        "ab": ia * (1 - ja) - gamma_alpha,
        "ba": (1 - ia) * ja - gamma_alpha,
        "bb": (1 - ia) * (1 - ja) + gamma_alpha,
    }
    cond_b = {
        "aa": (1 - ib) * (1 - jb) + gamma_beta,
        "ab": (1 - ib) * jb - gamma_beta,
        "ba": ib * (1 - jb) - gamma_beta,
        "bb": ib * jb + gamma_beta,
    }
    for lab, cond in ((ALPHA, cond_a), (BETA, cond_b)):
        for key, v in cond.items():
            if not 0 <= v <= 1:
                raise InfeasibleMoments(
                    f"pair frequency of {key} given {lab} is {v}", label=lab, event=key, value=v
                )
    return {key: pa * cond_a[key] + pb * cond_b[key] for key in cond_a}


def minimal_test_size(freqs: Mapping[str, Scalar]) -> int:
    """Smallest ``n`` with every ``n * f`` integral (lcm of the denominators)."""
    return lcm_of_denominators(freqs.values())


def materialization_size(
    point: EvaluationPoint, corr: CorrelationSet | None = None
) -> int:
    """Smallest test size at which a labelled stream realises ``(point, corr)``.

    This needs every per-label pattern count ``n * P_label * conditional`` to be
    integral, which can demand a larger ``n`` than the sketch alone.
    """
    joint = joint_frequencies(point, corr)
    return lcm_of_denominators([point.prevalence, *joint.values()])


def synthesize_sketch(
    point: EvaluationPoint,
    corr: CorrelationSet | None = None,
    n: int | None = None,
    strict: bool = True,
) -> DecisionSketch:
    """Integer sketch of the forward frequencies at the minimal (or given) size."""
    freqs = correlated_trio_frequencies(point, corr, strict=strict)
    if any(v < 0 for v in freqs.values()):
        raise InfeasibleMoments("negative pattern frequency; no sketch realises it")
    size = minimal_test_size(freqs)
    if n is None:
        n = size
    elif n % size:
        raise IndivisibleTestSize(f"n={n} is not a multiple of {size}")
    return DecisionSketch.from_frequencies(freqs, n)


def materialize_stream(
    point: EvaluationPoint,
    corr: CorrelationSet | None = None,
    n: int | None = None,
    seed: int = 0,
) -> LabeledStream:
    """An exact labelled stream with the requested statistics, shuffled.

    Counts per ``(label, pattern)`` are fixed by the inputs; the seed only
    decides the order, so every seed yields the same sketch.
    """
    corr = corr if corr is not None else CorrelationSet.zero()
    joint = joint_frequencies(point, corr)
    size = lcm_of_denominators([point.prevalence, *joint.values()])
    if n is None:
        n = size
    if n <= 0 or n % size:
        raise IndivisibleTestSize(
            f"n={n} is not a positive multiple of the minimal size {size}"
        )
    items = []
    for (lab, e), f in joint.items():
        items.extend([(e, lab)] * int(f * n))
    order = make_rng(seed).permutation(len(items))
    return [items[k] for k in order]


def sample_stream(
    point: EvaluationPoint,
    corr: CorrelationSet | None = None,
    n: int = 0,
    seed: int = 0,
) -> LabeledStream:
    """``n`` i.i.d. draws: truth ~ Bernoulli(P_a), pattern ~ conditional table.

    Realised sample statistics fluctuate around the inputs.
    """
    table = conditional_table(point, corr)
    rng = make_rng(seed)
    if n == 0:
        return []
    is_beta = rng.random(n) >= float(point.prevalence)
    probs = {}
    for lab in LABELS:
        p = np.array([float(table[lab][e]) for e in EVENTS])
        probs[lab] = p / p.sum()
    events = np.empty(n, dtype=np.int64)
    n_beta = int(is_beta.sum())
    events[~is_beta] = rng.choice(8, size=n - n_beta, p=probs[ALPHA])
    events[is_beta] = rng.choice(8, size=n_beta, p=probs[BETA])
    return [(EVENTS[e], BETA if b else ALPHA) for e, b in zip(events.tolist(), is_beta.tolist())]


def delta_closed_form(point: EvaluationPoint, corr: CorrelationSet, i: int, j: int):
    """Pair delta predicted from the ground truth.

    ``P_a (1 - P_a) g_i g_j + P_a G_ija + (1 - P_a) G_ijb`` with
    ``g = P_a_acc + P_b_acc - 1``.
    """
    pa = point.prevalence
    g = point.g()
    return (
        pa * (1 - pa) * g[i] * g[j]
        + pa * corr.pair_value(i, j, ALPHA)
        + (1 - pa) * corr.pair_value(i, j, BETA)
    )


def random_point(
    rng: np.random.Generator,
    prevalence=(Fraction(1, 4), Fraction(3, 4)),
    accuracy=(Fraction(3, 5), Fraction(19, 20)),
    denominator: int = 100,
    exact: bool = True,
) -> EvaluationPoint:
    """Random ground truth on a rational grid (or continuous in float mode)."""
    if exact:
        draw = lambda lo, hi: random_fraction(rng, lo, hi, denominator)  # noqa: E731
    else:
        draw = lambda lo, hi: float(rng.uniform(float(lo), float(hi)))  # noqa: E731
    pa = draw(*prevalence)
    return EvaluationPoint(
        pa,
        tuple(draw(*accuracy) for _ in range(3)),
        tuple(draw(*accuracy) for _ in range(3)),
    )


def random_correlations(
    rng: np.random.Generator,
    cap,
    denominator: int = 100,
    exact: bool = True,
    triple: bool = True,
) -> CorrelationSet:
    """Every correlation uniform on ``[-cap, cap]`` (rational grid in exact mode)."""
    if exact:
        draw = lambda: random_fraction(rng, -Fraction(cap), Fraction(cap), denominator)  # noqa: E731
        zero = Fraction(0)
    else:
        draw = lambda: float(rng.uniform(-float(cap), float(cap)))  # noqa: E731
        zero = 0.0
    pairs = {p: (draw(), draw()) for p in PAIRS}
    tri = (draw(), draw()) if triple else (zero, zero)
    return CorrelationSet(pairs, tri)


def is_feasible(point: EvaluationPoint, corr: CorrelationSet) -> bool:
    try:
        conditional_table(point, corr)
    except InfeasibleMoments:
        return False
    return True


def correlation_design(point: EvaluationPoint, label: str) -> tuple[np.ndarray, np.ndarray]:
    """Conditional table for ``label`` as ``base + A @ gamma`` (floats).

    ``gamma`` is ``(G_12, G_13, G_23, G_123)`` for that label; the table is
    linear in it once the accuracies are fixed.
    """
    fpoint = point.to_float()
    k = 0 if label == ALPHA else 1

    def table(gamma):
        pairs = {p: (0.0, 0.0) for p in PAIRS}
        for p, v in zip(PAIRS, gamma[:3]):
            pairs[p] = (v, 0.0) if k == 0 else (0.0, v)
        tri = (gamma[3], 0.0) if k == 0 else (0.0, gamma[3])
        cond = conditional_frequencies(fpoint, CorrelationSet(pairs, tri), label)
        return np.array([cond[e] for e in EVENTS], dtype=float)

    base = table((0.0, 0.0, 0.0, 0.0))
    cols = [table(tuple(float(r == c) for r in range(4))) - base for c in range(4)]
    return base, np.column_stack(cols)


def sample_correlations(
    rng: np.random.Generator,
    point: EvaluationPoint,
    cap: float,
    triple: bool = True,
    batch: int = 4096,
    max_batches: int = 32,
) -> CorrelationSet:
    """Correlations uniform on ``[-cap, cap]`` conditioned on feasibility.

    Feasibility constrains each label separately, so rejection runs per label
    in batches. Raises :class:`InfeasibleMoments` when no draw is accepted
    within ``batch * max_batches`` tries.
    """
    if cap <= 0:
        return CorrelationSet({p: (0.0, 0.0) for p in PAIRS}, (0.0, 0.0))
    dims = 4 if triple else 3
    chosen = {}
    for lab in LABELS:
        base, A = correlation_design(point, lab)
        for _ in range(max_batches):
            g = rng.uniform(-cap, cap, size=(batch, dims))
            vals = base + g @ A[:, :dims].T
            ok = np.flatnonzero(((vals >= 0.0) & (vals <= 1.0)).all(axis=1))
            if ok.size:
                chosen[lab] = tuple(float(x) for x in g[ok[0]]) + ((0.0,) if not triple else ())
                break
        else:
            raise InfeasibleMoments(
                f"no feasible correlations for label {lab!r} within cap {cap}", label=lab
            )
    pairs = {p: (chosen[ALPHA][k], chosen[BETA][k]) for k, p in enumerate(PAIRS)}
    return CorrelationSet(pairs, (chosen[ALPHA][3], chosen[BETA][3]))
