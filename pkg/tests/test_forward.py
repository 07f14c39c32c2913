from fractions import Fraction as F

import numpy as np
import pytest

from conftest import TP1, generic_points, single_gamma
from oracles import item_statistics, symbolic_frequencies
from trioeval.errors import IndivisibleTestSize, InfeasibleMoments
from trioeval.forward import (
    conditional_table,
    correlated_pair_table,
    correlated_trio_frequencies,
    delta_closed_form,
    independent_frequencies,
    is_feasible,
    materialization_size,
    materialize_stream,
    minimal_test_size,
    random_correlations,
    random_point,
    sample_correlations,
    sample_stream,
    synthesize_sketch,
)
from trioeval.points import PAIRS, CorrelationSet, EvaluationPoint
from trioeval.sketch import EVENTS, sketch_of, statistics, truth_statistics

HALF = F(1, 2)


def feasible_correlated(seed, count, cap=F(1, 20), point_grid=100, corr_grid=100):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p = random_point(rng, denominator=point_grid)
        c = random_correlations(rng, cap, denominator=corr_grid)
        if is_feasible(p, c) and not c.is_zero():
            out.append((p, c))
    return out


def test_perfect_and_coin_flip_examples():
    perfect = EvaluationPoint(HALF, (1, 1, 1), (1, 1, 1))
    f = independent_frequencies(perfect)
    assert f["aaa"] == f["bbb"] == HALF
    assert sum(f[e] for e in EVENTS[1:7]) == 0
    coins = EvaluationPoint(F(1, 3), (HALF,) * 3, (HALF,) * 3)
    assert set(independent_frequencies(coins).values()) == {F(1, 8)}


def test_tp1_frequencies_against_symbolic_oracle():
    f = independent_frequencies(TP1)
    assert f["aaa"] == F(39, 125)
    assert f == symbolic_frequencies(TP1)
    assert minimal_test_size(f) == 500


@pytest.mark.parametrize("seed", range(5))
def test_correlated_frequencies_against_symbolic_oracle(seed):
    for point, corr in feasible_correlated(seed, 6):
        assert correlated_trio_frequencies(point, corr) == symbolic_frequencies(point, corr)


def test_zero_correlation_reduces_to_product_form():
    for p in generic_points(11, 50):
        assert correlated_trio_frequencies(p, CorrelationSet.zero()) == independent_frequencies(p)


def test_frequencies_sum_to_one():
    for p, c in feasible_correlated(3, 50):
        assert sum(correlated_trio_frequencies(p, c).values()) == 1


def test_pair_table_examples():
    t = correlated_pair_table(HALF, (HALF, HALF), (HALF, HALF), F(1, 4), F(1, 4))
    assert t == {"aa": HALF, "ab": 0, "ba": 0, "bb": HALF}
    t0 = correlated_pair_table(F(3, 5), (F(9, 10), F(4, 5)), (F(7, 10), F(3, 5)), 0, 0)
    assert t0["aa"] == F(3, 5) * F(9, 10) * F(7, 10) + F(2, 5) * F(1, 5) * F(2, 5)
    with pytest.raises(InfeasibleMoments):
        correlated_pair_table(HALF, (HALF, HALF), (HALF, HALF), HALF, 0)


def test_coin_flip_pair_by_brute_force_stream():
    # two co-voting coins: per label, half the items both right, half both wrong
    stream = [("aa", "a"), ("bb", "a"), ("bb", "b"), ("aa", "b")]
    n = len(stream)
    observed = {k: F(sum(1 for e, _ in stream if e == k), n) for k in ("aa", "ab", "ba", "bb")}
    assert observed == correlated_pair_table(HALF, (HALF, HALF), (HALF, HALF), F(1, 4), F(1, 4))


def test_pair_table_is_trio_marginal():
    for p, c in feasible_correlated(4, 40):
        trio = correlated_trio_frequencies(p, c)
        for i, j in PAIRS:
            table = correlated_pair_table(
                p.prevalence,
                (p.acc_alpha[i], p.acc_beta[i]),
                (p.acc_alpha[j], p.acc_beta[j]),
                *c.pair[(i, j)],
            )
            for key, v in table.items():
                assert v == sum(f for e, f in trio.items() if e[i] + e[j] == key)


def test_delta_closed_form():
    for p, c in feasible_correlated(5, 60):
        st = statistics(correlated_trio_frequencies(p, c))
        for i, j in PAIRS:
            assert st.delta[(i, j)] == delta_closed_form(p, c, i, j)


def test_infeasible_correlation_raises():
    with pytest.raises(InfeasibleMoments):
        correlated_trio_frequencies(TP1, single_gamma((0, 1), "a", HALF))
    # Mixture frequencies stay valid here but one alpha-conditional entry is negative
    with pytest.raises(InfeasibleMoments):
        conditional_table(TP1, single_gamma((0, 1), "a", F(1, 10)))
    loose = correlated_trio_frequencies(TP1, single_gamma((0, 1), "a", F(1, 10)), strict=False)
    assert all(v >= 0 for v in loose.values())


def test_minimal_test_size_examples():
    assert minimal_test_size({e: F(1, 8) for e in EVENTS}) == 8
    assert minimal_test_size({"aaa": HALF, "bbb": HALF, **{e: F(0) for e in EVENTS[1:7]}}) == 2


def test_materialization_size_of_tp1():
    # per-label counts n * P_l * cond must be integral; 500 is not enough
    assert materialization_size(TP1) == 2500
    with pytest.raises(IndivisibleTestSize):
        materialize_stream(TP1, n=500)


def test_materialize_perfect_pair():
    perfect = EvaluationPoint(HALF, (1, 1, 1), (1, 1, 1))
    assert sorted(materialize_stream(perfect, n=2)) == [("aaa", "a"), ("bbb", "b")]


def test_materialize_tp1_roundtrip_and_shuffle():
    a = materialize_stream(TP1, seed=1)
    b = materialize_stream(TP1, seed=2)
    assert a != b and sorted(a) == sorted(b)
    g = truth_statistics(a)
    assert g.point == TP1 and g.correlations.is_zero()


def test_materialize_correlated_roundtrip_against_item_oracle():
    for p, c in feasible_correlated(6, 8, cap=F(1, 10), point_grid=10, corr_grid=20):
        stream = materialize_stream(p, c, seed=0)
        ref = item_statistics(stream)
        assert ref["prevalence"] == p.prevalence
        for k, lab in enumerate("ab"):
            acc = p.acc_alpha if lab == "a" else p.acc_beta
            assert ref[lab]["acc"] == list(acc)
            for pair in PAIRS:
                assert ref[lab]["pairs"][pair] == c.pair[pair][k]
            assert ref[lab]["triple"] == c.triple[k]
        assert sketch_of(stream) == synthesize_sketch(p, c, n=len(stream))


def test_sample_stream_contracts():
    assert sample_stream(TP1, n=0) == []
    assert sample_stream(TP1, n=500, seed=9) == sample_stream(TP1, n=500, seed=9)


def test_sample_stream_large_n_has_small_correlations():
    g = truth_statistics(sample_stream(TP1, n=10**5, seed=0))
    assert all(abs(v) < 0.02 for pair in PAIRS for v in g.correlations.pair[pair])
    assert abs(g.point.prevalence - F(3, 5)) < 0.01


def test_sample_correlations_are_feasible():
    rng = np.random.default_rng(0)
    for _ in range(30):
        p = random_point(rng, exact=False)
        try:
            c = sample_correlations(rng, p, 0.1)
        except InfeasibleMoments:
            continue
        assert max(abs(v) for v in c.values()) <= 0.1
        table = conditional_table(p, c)
        assert all(0 <= v <= 1 for lab in table for v in table[lab].values())


def test_sample_correlations_zero_cap():
    c = sample_correlations(np.random.default_rng(0), TP1.to_float(), 0.0)
    assert c.is_zero()
