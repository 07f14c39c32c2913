"""Agreement-rate algebra for classifier trios.

Agreement-based evaluation keeps only how often classifiers agree. The helpers
here express stream correctness and error rates in evaluation statistics, show
that joint error rates do not factor into single-classifier rates, and audit the
closed-form "independent classifier" solution built on agreement rates, whose
radicand ``(1 - 2 a12)(1 - 2 a13)(1 - 2 a23)`` must be a rational square if it
is to produce an attainable finite-test error rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateAgreement
from .numerics import format_scalar, is_exact, is_rational_square
from .points import ALPHA, BETA, PAIRS, GroundTruthPoint
from .sketch import as_frequencies, statistics


@dataclass(frozen=True)
class StreamRates:
    correct: tuple
    error: tuple
    joint_correct: dict
    joint_error: dict
    factorization_gap: dict

    def to_dict(self) -> dict:
        key = lambda p: f"{p[0] + 1}{p[1] + 1}"  # noqa: E731
        return {
            "c": [format_scalar(v) for v in self.correct],
            "e": [format_scalar(v) for v in self.error],
            "c_pair": {key(p): format_scalar(v) for p, v in self.joint_correct.items()},
            "e_pair": {key(p): format_scalar(v) for p, v in self.joint_error.items()},
            "factorization_gap": {key(p): format_scalar(v) for p, v in self.factorization_gap.items()},
        }


def stream_rates(truth: GroundTruthPoint) -> StreamRates:
    """Correctness/error rates per classifier and per pair from the ground truth."""
    p, corr = truth.point, truth.correlations
    pa = p.prevalence
    pb = 1 - pa
    c = tuple(pa * p.acc_alpha[i] + pb * p.acc_beta[i] for i in range(3))
    e = tuple(1 - x for x in c)
    c_pair, e_pair, gap = {}, {}, {}
    for i, j in PAIRS:
        shared = pa * corr.pair_value(i, j, ALPHA) + pb * corr.pair_value(i, j, BETA)
        c_pair[(i, j)] = pa * p.acc_alpha[i] * p.acc_alpha[j] + pb * p.acc_beta[i] * p.acc_beta[j] + shared
        e_pair[(i, j)] = (
            pa * (1 - p.acc_alpha[i]) * (1 - p.acc_alpha[j])
            + pb * (1 - p.acc_beta[i]) * (1 - p.acc_beta[j])
            + shared
        )
        gap[(i, j)] = e_pair[(i, j)] - e[i] * e[j]
    return StreamRates(c, e, c_pair, e_pair, gap)


@dataclass(frozen=True)
class PlataniosReport:
    agreement: dict
    c_squared: object
    c_is_rational_square: bool | None
    e_estimates: dict
    degenerate_pairs: list

    def to_dict(self) -> dict:
        return {
            "agreement": {f"{i + 1}{j + 1}": format_scalar(v) for (i, j), v in self.agreement.items()},
            "c_squared": format_scalar(self.c_squared),
            "c_is_rational_square": self.c_is_rational_square,
            "e_estimates": {str(i + 1): v for i, v in self.e_estimates.items()},
            "degenerate_pairs": self.degenerate_pairs,
        }


_OPPOSITE_PAIR = {0: (1, 2), 1: (0, 2), 2: (0, 1)}


def platanios_report(data, exact: bool | None = None, strict: bool = False) -> PlataniosReport:
    """Agreement rates, the radicand ``c^2`` and the sign variants of ``e_i``.

    ``e_i = (c +- (1 - 2 a_jk)) / (+-2 (1 - 2 a_jk))`` with both signs chosen
    independently, so four floats per classifier; empty when ``c^2 < 0``.
    A pair with ``a_jk = 1/2`` makes its estimates undefined: it is listed in
    ``degenerate_pairs``, or raises :class:`DegenerateAgreement` with ``strict``.
    """
    freqs = as_frequencies(data, exact)
    a = statistics(freqs).agreement
    c_sq = 1
    for pair in PAIRS:
        c_sq = c_sq * (1 - 2 * a[pair])
    verdict = None
    if is_exact(c_sq):
        verdict = c_sq >= 0 and is_rational_square(c_sq)
    degenerate = [f"{j + 1}{k + 1}" for j, k in PAIRS if 1 - 2 * a[(j, k)] == 0]
    if degenerate and strict:
        raise DegenerateAgreement(f"agreement rate 1/2 on pairs {degenerate}")
    estimates = {}
    for i in range(3):
        m = float(1 - 2 * a[_OPPOSITE_PAIR[i]])
        if m == 0 or c_sq < 0:
            estimates[i] = []
            continue
        c = math.sqrt(float(c_sq))
        estimates[i] = [(c + s1 * m) / (s2 * 2 * m) for s1 in (1, -1) for s2 in (1, -1)]
    return PlataniosReport(a, c_sq, verdict, estimates, degenerate)


def diagnostics_report(data, exact: bool | None = None) -> dict:
    """JSON-ready diagnostics block for evaluation reports."""
    return {"platanios": platanios_report(data, exact).to_dict()}
