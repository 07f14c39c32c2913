"""Points of evaluation space and the correlation values that complete them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .numerics import Scalar, format_scalar, parse_scalar

ALPHA = "a"
BETA = "b"
LABELS = (ALPHA, BETA)

#: Classifier pairs (0-based indices) in canonical order, with their text keys.
PAIRS = ((0, 1), (0, 2), (1, 2))
PAIR_KEYS = {(0, 1): "12", (0, 2): "13", (1, 2): "23"}


@dataclass(frozen=True)
class EvaluationPoint:
    """Prevalence of the alpha label plus per-label accuracies of the trio.

    ``acc_alpha[i]`` is the fraction of true-alpha items classifier ``i`` labelled
    alpha; ``acc_beta[i]`` likewise for beta.
    """

    prevalence: Scalar
    acc_alpha: tuple
    acc_beta: tuple

    def __post_init__(self):
        object.__setattr__(self, "acc_alpha", tuple(self.acc_alpha))
        object.__setattr__(self, "acc_beta", tuple(self.acc_beta))
        if len(self.acc_alpha) != 3 or len(self.acc_beta) != 3:
            raise ValueError("an evaluation point needs three classifiers")

    @classmethod
    def from_vector(cls, v: Sequence) -> "EvaluationPoint":
        """Inverse of :meth:`as_vector`."""
        if len(v) != 7:
            raise ValueError(f"expected 7 coordinates, got {len(v)}")
        return cls(v[0], (v[1], v[3], v[5]), (v[2], v[4], v[6]))

    def as_vector(self) -> tuple:
        """``(P_a, P_1a, P_1b, P_2a, P_2b, P_3a, P_3b)``."""
        out = [self.prevalence]
        for a, b in zip(self.acc_alpha, self.acc_beta):
            out += [a, b]
        return tuple(out)

    def accuracy(self, i: int, label: str) -> Scalar:
        return self.acc_alpha[i] if label == ALPHA else self.acc_beta[i]

    def label_prevalence(self, label: str) -> Scalar:
        return self.prevalence if label == ALPHA else 1 - self.prevalence

    def g(self) -> tuple:
        """``P_ia + P_ib - 1`` per classifier; zero marks a blind spot."""
        return tuple(a + b - 1 for a, b in zip(self.acc_alpha, self.acc_beta))

    def in_unit_cube(self, tol=0) -> bool:
        return all(-tol <= x <= 1 + tol for x in self.as_vector())

    def clipped(self) -> "EvaluationPoint":
        """Coordinates clamped to ``[0, 1]``."""
        return EvaluationPoint.from_vector([min(max(x, 0), 1) for x in self.as_vector()])

    def to_float(self) -> "EvaluationPoint":
        return EvaluationPoint.from_vector([float(x) for x in self.as_vector()])

    def to_dict(self) -> dict:
        return {
            "prevalence": format_scalar(self.prevalence),
            "acc": {
                str(i + 1): {
                    ALPHA: format_scalar(self.acc_alpha[i]),
                    BETA: format_scalar(self.acc_beta[i]),
                }
                for i in range(3)
            },
        }

    @classmethod
    def from_dict(cls, d: Mapping, exact: bool = True) -> "EvaluationPoint":
        conv = parse_scalar if exact else float
        acc = d["acc"]
        return cls(
            conv(d["prevalence"]),
            tuple(conv(acc[str(i + 1)][ALPHA]) for i in range(3)),
            tuple(conv(acc[str(i + 1)][BETA]) for i in range(3)),
        )


def _zero_pairs():
    return {pair: (Fraction(0), Fraction(0)) for pair in PAIRS}


@dataclass(frozen=True)
class CorrelationSet:
    """Pair and 3-way sample correlations per label.

    ``pair[(i, j)] == (gamma_alpha, gamma_beta)`` and
    ``triple == (gamma_alpha, gamma_beta)``. All zero means the trio is sample
    independent on the test.
    """

    pair: Mapping = field(default_factory=_zero_pairs)
    triple: tuple = (Fraction(0), Fraction(0))

    def __post_init__(self):
        pair = {}
        for key, value in self.pair.items():
            i, j = sorted(key)
            pair[(i, j)] = tuple(value)
        for p in PAIRS:
            pair.setdefault(p, (Fraction(0), Fraction(0)))
        object.__setattr__(self, "pair", pair)
        object.__setattr__(self, "triple", tuple(self.triple))

    @classmethod
    def zero(cls) -> "CorrelationSet":
        return cls()

    def pair_value(self, i: int, j: int, label: str) -> Scalar:
        i, j = sorted((i, j))
        return self.pair[(i, j)][0 if label == ALPHA else 1]

    def triple_value(self, label: str) -> Scalar:
        return self.triple[0 if label == ALPHA else 1]

    def values(self) -> Iterator:
        for p in PAIRS:
            yield from self.pair[p]
        yield from self.triple

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values())

    def max_abs_pair(self) -> Scalar:
        return max(abs(v) for p in PAIRS for v in self.pair[p])

    def to_dict(self) -> dict:
        return {
            "pairs": {
                PAIR_KEYS[p]: {ALPHA: format_scalar(a), BETA: format_scalar(b)}
                for p, (a, b) in self.pair.items()
            },
            "triple": {
                ALPHA: format_scalar(self.triple[0]),
                BETA: format_scalar(self.triple[1]),
            },
        }

    @classmethod
    def from_dict(cls, d: Mapping | None, exact: bool = True) -> "CorrelationSet":
        conv = parse_scalar if exact else float
        if not d:
            zero = conv(0)
            return cls({p: (zero, zero) for p in PAIRS}, (zero, zero))
        pairs = {}
        for key, p in ((v, k) for k, v in PAIR_KEYS.items()):
            entry = d.get("pairs", {}).get(key, {})
            pairs[p] = (conv(entry.get(ALPHA, 0)), conv(entry.get(BETA, 0)))
        triple = d.get("triple", {})
        return cls(pairs, (conv(triple.get(ALPHA, 0)), conv(triple.get(BETA, 0))))


@dataclass(frozen=True)
class GroundTruthPoint:
    point: EvaluationPoint
    correlations: CorrelationSet
    n_alpha: int
    n_beta: int

    @property
    def n(self) -> int:
        return self.n_alpha + self.n_beta

    def to_dict(self) -> dict:
        out = self.point.to_dict()
        out["corr"] = self.correlations.to_dict()
        out["n"] = {ALPHA: self.n_alpha, BETA: self.n_beta}
        return out
