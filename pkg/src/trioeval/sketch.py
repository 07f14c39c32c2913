"""The per-item decision data sketch of a classifier trio.

Eight counters, one per voting pattern, are all the evaluators ever look at.
Patterns are three-letter strings over ``{"a", "b"}`` ordered classifier 1 to 3,
so ``"aba"`` means classifiers 1 and 3 voted alpha and classifier 2 voted beta.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence, TextIO, Union

import numpy as np

from .errors import (
    CounterOverflow,
    EmptySketch,
    InconsistentTruthColumn,
    MissingLabel,
    ParseError,
)
from .numerics import Scalar
from .points import (
    ALPHA,
    BETA,
    LABELS,
    PAIRS,
    CorrelationSet,
    EvaluationPoint,
    GroundTruthPoint,
)

EVENTS = tuple("".join(p) for p in product(LABELS, repeat=3))
EVENT_INDEX = {e: k for k, e in enumerate(EVENTS)}

#: Sketch counters are unsigned 64-bit; exceeding this is an error.
COUNTER_MAX = 2**64 - 1

#: ``(event, true_label)`` items, in stream order.
LabeledStream = list

FrequencyVector = dict


def as_event(event) -> str:
    """Normalise ``"aba"``, ``("a", "b", "a")`` or a pattern index to a pattern."""
    if isinstance(event, (int, np.integer)):
        return EVENTS[event]
    if not isinstance(event, str):
        event = "".join(event)
    if event not in EVENT_INDEX:
        raise ValueError(f"not a decision event: {event!r}")
    return event


def beta_votes(event: str) -> tuple[int, int, int]:
    return tuple(int(v == BETA) for v in event)


class DecisionSketch:
    """Counts of each voting pattern seen so far.

    >>> s = DecisionSketch()
    >>> s.update("aba").update("aba").counts["aba"]
    2
    """

    __slots__ = ("_counts", "n")

    def __init__(self, counts: Mapping[str, int] | None = None):
        self._counts = [0] * 8
        self.n = 0
        if counts:
            for event, c in counts.items():
                c = int(c)
                if c < 0:
                    raise ValueError("sketch counts must be nonnegative")
                self._add(EVENT_INDEX[as_event(event)], c)

    def _add(self, idx: int, k: int) -> None:
        value = self._counts[idx] + k
        if value > COUNTER_MAX or self.n + k > COUNTER_MAX:
            raise CounterOverflow("sketch counter exceeds 64 bits")
        self._counts[idx] = value
        self.n += k

    @property
    def counts(self) -> dict[str, int]:
        return dict(zip(EVENTS, self._counts))

    def count(self, event) -> int:
        return self._counts[EVENT_INDEX[as_event(event)]]

    def update(self, event) -> "DecisionSketch":
        idx = EVENT_INDEX[event] if event in EVENT_INDEX else EVENT_INDEX[as_event(event)]
        self._counts[idx] += 1
        self.n += 1
        if self.n > COUNTER_MAX:
            self._counts[idx] -= 1
            self.n -= 1
            raise CounterOverflow("sketch counter exceeds 64 bits")
        return self

    def update_many(self, events) -> "DecisionSketch":
        """Add a batch of events.

        ``events`` may be an integer array of pattern indices (the fast path) or
        any iterable of patterns.
        """
        if isinstance(events, np.ndarray) and events.dtype.kind in "iu":
            if events.size and (events.min() < 0 or events.max() > 7):
                raise ValueError("pattern indices must lie in 0..7")
            batch = np.bincount(events.ravel(), minlength=8)
            for idx in range(8):
                if batch[idx]:
                    self._add(idx, int(batch[idx]))
            return self
        for event, k in Counter(as_event(e) for e in events).items():
            self._add(EVENT_INDEX[event], k)
        return self

    def merge(self, other: "DecisionSketch") -> "DecisionSketch":
        out = self.copy()
        for idx, k in enumerate(other._counts):
            if k:
                out._add(idx, k)
        return out

    __add__ = merge

    def copy(self) -> "DecisionSketch":
        out = DecisionSketch()
        out._counts = list(self._counts)
        out.n = self.n
        return out

    def frequencies(self, exact: bool = True) -> FrequencyVector:
        return frequencies(self, exact=exact)

    def __eq__(self, other):
        if not isinstance(other, DecisionSketch):
            return NotImplemented
        return self._counts == other._counts

    def __repr__(self):
        body = ", ".join(f"{e}={c}" for e, c in zip(EVENTS, self._counts))
        return f"DecisionSketch(n={self.n}, {body})"

    def to_dict(self) -> dict:
        return {"n": self.n, "counts": self.counts}

    @classmethod
    def from_dict(cls, d: Mapping) -> "DecisionSketch":
        counts = d["counts"]
        unknown = set(counts) - set(EVENTS)
        if unknown:
            raise ParseError(f"unknown sketch patterns {sorted(unknown)}")
        out = cls(counts)
        if "n" in d and int(d["n"]) != out.n:
            raise ParseError(f"sketch n={d['n']} but counts sum to {out.n}")
        return out

    @classmethod
    def from_frequencies(cls, freqs: Mapping[str, Scalar], n: int) -> "DecisionSketch":
        """Sketch with ``counts[e] = n * freqs[e]``; every product must be integral."""
        counts = {}
        for e in EVENTS:
            c = Fraction(freqs[e]) * n
            if c.denominator != 1:
                raise ValueError(f"n={n} does not make the count of {e} integral")
            counts[e] = int(c)
        return cls(counts)


def new_sketch() -> DecisionSketch:
    return DecisionSketch()


def update(sketch: DecisionSketch, event) -> DecisionSketch:
    return sketch.update(event)


def merge(a: DecisionSketch, b: DecisionSketch) -> DecisionSketch:
    return a.merge(b)


def frequencies(sketch: DecisionSketch, exact: bool = True) -> FrequencyVector:
    if sketch.n == 0:
        raise EmptySketch("the sketch has no items")
    if exact:
        return {e: Fraction(c, sketch.n) for e, c in sketch.counts.items()}
    return {e: c / sketch.n for e, c in sketch.counts.items()}


def as_frequencies(data, exact: bool | None = None) -> FrequencyVector:
    """Accept a sketch or a frequency mapping and return frequencies.

    With ``exact=None`` a sketch is read exactly and a mapping keeps its type.
    """
    if isinstance(data, DecisionSketch):
        return frequencies(data, exact=True if exact is None else exact)
    freqs = {e: data[e] for e in EVENTS}
    if exact is False:
        freqs = {e: float(v) for e, v in freqs.items()}
    elif exact:
        freqs = {e: Fraction(v) for e, v in freqs.items()}
    return freqs


@dataclass(frozen=True)
class SketchStatistics:
    """Observed marginals and moments of the beta-vote indicators."""

    f_beta: tuple
    f_pair_beta: dict
    delta: dict
    triple_delta: Scalar
    agreement: dict
    f_pair_alpha: dict

    @property
    def f_alpha(self) -> tuple:
        return tuple(1 - f for f in self.f_beta)

    def f_label(self, i: int, label: str) -> Scalar:
        return self.f_beta[i] if label == BETA else 1 - self.f_beta[i]


def statistics(data, exact: bool | None = None) -> SketchStatistics:
    """Marginal vote frequencies, pair deltas, the triple moment and agreements.

    ``data`` is a :class:`DecisionSketch` or a frequency mapping.
    """
    freqs = as_frequencies(data, exact)
    bits = {e: beta_votes(e) for e in EVENTS}
    f_beta = tuple(sum(freqs[e] for e in EVENTS if bits[e][i]) for i in range(3))
    f_pair_beta, f_pair_alpha, delta, agreement = {}, {}, {}, {}
    for i, j in PAIRS:
        both_b = sum(freqs[e] for e in EVENTS if bits[e][i] and bits[e][j])
        both_a = sum(freqs[e] for e in EVENTS if not bits[e][i] and not bits[e][j])
        f_pair_beta[(i, j)] = both_b
        f_pair_alpha[(i, j)] = both_a
        delta[(i, j)] = both_b - f_beta[i] * f_beta[j]
        agreement[(i, j)] = both_a + both_b
    triple = sum(
        freqs[e]
        * (bits[e][0] - f_beta[0])
        * (bits[e][1] - f_beta[1])
        * (bits[e][2] - f_beta[2])
        for e in EVENTS
    )
    return SketchStatistics(f_beta, f_pair_beta, delta, triple, agreement, f_pair_alpha)


def joint_counts(stream: Iterable) -> dict[str, Counter]:
    """Per true label, how often each pattern occurred."""
    out = {ALPHA: Counter(), BETA: Counter()}
    for event, truth in stream:
        out[truth][as_event(event)] += 1
    return out


def truth_from_counts(joint: Mapping[str, Mapping[str, int]]) -> GroundTruthPoint:
    """Exact ground-truth statistics from per-label pattern counts."""
    n_label = {lab: sum(joint[lab].values()) for lab in LABELS}
    for lab in LABELS:
        if n_label[lab] == 0:
            raise MissingLabel(f"no items with true label {lab!r}")
    acc = {}
    pair = {p: [None, None] for p in PAIRS}
    triple = [None, None]
    for k, lab in enumerate(LABELS):
        nl = n_label[lab]
        items = [(e, c) for e, c in joint[lab].items() if c]
        correct = {e: tuple(int(v == lab) for v in e) for e, _ in items}
        p = [Fraction(sum(c for e, c in items if correct[e][i]), nl) for i in range(3)]
        acc[lab] = p
        for i, j in PAIRS:
            pair[(i, j)][k] = (
                sum(c * (correct[e][i] - p[i]) * (correct[e][j] - p[j]) for e, c in items)
                / nl
            )
        triple[k] = (
            sum(
                c
                * (correct[e][0] - p[0])
                * (correct[e][1] - p[1])
                * (correct[e][2] - p[2])
                for e, c in items
            )
            / nl
        )
    n = n_label[ALPHA] + n_label[BETA]
    point = EvaluationPoint(Fraction(n_label[ALPHA], n), acc[ALPHA], acc[BETA])
    corr = CorrelationSet({q: tuple(v) for q, v in pair.items()}, tuple(triple))
    return GroundTruthPoint(point, corr, n_label[ALPHA], n_label[BETA])


def truth_statistics(stream: Iterable) -> GroundTruthPoint:
    """Prevalence, accuracies and correlations of a labelled stream, exactly."""
    stream = list(stream)
    if not stream:
        raise MissingLabel("empty labelled stream")
    return truth_from_counts(joint_counts(stream))


def sketch_of(stream: Iterable) -> DecisionSketch:
    """Sketch of a labelled stream (truth ignored) or of bare events."""
    s = DecisionSketch()
    for item in stream:
        event = item if isinstance(item, str) else item[0]
        s.update(event)
    return s


_VOTE = {"a": ALPHA, "b": BETA}


def _vote(value, row: int, column: str) -> str:
    v = (value or "").strip().lower()
    if v not in _VOTE:
        raise ParseError(f"column {column!r} has invalid vote {value!r}", row=row)
    return _VOTE[v]


def ingest_decisions(source: Union[str, TextIO, Iterable[Sequence[str]]]):
    """Read a decisions table into ``(sketch, labelled_stream_or_None)``.

    ``source`` is a path, an open text file, or an iterable of rows whose
    first row is the header ``item_id,c1,c2,c3[,truth]``. Row numbers in errors
    count data rows from 1.
    """
    if isinstance(source, str):
        with open(source, newline="") as fh:
            return ingest_decisions(fh)
    rows = csv.reader(source) if hasattr(source, "read") else iter(source)
    try:
        header = [h.strip().lower() for h in next(rows)]
    except StopIteration:
        raise ParseError("missing header") from None
    for col in ("c1", "c2", "c3"):
        if col not in header:
            raise ParseError(f"header lacks column {col!r}")
    cols = [header.index(c) for c in ("c1", "c2", "c3")]
    truth_col = header.index("truth") if "truth" in header else None

    sketch = DecisionSketch()
    labelled = []
    with_truth = without_truth = 0
    for row_no, row in enumerate(rows, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) <= max(cols):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", row=row_no)
        event = "".join(_vote(row[c], row_no, f"c{k + 1}") for k, c in enumerate(cols))
        sketch.update(event)
        truth = row[truth_col].strip() if truth_col is not None and truth_col < len(row) else ""
        if truth:
            labelled.append((event, _vote(truth, row_no, "truth")))
            with_truth += 1
            if without_truth:
                raise InconsistentTruthColumn("truth present only in some rows", row=row_no)
        else:
            without_truth += 1
            if with_truth:
                raise InconsistentTruthColumn("truth missing in this row", row=row_no)
    return sketch, (labelled if with_truth else None)


def write_decisions(stream: Iterable, fh: TextIO, with_truth: bool = True) -> None:
    """Write events (or ``(event, truth)`` items) in the decisions table format."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["item_id", "c1", "c2", "c3"] + (["truth"] if with_truth else []))
    for k, item in enumerate(stream, start=1):
        event, truth = (item, None) if isinstance(item, str) else item
        w.writerow([k, *event] + ([truth] if with_truth else []))
