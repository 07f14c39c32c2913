"""Synthetic experiment driver.

Two experiment shapes are supported:

* failure profiles, the share of trials whose independent evaluation is
  seemingly correct, by test size;
* scatters of the largest realised pair correlation against the distance of
  the independent estimate from the containing variety.

A trial samples a ground truth, draws a finite stream from it and evaluates the
stream's sketch. Every random choice is derived from ``(seed, trial[, size])``,
so records are identical regardless of worker count, and two configs that
differ only in the correlation cap see the same prevalences, accuracies and
stream seeds.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InfeasibleMoments, MissingLabel
from .evaluators import FAILURE_KINDS, independent_evaluate
from .forward import random_point, sample_correlations, sample_stream
from .numerics import PRNG_NAME
from .sketch import DecisionSketch, EVENT_INDEX, joint_counts, truth_from_counts
from .variety import project

log = logging.getLogger(__name__)

SUCCESS = "success"

#: Recorded in output metadata: trials are sampled ground truths, not
#: feature partitions of real datasets.
FIDELITY_NOTE = "synthetic ground-truth samples stand in for trained feature partitions"


@dataclass
class ProfileConfig:
    test_sizes: Sequence[int] = (100, 1000, 10000)
    trials_per_size: int = 100
    prevalence_range: tuple = (0.25, 0.75)
    accuracy_range: tuple = (0.6, 0.95)
    corr_cap: float = 0.0
    triple_corr: bool = True
    seed: int = 0
    mode: str = "float"
    repeats: int = 1
    max_retries: int = 100
    grid: int = 512
    refinements: int = 40

    def __post_init__(self):
        self.test_sizes = [int(n) for n in self.test_sizes]
        if any(b <= a for a, b in zip(self.test_sizes, self.test_sizes[1:])):
            raise ValueError("test_sizes must be strictly increasing")
        if self.trials_per_size < 1 or self.repeats < 1:
            raise ValueError("trials_per_size and repeats must be >= 1")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"mode must be 'exact' or 'float', not {self.mode!r}")
        self.prevalence_range = tuple(self.prevalence_range)
        self.accuracy_range = tuple(self.accuracy_range)

    @classmethod
    def from_dict(cls, d: dict) -> "ProfileConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path: str) -> "ProfileConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ProfileRecord:
    test_size: int
    trials: int
    evaluations: int
    successes: int
    fraction_seemingly_correct: float
    fraction_never_solvable: float
    failure_histogram: dict = field(default_factory=dict)

    def row(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if k != "failure_histogram"}
        out.update({kind: self.failure_histogram.get(kind, 0) for kind in FAILURE_KINDS})
        return out


@dataclass
class ScatterRecord:
    trial: int
    test_size: int
    max_abs_pair_corr: float
    distance: float | None
    outcome: str

    def row(self) -> dict:
        return asdict(self)


def _truth(config: ProfileConfig, trial: int):
    """Ground truth for a trial, resampled while its correlations are infeasible."""
    ss = np.random.SeedSequence([config.seed, trial])
    point_rng, corr_rng = (np.random.Generator(np.random.PCG64(s)) for s in ss.spawn(2))
    for _ in range(config.max_retries):
        point = random_point(
            point_rng, config.prevalence_range, config.accuracy_range, exact=False
        )
        try:
            corr = sample_correlations(corr_rng, point, config.corr_cap, config.triple_corr)
        except InfeasibleMoments:
            continue
        return point, corr
    raise InfeasibleMoments(
        f"trial {trial}: no feasible ground truth after {config.max_retries} retries"
    )


def _stream_seed(config: ProfileConfig, trial: int, n: int, repeat: int) -> int:
    ss = np.random.SeedSequence([config.seed, trial, n, repeat])
    return int(ss.generate_state(1, np.uint64)[0])


def _sketch(stream) -> DecisionSketch:
    idx = np.fromiter((EVENT_INDEX[e] for e, _ in stream), dtype=np.int64, count=len(stream))
    return DecisionSketch().update_many(idx)


def _profile_trial(config: ProfileConfig, trial: int, n: int) -> list[str]:
    point, corr = _truth(config, trial)
    outcomes = []
    for r in range(config.repeats):
        stream = sample_stream(point, corr, n, _stream_seed(config, trial, n, r))
        outcome = independent_evaluate(_sketch(stream), exact=config.mode == "exact")
        outcomes.append(SUCCESS if outcome.ok else outcome.failure.kind)
    return outcomes


def _scatter_trial(config: ProfileConfig, trial: int, n: int) -> ScatterRecord:
    point, corr = _truth(config, trial)
    stream = sample_stream(point, corr, n, _stream_seed(config, trial, n, 0))
    try:
        realised = truth_from_counts(joint_counts(stream)).correlations.max_abs_pair()
    except MissingLabel:
        realised = float("nan")
    sketch = _sketch(stream)
    outcome = independent_evaluate(sketch, exact=config.mode == "exact")
    if not outcome.ok:
        return ScatterRecord(trial, n, float(realised), None, outcome.failure.kind)
    # both variety points are mirror images, so their distances agree
    dist = project(outcome.points[0], sketch, config.grid, config.refinements).distance
    return ScatterRecord(trial, n, float(realised), dist, SUCCESS)


def _call(args):
    fn, config, trial, n = args
    return fn(config, trial, n)


def _run(fn, config: ProfileConfig, jobs: int):
    tasks = [(n, t) for n in config.test_sizes for t in range(config.trials_per_size)]
    if jobs <= 1:
        return [fn(config, t, n) for n, t in tasks]
    chunk = max(1, len(tasks) // (jobs * 8))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_call, [(fn, config, t, n) for n, t in tasks], chunksize=chunk))


def profile_failures(config: ProfileConfig, jobs: int = 1) -> list[ProfileRecord]:
    """Share of seemingly correct evaluations per test size.

    A ground truth counts as never solvable when none of its ``repeats``
    streams produced a seemingly correct evaluation.
    """
    results = _run(_profile_trial, config, jobs)
    records = []
    k = 0
    for n in config.test_sizes:
        chunk = results[k : k + config.trials_per_size]
        k += config.trials_per_size
        flat = [o for outcomes in chunk for o in outcomes]
        hist = {kind: flat.count(kind) for kind in FAILURE_KINDS}
        successes = flat.count(SUCCESS)
        never = sum(SUCCESS not in outcomes for outcomes in chunk)
        records.append(
            ProfileRecord(
                n,
                len(chunk),
                len(flat),
                successes,
                successes / len(flat),
                never / len(chunk),
                hist,
            )
        )
        log.info("size %d: %d/%d seemingly correct", n, successes, len(flat))
    return records


def scatter_distance_correlation(config: ProfileConfig, jobs: int = 1) -> list[ScatterRecord]:
    """One record per trial: realised max |pair correlation| and estimate distance."""
    return _run(_scatter_trial, config, jobs)


def metadata(config: ProfileConfig) -> dict:
    return {"prng": PRNG_NAME, "fidelity": FIDELITY_NOTE, "config": config.to_dict()}


def to_csv(records: Iterable) -> str:
    rows = [r.row() for r in records]
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def to_jsonl(records: Iterable) -> str:
    return "".join(json.dumps(r.row(), sort_keys=True) + "\n" for r in records)
