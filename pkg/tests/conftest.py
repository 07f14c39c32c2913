import sys
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from trioeval.forward import random_point  # noqa: E402
from trioeval.points import CorrelationSet, EvaluationPoint  # noqa: E402

settings.register_profile("repo", deadline=None)
settings.load_profile("repo")

TP1 = EvaluationPoint(F(3, 5), (F(9, 10), F(7, 10), F(4, 5)), (F(4, 5), F(3, 5), F(7, 10)))
SISTER_TP1 = EvaluationPoint(F(2, 5), (F(1, 5), F(2, 5), F(3, 10)), (F(1, 10), F(3, 10), F(1, 5)))


def single_gamma(pair, label, value, zero=F(0)):
    pairs = {p: (zero, zero) for p in ((0, 1), (0, 2), (1, 2))}
    pairs[pair] = (value, zero) if label == "a" else (zero, value)
    return CorrelationSet(pairs, (zero, zero))


def generic_points(seed, count):
    """Random rational points with every g_i != 0 and prevalence != 1/2."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p = random_point(rng)
        if all(g != 0 for g in p.g()) and p.prevalence != F(1, 2):
            out.append(p)
    return out


@pytest.fixture
def tp1():
    return TP1


@pytest.fixture
def sister_tp1():
    return SISTER_TP1


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
