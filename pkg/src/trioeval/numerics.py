"""Scalar helpers shared by every module.

A *scalar* is either a :class:`fractions.Fraction` (exact mode) or a Python
``float`` (float mode). Computations never mix the two silently: callers pick a
mode up front with :func:`coerce` and everything downstream follows the type of
its inputs.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Union

import numpy as np

from .errors import InvalidBracket, NegativeRadicand, NotRational

Scalar = Union[Fraction, float]

#: Zero threshold used by float-mode evaluators.
FLOAT_TOL = 1e-9

#: Identifier of the pseudo random generator, reported in outputs.
PRNG_NAME = "numpy-PCG64/SeedSequence"

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def parse_scalar(value) -> Fraction:
    """Parse ``"p/q"``, ``"0.25"``, ints or Fractions into an exact rational.

    Floats are converted through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite scalar {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a scalar")


def coerce(value, exact: bool) -> Scalar:
    """Convert to the requested mode."""
    if exact:
        if isinstance(value, float):
            raise NotRational(f"float {value!r} in exact mode; parse it explicitly")
        return parse_scalar(value)
    if isinstance(value, str):
        return float(parse_scalar(value))
    return float(value)


def format_scalar(x) -> str | float:
    """Rationals become canonical ``"p/q"`` strings; floats pass through."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    return float(x)


def integer_sqrt_exact(n: int) -> int | None:
    """Return ``r`` with ``r * r == n``, or ``None`` when ``n`` is not a square.

    >>> integer_sqrt_exact(99225)
    315
    >>> integer_sqrt_exact(2) is None
    True
    """
    if n < 0:
        raise ValueError("integer_sqrt_exact needs n >= 0")
    r = math.isqrt(n)
    return r if r * r == n else None


def rational_sqrt(x) -> Fraction | None:
    """Exact square root of a nonnegative rational, or ``None`` if irrational."""
    if not is_exact(x):
        raise NotRational(f"{x!r} is not an exact rational")
    x = Fraction(x)
    if x < 0:
        raise NegativeRadicand(f"negative radicand {x}")
    p = integer_sqrt_exact(x.numerator)
    if p is None:
        return None
    q = integer_sqrt_exact(x.denominator)
    if q is None:
        return None
    return Fraction(p, q)


def is_rational_square(x) -> bool:
    """True iff ``x == (p/q)**2`` for integers p, q.

    Raises :class:`NegativeRadicand` for negative input, since that case is a
    complex root rather than an unresolved one.
    """
    return rational_sqrt(x) is not None


def lcm_of_denominators(values: Iterable) -> int:
    out = 1
    for v in values:
        if not is_exact(v):
            raise NotRational(f"{v!r} is not an exact rational")
        out = math.lcm(out, Fraction(v).denominator)
    return out


def golden_section_min(
    f: Callable[[float], float], lo: float, hi: float, iters: int = 60
) -> tuple[float, float]:
    """Minimise ``f`` on ``[lo, hi]`` by golden-section search.

    The bracket shrinks by the golden ratio every iteration. For a unimodal
    ``f`` this converges to the minimiser; otherwise a local minimum inside the
    bracket is returned.
    """
    if not lo < hi:
        raise InvalidBracket(f"need lo < hi, got [{lo}, {hi}]")
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    if fc <= fd:
        return c, fc
    return d, fd


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent child seeds, one per worker or trial."""
    return np.random.SeedSequence(int(seed)).spawn(count)


def random_fraction(
    rng: np.random.Generator, lo, hi, denominator: int
) -> Fraction:
    """Uniform draw from the grid ``{k / denominator}`` inside ``[lo, hi]``."""
    lo_k = math.ceil(Fraction(lo) * denominator)
    hi_k = math.floor(Fraction(hi) * denominator)
    if lo_k > hi_k:
        raise ValueError(f"no multiple of 1/{denominator} in [{lo}, {hi}]")
    return Fraction(int(rng.integers(lo_k, hi_k + 1)), denominator)
