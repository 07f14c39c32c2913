import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trioeval.errors import InvalidBracket, NegativeRadicand, NotRational
from trioeval.numerics import (
    coerce,
    format_scalar,
    golden_section_min,
    integer_sqrt_exact,
    is_rational_square,
    lcm_of_denominators,
    make_rng,
    parse_scalar,
    random_fraction,
    rational_sqrt,
    spawn_seeds,
)


def test_integer_sqrt_examples():
    assert integer_sqrt_exact(99225) == 315
    assert integer_sqrt_exact(2) is None
    assert integer_sqrt_exact(0) == 0


@given(st.integers(min_value=0, max_value=2**256))
def test_integer_sqrt_of_square(n):
    assert integer_sqrt_exact(n * n) == n
    if n > 1:
        assert integer_sqrt_exact(n * n + 1) is None


def test_rational_square_examples():
    assert rational_sqrt(F(99225, 156250000)) == F(315, 12500)
    assert is_rational_square(F(99225, 156250000))
    assert not is_rational_square(F(2))
    assert is_rational_square(F(0))
    with pytest.raises(NegativeRadicand):
        is_rational_square(F(-4))


def test_rational_sqrt_contract():
    with pytest.raises(NegativeRadicand):
        rational_sqrt(F(-1, 4))
    with pytest.raises(NotRational):
        rational_sqrt(0.25)


@given(st.fractions(min_value=0, max_value=10**6))
def test_rational_sqrt_roundtrip(x):
    assert rational_sqrt(x * x) == x


@given(
    st.integers(-(2**200), 2**200),
    st.integers(1, 2**200),
    st.integers(-(2**200), 2**200),
    st.integers(1, 2**200),
    st.integers(-(2**200), 2**200),
)
def test_field_axioms_big_rationals(a, b, c, d, e):
    x, y, z = F(a, b), F(c, d), F(e, b + d)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert (x * y).denominator > 0
    assert math.gcd((x * y).numerator, (x * y).denominator) == 1


def test_parse_and_format():
    assert parse_scalar("6/10") == F(3, 5)
    assert parse_scalar("0.125") == F(1, 8)
    assert parse_scalar(3) == F(3)
    assert parse_scalar(0.5) == F(1, 2)
    assert format_scalar(F(-6, 4)) == "-3/2"
    assert format_scalar(F(4, 2)) == "2"
    assert format_scalar(0.25) == 0.25
    assert coerce("1/3", exact=False) == pytest.approx(1 / 3)
    assert coerce("1/2", exact=True) == F(1, 2)
    with pytest.raises(NotRational):
        coerce(0.5, exact=True)


def test_lcm_of_denominators():
    assert lcm_of_denominators([F(1, 8)] * 8) == 8
    assert lcm_of_denominators([F(1, 2), F(1, 2), F(0)]) == 2
    assert lcm_of_denominators([F(1, 4), F(1, 6)]) == 12


def test_golden_section_quadratic():
    x, v = golden_section_min(lambda x: (x - 1 / 3) ** 2, 0.0, 1.0, 60)
    assert abs(x - 1 / 3) < 1e-10
    assert v == pytest.approx(0.0, abs=1e-20)


def test_golden_section_constant():
    x, v = golden_section_min(lambda x: 7.0, 0.0, 1.0)
    assert 0.0 <= x <= 1.0 and v == 7.0


def test_golden_section_non_unimodal_stays_in_bracket():
    x, _ = golden_section_min(lambda x: math.sin(12 * x), 0.0, 1.0)
    assert 0.0 <= x <= 1.0
    h = 1e-6
    assert math.sin(12 * x) <= math.sin(12 * (x + h)) + 1e-12 or x + h > 1
    assert math.sin(12 * x) <= math.sin(12 * (x - h)) + 1e-12 or x - h < 0


def test_golden_section_bad_bracket():
    with pytest.raises(InvalidBracket):
        golden_section_min(lambda x: x, 1.0, 0.0)


def test_rng_determinism_and_spawning():
    a = make_rng(42).integers(0, 2**32, 5)
    b = make_rng(42).integers(0, 2**32, 5)
    assert (a == b).all()
    s1, s2 = spawn_seeds(7, 2)
    assert not (make_rng(s1).random(4) == make_rng(s2).random(4)).all()


def test_random_fraction_on_grid():
    rng = np.random.default_rng(0)
    for _ in range(200):
        x = random_fraction(rng, F(3, 5), F(19, 20), 100)
        assert F(3, 5) <= x <= F(19, 20)
        assert 100 % x.denominator == 0
