from fractions import Fraction
from math import factorial

import pytest

from qszego import constants as C
from qszego.constants import PI, PiScaled
from qszego.errors import RangeError


def test_alpha_closed_form_matches_sum():
    for n in range(1, 6):
        for k in range(2 * n + 1):
            assert C.alpha(n, k) == C.alpha_sum(n, k)
    assert [C.alpha(1, k) for k in range(3)] == [14, 8, 3]
    with pytest.raises(RangeError):
        C.alpha(1, 3)


def test_binomial_edges():
    assert C.binom(5, 2) == 10
    assert C.binom(3, 4) == 0
    assert C.binom(-1, 0) == 0
    assert [C.binom(6, s) for s in range(7)] == [1, 6, 15, 20, 15, 6, 1]


def test_constant_values_exact():
    assert C.c_paper(1) == PiScaled(Fraction(6237, 872), -6)
    assert C.c_paper(2) == PiScaled(Fraction(11486475, 193472), -10)
    assert C.K_sum(1) == Fraction(109, 1995840)


def test_K1_from_inverting_the_constant():
    # solve the constant formula for K with c1 taken as given
    c1 = Fraction(6237, 872)
    K1 = Fraction(3, 2**7 * factorial(2) ** 2 * 3 * 5) / c1
    assert K1 == C.K_sum(1)


@pytest.mark.parametrize("n", range(1, 7))
def test_value_at_e_closes(n):
    assert C.F_e_from_constant(n) == PiScaled.rational(C.F_e_closed(n))


def test_value_at_e_small_cases():
    assert C.F_e_closed(0) == Fraction(1, 8)
    assert C.F_e_closed(1) == Fraction(24, 64)


def test_constant_needs_positive_n():
    with pytest.raises(RangeError):
        C.c_paper(0)
    with pytest.raises(RangeError):
        C.K_sum(-1)


def test_pi_scaled_arithmetic():
    x = PiScaled(Fraction(3, 2), 1)
    assert x * x == PiScaled(Fraction(9, 4), 2)
    assert (x / x) == PiScaled.rational(1)
    assert float(PI) == pytest.approx(3.141592653589793, rel=1e-15)
    assert float(PiScaled(Fraction(1), 1)) == pytest.approx(3.141592653589793**0.5, rel=1e-15)
    assert PiScaled(0, 5) == PiScaled.rational(0)
