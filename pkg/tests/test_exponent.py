from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from depth_subconvexity.charsum.exponent import LinearForm, exponent_optimizer
from depth_subconvexity.errors import NoCrossing


def test_known_crossing():
    sol = exponent_optimizer(LinearForm.parse("3/4,3/4"), LinearForm.parse("7/4,-1/2"))
    assert sol.ratio == Fraction(4, 5)
    assert sol.sum_exponent == Fraction(27, 20)
    assert sol.saving == Fraction(3, 20)
    assert sol.level(10) == 8
    assert sol.to_dict()["ratio"] == "4/5"


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        LinearForm.parse("3/4")


def test_parallel_or_same_direction_forms_do_not_cross():
    with pytest.raises(NoCrossing):
        exponent_optimizer(LinearForm.of(1, "1/2"), LinearForm.of(2, "1/2"))
    with pytest.raises(NoCrossing):
        exponent_optimizer(LinearForm.of(1, "1/2"), LinearForm.of(2, "1/3"))


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=12)


@given(fractions, fractions, fractions, fractions)
def test_crossing_balances_both_forms(a1, b1, a2, b2):
    if b1 == b2 or b1 * b2 > 0:
        return
    sol = exponent_optimizer(LinearForm(a1, b1), LinearForm(a2, b2))
    assert LinearForm(a1, b1).at(sol.ratio) == LinearForm(a2, b2).at(sol.ratio)
