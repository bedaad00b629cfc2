import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depth_subconvexity.errors import (
    InvalidParameters,
    NotARoot,
    NotAUnit,
    NotInvertible,
    TooLarge,
    UndefinedValuation,
    UnsupportedPrime,
)
from depth_subconvexity.numtheory.residue import (
    IntPolynomial,
    PrimePower,
    ResidueElement,
    count_roots,
    crt,
    discrete_log,
    hensel_lift,
    inv,
    mod_inv,
    multiplicative_order_is,
    primitive_root,
    units,
    valuation,
)


def test_mod_inv_examples():
    assert mod_inv(ResidueElement(3, 10)) == ResidueElement(7, 10)
    assert mod_inv(ResidueElement(1, 13)).value == 1
    with pytest.raises(NotInvertible):
        mod_inv(ResidueElement(6, 9))


@given(st.integers(min_value=2, max_value=10_000), st.integers(min_value=1, max_value=10**6))
def test_mod_inv_is_an_involution(m, a):
    x = ResidueElement.of(a, m)
    if not x.is_unit():
        return
    y = mod_inv(x)
    assert (x * y).value == 1 % m
    assert mod_inv(y) == x


def test_valuation_examples():
    assert valuation(45, 3) == 2
    assert valuation(7, 5) == 0
    assert valuation(250, 5) == 3
    with pytest.raises(UndefinedValuation):
        valuation(0, 3)


def test_residue_element_rejects_unreduced_values():
    with pytest.raises(InvalidParameters):
        ResidueElement(10, 10)
    with pytest.raises(InvalidParameters):
        ResidueElement(1, 5) + ResidueElement(1, 7)


def test_prime_power_rejects_two_and_composites():
    with pytest.raises(UnsupportedPrime):
        PrimePower(2, 3)
    with pytest.raises(InvalidParameters):
        PrimePower(9, 1)
    with pytest.raises(TooLarge):
        PrimePower(3, 30)
    assert PrimePower(5, 3).phi == 100


def test_primitive_root_is_smallest_generator():
    assert primitive_root(PrimePower(5, 2)).value == 2
    assert primitive_root(PrimePower(3, 1)).value == 2
    assert primitive_root(PrimePower(7, 2)).value == 3


@pytest.mark.parametrize("p,r", [(3, 4), (5, 3), (7, 2), (11, 2), (13, 1)])
def test_primitive_root_has_full_order(p, r):
    pp = PrimePower(p, r)
    g = primitive_root(pp).value
    assert multiplicative_order_is(g, pp.phi, pp.modulus)


def test_discrete_log_examples():
    pp = PrimePower(5, 2)
    g = primitive_root(pp)
    assert discrete_log(ResidueElement(6, 25), g, pp) == 8
    assert discrete_log(g, g, pp) == 1
    assert discrete_log(ResidueElement(1, 25), g, pp) == 0
    with pytest.raises(NotAUnit):
        discrete_log(ResidueElement(10, 25), g, pp)


@pytest.mark.parametrize("p,r", [(3, 5), (5, 3), (7, 3), (97, 2)])
def test_discrete_log_matches_power_table(p, r):
    pp = PrimePower(p, r)
    g = primitive_root(pp)
    acc = 1
    for k in range(pp.phi):
        assert discrete_log(ResidueElement(acc, pp.modulus), g, pp) == k
        acc = acc * g.value % pp.modulus


def test_hensel_lift_examples():
    f = IntPolynomial.of(-6, 0, 1)
    target = PrimePower(5, 2)
    assert [x.value for x in hensel_lift(f, ResidueElement(4, 5), target)] == [9]
    assert [x.value for x in hensel_lift(f, ResidueElement(1, 5), target)] == [16]
    square = IntPolynomial.of(0, 0, 1)
    lifts = hensel_lift(square, ResidueElement(0, 5), target)
    assert [x.value for x in lifts] == [0, 5, 10, 15, 20]
    with pytest.raises(NotARoot):
        hensel_lift(f, ResidueElement(2, 5), target)


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from([3, 5, 7]),
    st.integers(min_value=2, max_value=4),
    st.lists(st.integers(min_value=-20, max_value=20), min_size=2, max_size=4),
)
def test_nonsingular_roots_lift_uniquely(p, s, coeffs):
    f = IntPolynomial(tuple(coeffs))
    if f.degree < 1:
        return
    df = f.derivative()
    target = PrimePower(p, s)
    total = 0
    for x0 in range(p):
        if f.eval_mod(x0, p) or df.eval_mod(x0, p) == 0:
            continue
        lifts = hensel_lift(f, ResidueElement(x0, p), target)
        assert len(lifts) == 1
        assert f.eval_mod(lifts[0].value, target.modulus) == 0
        total += 1
    singular = any(f.eval_mod(x, p) == 0 and df.eval_mod(x, p) == 0 for x in range(p))
    if not singular:
        assert count_roots(f, target.modulus) == total


def test_count_roots_examples():
    assert count_roots(IntPolynomial.of(-1, 0, 1), 8) == 4
    assert count_roots(IntPolynomial.of(-6, 0, 1), 25) == 2
    assert count_roots(IntPolynomial.of(-3, 1), 11) == 1
    with pytest.raises(TooLarge):
        count_roots(IntPolynomial.of(0, 1), 10**7 + 1)


@given(
    st.lists(st.integers(min_value=-50, max_value=50), min_size=1, max_size=5),
    st.integers(min_value=-1000, max_value=1000),
    st.integers(min_value=-1000, max_value=1000),
    st.integers(min_value=2, max_value=500),
)
def test_evaluation_is_a_ring_homomorphism(coeffs, x, y, m):
    f = IntPolynomial(tuple(coeffs))
    g = IntPolynomial.of(1, 1)
    assert f.eval_mod(x, m) == f(x) % m
    assert (f * g).eval_mod(x, m) == f.eval_mod(x, m) * g.eval_mod(x, m) % m
    assert (f + g).eval_mod(y, m) == (f.eval_mod(y, m) + g.eval_mod(y, m)) % m


def test_crt_and_inverse_shorthand():
    assert crt([2, 3], [3, 5]) == (8, 15)
    assert inv(3, 10) == 7
    with pytest.raises(InvalidParameters):
        crt([0, 1], [4, 6])


def test_units_are_the_residues_coprime_to_the_modulus():
    assert units(9).tolist() == [1, 2, 4, 5, 7, 8]
    assert units(10).tolist() == [1, 3, 7, 9]
