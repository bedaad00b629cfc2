import math

import numpy as np
import pytest

from depth_subconvexity.errors import InvalidParameters, NotAdditive
from depth_subconvexity.numtheory.characters import (
    DirichletCharacter,
    b_constant,
    dlog,
    e,
    e_frac,
    gauss_sum,
    induce,
    postnikov_constant,
    primitive_characters,
)
from depth_subconvexity.numtheory.residue import PrimePower


def test_additive_character_reduces_mod_one():
    assert abs(e(0.25) - 1j) < 1e-12
    assert abs(e(3.25) - e(0.25)) < 1e-12
    assert abs(e_frac(7, 4) - e_frac(3, 4)) < 1e-12


def test_dlog_matches_the_primitive_root_powers():
    pp = PrimePower(5, 2)
    assert dlog(2, pp) == 1
    assert dlog(6, pp) == 8


@pytest.mark.parametrize("p,r", [(3, 3), (5, 2), (7, 2)])
def test_characters_are_multiplicative(p, r):
    pp = PrimePower(p, r)
    chi = DirichletCharacter(pp, 1)
    m = np.arange(1, 200)
    for n in (2, 7, 13, 50):
        lhs = chi.values[(m * n) % pp.modulus]
        rhs = chi.values[m % pp.modulus] * chi.eval(n)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_character_vanishes_off_units():
    chi = DirichletCharacter(PrimePower(3, 2), 1)
    assert chi(3) == 0 and chi(6) == 0
    assert abs(abs(chi(2)) - 1) < 1e-12


def test_primitive_characters_count():
    assert len(primitive_characters(PrimePower(5, 2))) == 20 - 4
    assert len(primitive_characters(PrimePower(7, 1))) == 5


@pytest.mark.parametrize("p,r", [(3, 2), (3, 4), (5, 2), (7, 2), (11, 1)])
def test_gauss_sum_modulus(p, r):
    pp = PrimePower(p, r)
    for chi in primitive_characters(pp):
        assert abs(abs(gauss_sum(chi)) ** 2 - pp.modulus) <= 1e-6 * pp.modulus


def test_principal_gauss_sum_is_ramanujan_sum():
    assert abs(gauss_sum(DirichletCharacter(PrimePower(7, 1), 0)) - (-1)) < 1e-9


@pytest.mark.parametrize("p,r", [(3, 2), (5, 2)])
def test_gauss_expansion_identity(p, r):
    pp = PrimePower(p, r)
    for chi in primitive_characters(pp)[:4]:
        tau_bar = gauss_sum(chi.conjugate())
        beta = np.arange(pp.modulus)
        for m in range(pp.modulus):
            phases = np.exp(2j * math.pi * beta * m / pp.modulus)
            rebuilt = np.dot(chi.conjugate().values, phases) / tau_bar
            assert abs(rebuilt - chi(m)) < 1e-9


def test_induced_character_has_vanishing_gauss_sum():
    pp = PrimePower(3, 2)
    for chi in primitive_characters(pp):
        assert induce(chi, 2) == chi
        for s in (3, 4):
            lifted = induce(chi, s)
            assert not lifted.is_primitive
            assert abs(gauss_sum(lifted)) < 1e-9
            units = [n for n in range(1, 3**s) if n % 3]
            assert all(abs(lifted(n) - chi(n)) < 1e-9 for n in units)
    with pytest.raises(InvalidParameters):
        induce(DirichletCharacter(PrimePower(3, 3), 1), 2)


def test_postnikov_constant_example():
    chi = DirichletCharacter(PrimePower(5, 2), 1)
    const = postnikov_constant(chi, 1)
    assert const.value.modulus == 5
    assert const.value.value == 2


@pytest.mark.parametrize("p,r,t", [(3, 4, 2), (3, 4, 3), (5, 2, 1), (7, 2, 1), (3, 6, 3)])
def test_postnikov_constant_is_additive(p, r, t):
    pp = PrimePower(p, r)
    for chi in primitive_characters(pp)[:6]:
        a = postnikov_constant(chi, t).value.value
        width = p ** (r - t)
        for v in range(width):
            expected = np.exp(2j * math.pi * a * v / width)
            assert abs(chi(1 + v * p**t) - expected) < 1e-12
        conj = postnikov_constant(chi.conjugate(), t).value.value
        assert (a + conj) % width == 0


def test_postnikov_constant_needs_additive_level():
    chi = DirichletCharacter(PrimePower(3, 4), 1)
    with pytest.raises(NotAdditive):
        postnikov_constant(chi, 1)


def test_b_constant_matches_conjugate_minus_form():
    pp = PrimePower(3, 4)
    chi = DirichletCharacter(pp, 1)
    lam = 1
    b = b_constant(chi, lam).value.value
    width = 3**lam
    for t in range(width):
        lhs = chi.conjugate()(1 - 3 ** (4 - lam) * t)
        assert abs(lhs - np.exp(2j * math.pi * b * t / width)) < 1e-12
