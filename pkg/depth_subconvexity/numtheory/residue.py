"""Exact residue arithmetic for prime-power moduli.

Everything here is pure and immutable. Moduli are capped at ``MAX_MODULUS`` so the
vectorised int64 kernels elsewhere in the package never wrap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd
from typing import Sequence

import numpy as np
from sympy import factorint, isprime, multiplicity
from sympy.ntheory.modular import crt as _sympy_crt

from ..errors import (
    InvalidParameters,
    NotARoot,
    NotAUnit,
    NotInvertible,
    TooLarge,
    UndefinedValuation,
    UnsupportedPrime,
)

MAX_MODULUS = 1 << 40
ENUMERATION_LIMIT = 10**7


@dataclass(frozen=True)
class PrimePower:
    p: int
    r: int

    def __post_init__(self) -> None:
        if self.p == 2:
            raise UnsupportedPrime("p = 2 is not supported; the unit-group analysis needs odd p")
        if self.p < 2 or not isprime(self.p):
            raise InvalidParameters(f"{self.p} is not prime")
        if self.r < 1:
            raise InvalidParameters(f"exponent must be >= 1, got {self.r}")
        if self.p**self.r > MAX_MODULUS:
            raise TooLarge(f"{self.p}^{self.r} exceeds the 2^40 modulus cap")

    @cached_property
    def modulus(self) -> int:
        return int(self.p**self.r)

    @property
    def phi(self) -> int:
        return int(self.p ** (self.r - 1) * (self.p - 1))

    def at(self, s: int) -> "PrimePower":
        return PrimePower(self.p, s)


@dataclass(frozen=True)
class ResidueElement:
    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise InvalidParameters(f"modulus must be positive, got {self.modulus}")
        if self.modulus > MAX_MODULUS:
            raise TooLarge(f"modulus {self.modulus} exceeds the 2^40 cap")
        if not 0 <= self.value < self.modulus:
            raise InvalidParameters(f"{self.value} is not reduced mod {self.modulus}")

    @classmethod
    def of(cls, value: int, modulus: int) -> "ResidueElement":
        return cls(int(value) % int(modulus), int(modulus))

    def _check(self, other: "ResidueElement | int") -> int:
        if isinstance(other, ResidueElement):
            if other.modulus != self.modulus:
                raise InvalidParameters(
                    f"modulus mismatch: {self.modulus} vs {other.modulus}"
                )
            return other.value
        return int(other)

    def __add__(self, other: "ResidueElement | int") -> "ResidueElement":
        return ResidueElement.of(self.value + self._check(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other: "ResidueElement | int") -> "ResidueElement":
        return ResidueElement.of(self.value - self._check(other), self.modulus)

    def __rsub__(self, other: int) -> "ResidueElement":
        return ResidueElement.of(int(other) - self.value, self.modulus)

    def __mul__(self, other: "ResidueElement | int") -> "ResidueElement":
        return ResidueElement.of(self.value * self._check(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self) -> "ResidueElement":
        return ResidueElement.of(-self.value, self.modulus)

    def __pow__(self, exponent: int) -> "ResidueElement":
        if exponent < 0:
            return mod_inv(self) ** (-exponent)
        return ResidueElement(pow(self.value, exponent, self.modulus), self.modulus)

    def __int__(self) -> int:
        return self.value

    def is_unit(self) -> bool:
        return gcd(self.value, self.modulus) == 1

    def __str__(self) -> str:
        return f"{self.value} mod {self.modulus}"


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, coefficients in ascending degree."""

    coefficients: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        coeffs = [int(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def of(cls, *coefficients: int) -> "IntPolynomial":
        return cls(tuple(coefficients))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def eval_mod(self, x: int, m: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = (acc * x + c) % m
        return acc

    def eval_many_mod(self, xs: np.ndarray, m: int) -> np.ndarray:
        """Horner over an int64 array; requires m < 3e9 so products stay below 2^63."""
        if m >= 3_000_000_000:
            raise TooLarge(f"vectorised evaluation needs m < 3e9, got {m}")
        xs = np.asarray(xs, dtype=np.int64) % m
        acc = np.zeros_like(xs)
        for c in reversed(self.coefficients):
            acc = (acc * xs + (c % m)) % m
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coefficients))[1:])

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0,) * (n - len(self.coefficients))
        b = other.coefficients + (0,) * (n - len(other.coefficients))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(other * c for c in self.coefficients))
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def reduce_mod(self, m: int) -> "IntPolynomial":
        return IntPolynomial(tuple(c % m for c in self.coefficients))

    def equal_mod(self, other: "IntPolynomial", m: int) -> bool:
        return (self - other).reduce_mod(m).is_zero()


def mod_inv(a: ResidueElement) -> ResidueElement:
    try:
        return ResidueElement(pow(a.value, -1, a.modulus), a.modulus)
    except ValueError as exc:
        raise NotInvertible(f"{a.value} is not invertible mod {a.modulus}") from exc


def inv(a: int, m: int) -> int:
    """Integer shorthand for ``mod_inv``; returns the least nonnegative inverse."""
    return mod_inv(ResidueElement.of(a, m)).value


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise UndefinedValuation("valuation of 0 is undefined")
    return int(multiplicity(p, abs(n)))


def split_prime(n: int, p: int) -> tuple[int, int]:
    """Return (v_p(n), n / p^v_p(n))."""
    v = valuation(n, p)
    return v, abs(n) // p**v


def crt(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int]:
    solved = _sympy_crt(list(moduli), list(residues))
    if solved is None:
        raise InvalidParameters(f"inconsistent CRT system {list(residues)} mod {list(moduli)}")
    x, m = solved
    return int(x), int(m)


@lru_cache(maxsize=None)
def _order_primes(n: int) -> tuple[int, ...]:
    return tuple(sorted(factorint(n)))


def multiplicative_order_is(g: int, order: int, m: int) -> bool:
    if pow(g, order, m) != 1:
        return False
    return all(pow(g, order // ell, m) != 1 for ell in _order_primes(order))


@lru_cache(maxsize=None)
def _primitive_root(p: int, r: int) -> int:
    pp = PrimePower(p, r)
    m, phi = pp.modulus, pp.phi
    for g in range(2, m):
        if g % p and multiplicative_order_is(g, phi, m):
            return g
    raise InvalidParameters(f"no primitive root mod {m}")  # unreachable for odd p


def primitive_root(pp: PrimePower) -> ResidueElement:
    return ResidueElement(_primitive_root(pp.p, pp.r), pp.modulus)


def _small_dlog(h: int, gamma: int, ell: int, m: int) -> int:
    acc = 1
    for d in range(ell):
        if acc == h:
            return d
        acc = acc * gamma % m
    raise InvalidParameters("base is not a generator of the unit group")


def discrete_log(x: ResidueElement, g: ResidueElement, pp: PrimePower) -> int:
    """Pohlig-Hellman over the factorisation of phi(p^r) = p^(r-1)(p-1)."""
    m, n = pp.modulus, pp.phi
    if x.modulus != m or g.modulus != m:
        raise InvalidParameters("residues must live mod p^r")
    if x.value % pp.p == 0:
        raise NotAUnit(f"{x.value} is not a unit mod {m}")
    residues: list[int] = []
    moduli: list[int] = []
    for ell, e in factorint(n).items():
        gamma = pow(g.value, n // ell, m)
        g_inv = pow(g.value, -1, m)
        k = 0
        for i in range(e):
            h = pow(x.value * pow(g_inv, k, m) % m, n // ell ** (i + 1), m)
            k += _small_dlog(h, gamma, ell, m) * ell**i
        residues.append(k)
        moduli.append(ell**e)
    k, _ = crt(residues, moduli)
    k %= n
    if pow(g.value, k, m) != x.value:
        raise InvalidParameters("base is not a generator of the unit group")
    return k


def hensel_lift(f: IntPolynomial, root: ResidueElement, target: PrimePower) -> list[ResidueElement]:
    """All lifts of ``root`` (a root mod p^j) to roots of f mod p^s, sorted by value."""
    p = target.p
    j = valuation(root.modulus, p) if root.modulus > 1 else 0
    if p**j != root.modulus:
        raise InvalidParameters(f"root modulus {root.modulus} is not a power of {p}")
    if j > target.r:
        raise InvalidParameters("target level is below the root level")
    if f.eval_mod(root.value, root.modulus) != 0:
        raise NotARoot(f"{root} is not a root of f")
    level_roots = [root.value]
    for level in range(j, target.r):
        step, nxt = p**level, p ** (level + 1)
        level_roots = [
            x + t * step
            for x in level_roots
            for t in range(p)
            if f.eval_mod(x + t * step, nxt) == 0
        ]
        if not level_roots:
            break
    return [ResidueElement(x, target.modulus) for x in sorted(level_roots)]


def count_roots(f: IntPolynomial, m: int) -> int:
    if m > ENUMERATION_LIMIT:
        raise TooLarge(f"enumeration over {m} residues exceeds {ENUMERATION_LIMIT}")
    values = f.eval_many_mod(np.arange(m, dtype=np.int64), m)
    return int(np.count_nonzero(values == 0))


def units(m: int) -> np.ndarray:
    xs = np.arange(m, dtype=np.int64)
    return xs[np.gcd(xs, m) == 1]
