"""Dirichlet characters of odd prime-power modulus, Gauss sums and Postnikov constants."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from ..errors import InvalidParameters, NoConstant, NotAdditive
from .residue import PrimePower, ResidueElement, discrete_log, primitive_root

UnitComplex = complex

TWO_PI = 2.0 * math.pi
LOG_TABLE_LIMIT = 10**7


def e(x: float) -> UnitComplex:
    """exp(2 pi i x) with x reduced mod 1 first."""
    return cmath.exp(1j * TWO_PI * (x - math.floor(x)))


def e_frac(num: int, den: int) -> UnitComplex:
    return cmath.exp(1j * TWO_PI * ((num % den) / den))


def e_array(num: np.ndarray, den: int) -> np.ndarray:
    """Vectorised e(num/den) for integer numerators; reduction is exact."""
    return np.exp(1j * TWO_PI * (np.mod(num, den) / den))


@lru_cache(maxsize=64)
def _log_table(p: int, r: int) -> np.ndarray:
    """dlog_g(n) for n mod p^r, -1 at non-units."""
    pp = PrimePower(p, r)
    m = pp.modulus
    if m > LOG_TABLE_LIMIT:
        raise InvalidParameters(f"log table for modulus {m} exceeds {LOG_TABLE_LIMIT}")
    g = primitive_root(pp).value
    table = np.full(m, -1, dtype=np.int64)
    acc = 1
    for k in range(pp.phi):
        table[acc] = k
        acc = acc * g % m
    table.setflags(write=False)
    return table


def dlog(n: int, pp: PrimePower) -> int:
    if pp.modulus <= LOG_TABLE_LIMIT:
        value = int(_log_table(pp.p, pp.r)[n % pp.modulus])
        if value >= 0:
            return value
    return discrete_log(ResidueElement.of(n, pp.modulus), primitive_root(pp), pp)


@dataclass(frozen=True)
class DirichletCharacter:
    pp: PrimePower
    index: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", int(self.index) % self.pp.phi)

    @property
    def generator(self) -> ResidueElement:
        return primitive_root(self.pp)

    @property
    def modulus(self) -> int:
        return self.pp.modulus

    @cached_property
    def values(self) -> np.ndarray:
        """chi(n) for n = 0..p^r - 1; exactly 0 off the units."""
        table = _log_table(self.pp.p, self.pp.r)
        out = np.zeros(self.modulus, dtype=np.complex128)
        unit = table >= 0
        out[unit] = e_array(self.index * table[unit], self.pp.phi)
        out.setflags(write=False)
        return out

    def eval(self, n: int) -> UnitComplex:
        return complex(self.values[n % self.modulus])

    __call__ = eval

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.pp, -self.index)

    @property
    def is_primitive(self) -> bool:
        if self.pp.r == 1:
            return self.index % self.pp.phi != 0
        return self.index % self.pp.p != 0

    @property
    def is_principal(self) -> bool:
        return self.index == 0

    def __str__(self) -> str:
        return f"chi[{self.index}] mod {self.pp.p}^{self.pp.r}"


def primitive_characters(pp: PrimePower) -> list[DirichletCharacter]:
    chars = (DirichletCharacter(pp, i) for i in range(pp.phi))
    return [chi for chi in chars if chi.is_primitive]


def gauss_sum(chi: DirichletCharacter) -> complex:
    m = chi.modulus
    return complex(np.dot(chi.values, e_array(np.arange(m), m)))


def induce(chi: DirichletCharacter, s: int) -> DirichletCharacter:
    """The character mod p^s agreeing with chi on units."""
    r = chi.pp.r
    if s < r:
        raise InvalidParameters(f"cannot induce from p^{r} down to p^{s}")
    if s == r:
        return chi
    target = chi.pp.at(s)
    g_s = primitive_root(target).value
    index = chi.index * dlog(g_s, chi.pp) * chi.pp.p ** (s - r)
    return DirichletCharacter(target, index)


@dataclass(frozen=True)
class PostnikovConstant:
    t: int
    value: ResidueElement


def _verify_additive(chi: DirichletCharacter, t: int, a: int, sign: int) -> bool:
    p, r = chi.pp.p, chi.pp.r
    width = p ** (r - t)
    v = np.arange(width, dtype=np.int64)
    lhs = chi.values[(1 + sign * v * p**t) % chi.modulus]
    rhs = e_array(a * v, width)
    return bool(np.max(np.abs(lhs - rhs)) <= 1e-9)


def postnikov_constant(chi: DirichletCharacter, t: int) -> PostnikovConstant:
    """A mod p^(r-t) with chi(1 + v p^t) = e(A v / p^(r-t)) for every v."""
    p, r = chi.pp.p, chi.pp.r
    if 2 * t < r:
        raise NotAdditive(f"v -> chi(1 + v p^{t}) is not additive mod p^{r} (need 2t >= r)")
    if t > r:
        raise InvalidParameters(f"level {t} exceeds the exponent {r}")
    if not chi.is_primitive:
        raise InvalidParameters(f"{chi} is not primitive")
    width = p ** (r - t)
    # 1 + p^t has order p^(r-t), so its log is a multiple of phi / p^(r-t)
    log = dlog(1 + p**t, chi.pp)
    a = chi.index * (log // (chi.pp.phi // width)) % width
    if not _verify_additive(chi, t, a, +1):
        raise NoConstant(f"additive constant for {chi} at level {t} failed verification")
    return PostnikovConstant(t, ResidueElement(a, width))


def b_constant(chi: DirichletCharacter, lam: int) -> PostnikovConstant:
    """B mod p^lam with conj(chi)(1 - p^(r-lam) t) = e(B t / p^lam) for every t."""
    a = postnikov_constant(chi.conjugate(), chi.pp.r - lam)
    b = (-a.value.value) % a.value.modulus
    if not _verify_additive(chi.conjugate(), chi.pp.r - lam, b, -1):
        raise NoConstant(f"B constant for {chi} at depth {lam} failed verification")
    return PostnikovConstant(chi.pp.r - lam, ResidueElement(b, a.value.modulus))
