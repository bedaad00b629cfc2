"""Parameter tuples for the character sum and its post-Poisson pairing."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from functools import lru_cache
from typing import Any

from ..errors import InvalidParameters, MathDomainError, Unsupported, UnsupportedParity
from ..numtheory.characters import (
    DirichletCharacter,
    PostnikovConstant,
    b_constant,
    postnikov_constant,
)
from ..numtheory.residue import PrimePower, split_prime


@lru_cache(maxsize=4096)
def _a_constant(p: int, r: int, index: int) -> PostnikovConstant:
    return postnikov_constant(DirichletCharacter(PrimePower(p, r), index), r // 2)


@lru_cache(maxsize=4096)
def _b_constant(p: int, r: int, index: int, lam: int) -> PostnikovConstant:
    return b_constant(DirichletCharacter(PrimePower(p, r), index), lam)


@dataclass(frozen=True, order=True)
class CharsumParams:
    """One tuple (p, r, l, l1, q, k, n1, n2, m, sign, chi) driving every sum in this package.

    Derived exponents are properties and are recomputed on access.
    """

    p: int
    r: int
    ell: int
    ell1: int = 0
    q: int = 1
    k: int = 1
    n1: int = 1
    n2: int = 1
    m: int = 1
    sign: int = 1
    chi_index: int = 1

    # -- primitive decompositions ---------------------------------------------------------
    @property
    def pp(self) -> PrimePower:
        return PrimePower(self.p, self.r)

    @property
    def chi(self) -> DirichletCharacter:
        return DirichletCharacter(self.pp, self.chi_index)

    @property
    def ell_prime(self) -> int:
        return split_prime(self.q, self.p)[0]

    @property
    def q_prime(self) -> int:
        return split_prime(self.q, self.p)[1]

    @property
    def ell3(self) -> int:
        return split_prime(self.k, self.p)[0]

    @property
    def k_prime(self) -> int:
        return split_prime(self.k, self.p)[1]

    @property
    def ell4(self) -> int:
        return split_prime(self.n1, self.p)[0]

    @property
    def n1_prime(self) -> int:
        return split_prime(self.n1, self.p)[1]

    # -- derived exponents ----------------------------------------------------------------
    @property
    def ell2(self) -> int:
        lp, gap = self.ell_prime, self.r - self.ell
        if lp == 0:
            return 0
        if lp == gap:
            raise Unsupported(f"l' = r - l = {gap} is a boundary case without a closed form")
        return lp if lp < gap else gap

    @property
    def ell5(self) -> int:
        return self.ell + self.ell_prime + self.ell3 - self.ell1 - self.ell4

    @property
    def ell6(self) -> int:
        return 2 * (self.r - self.ell + self.ell1)

    @property
    def depth(self) -> int:
        """L = l - l1 + l': the p-depth of the Gauss-sum evaluation."""
        return self.ell - self.ell1 + self.ell_prime

    @property
    def lam(self) -> int:
        return self.depth // 2

    @property
    def s(self) -> int:
        return int(self.p ** (self.r - self.depth))

    @property
    def voronoi_modulus(self) -> int:
        return self.q * self.p ** (self.ell - self.ell1)

    @property
    def kloosterman_modulus(self) -> int:
        return self.voronoi_modulus * self.k // self.n1

    @property
    def term_count(self) -> int:
        return self.q * self.p**self.ell * self.pp.phi * self.kloosterman_modulus

    # -- character constants --------------------------------------------------------------
    @property
    def a_constant(self) -> int:
        return _a_constant(self.p, self.r, self.chi.index).value.value

    @property
    def b_constant(self) -> int:
        return _b_constant(self.p, self.r, self.chi.index, self.lam).value.value

    # -- validation -----------------------------------------------------------------------
    def problems(self) -> list[str]:
        """Structural problems; parity is checked separately by ``require_even``."""
        out: list[str] = []
        try:
            pp = self.pp
        except MathDomainError as exc:
            return [str(exc)]
        if self.r < 2:
            out.append("r must be at least 2")
        if not 1 <= self.ell < self.r:
            out.append(f"need 1 <= l < r, got l={self.ell}")
        if not 0 <= self.ell1 <= self.ell:
            out.append(f"need 0 <= l1 <= l, got l1={self.ell1}")
        if self.q < 1 or self.k < 1 or self.n1 < 1:
            out.append("q, k and n1 must be positive")
            return out
        if self.sign not in (1, -1):
            out.append("sign must be +1 or -1")
        if self.ell_prime > 0 and self.ell1 != 0:
            out.append("p | q requires l1 = 0")
        if (self.voronoi_modulus * self.k) % self.n1:
            out.append(f"n1={self.n1} must divide q p^(l-l1) k = {self.voronoi_modulus * self.k}")
        if not DirichletCharacter(pp, self.chi_index).is_primitive:
            out.append(f"character index {self.chi_index} is not primitive mod {pp.modulus}")
        return out

    def validate(self) -> "CharsumParams":
        found = self.problems()
        if found:
            raise InvalidParameters("; ".join(found))
        return self

    def require_even(self, depth: bool = True) -> None:
        if self.r % 2:
            raise UnsupportedParity(f"r = {self.r} is odd")
        if depth and self.depth % 2:
            raise UnsupportedParity(f"l - l1 + l' = {self.depth} is odd")

    def with_(self, **changes: Any) -> "CharsumParams":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, int]:
        return asdict(self)


@dataclass(frozen=True, order=True)
class PoissonPair:
    """Two sides of the post-Poisson pairing.

    Side one has modulus q = q1' q2' and frequency m; side two has q'' = q1' q2'' and m'.
    """

    base: CharsumParams
    q1: int
    q2: int
    q2_second: int
    m_second: int

    @classmethod
    def build(
        cls, base: CharsumParams, q1: int, q2: int, q2_second: int, m_second: int
    ) -> "PoissonPair":
        return cls(base.with_(q=q1 * q2), q1, q2, q2_second, m_second)

    @property
    def first(self) -> CharsumParams:
        return self.base

    @property
    def second(self) -> CharsumParams:
        return self.base.with_(q=self.q1 * self.q2_second, m=self.m_second)

    @property
    def modulus(self) -> int:
        """The Poisson modulus p^l5 q1' q2' q2'' k' / n1'."""
        b = self.base
        return b.p**b.ell5 * self.q1 * self.q2 * self.q2_second * b.k_prime // b.n1_prime

    def problems(self) -> list[str]:
        out = self.first.problems() + self.second.problems()
        b = self.base
        for q in (self.q1, self.q2, self.q2_second):
            if q < 1 or q % b.p == 0:
                out.append(f"modulus part {q} must be a positive integer coprime to p")
        if math.gcd(self.q2 * self.q2_second, b.n1_prime * b.k_prime) != 1:
            out.append("need gcd(q2' q2'', n1' k') = 1")
        if b.k_prime % b.n1_prime:
            out.append("need n1' | k'")
        return out

    def validate(self) -> "PoissonPair":
        found = self.problems()
        if found:
            raise InvalidParameters("; ".join(found))
        return self


def dual_length_n0(params: CharsumParams, N: float) -> float:
    """GL(3) cutoff N0 = N^(1/2) p^(3l/2 - 3 l1) k beyond which G(y) is negligible."""
    return math.sqrt(N) * params.p ** (1.5 * params.ell - 3 * params.ell1) * params.k


def dual_length_m0(params: CharsumParams, N: float, Q: float) -> float:
    """GL(2) cutoff M0 = p^(2(l-l1)) q^2 Q^2 / N for |x| of size one."""
    return params.p ** (2 * (params.ell - params.ell1)) * params.q**2 * Q**2 / N
