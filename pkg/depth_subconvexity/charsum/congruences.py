"""The congruence polynomials that cut out the reduced sums, instantiated over the integers."""
from __future__ import annotations

from dataclasses import dataclass

from ..numtheory.residue import IntPolynomial, inv
from .params import CharsumParams


@dataclass(frozen=True)
class Congruence:
    """f(x) = 0 mod modulus, in one free variable."""

    poly: IntPolynomial
    modulus: int

    def holds(self, x: int) -> bool:
        return self.poly.eval_mod(x, self.modulus) == 0


@dataclass(frozen=True)
class CongruenceSystem:
    params: CharsumParams

    @property
    def A(self) -> int:
        return self.params.a_constant

    @property
    def B(self) -> int:
        return self.params.b_constant

    @property
    def _plam(self) -> int:
        return self.params.p**self.params.lam

    def h1(self) -> Congruence:
        """In alpha, mod q': alpha n1 inv(p^(2L)) + m inv(p^(2r))."""
        P = self.params
        qp = P.q_prime
        if qp == 1:
            return Congruence(IntPolynomial(()), 1)
        return Congruence(
            IntPolynomial.of(P.m * inv(P.p ** (2 * P.r), qp), P.n1 * inv(P.p ** (2 * P.depth), qp)),
            qp,
        )

    def h2(self, u: int, *, m: int | None = None, q: int | None = None) -> Congruence:
        """In v, mod p^(r/2): A q v^2 + m v - m s u."""
        P = self.params
        m = P.m if m is None else m
        q = P.q_prime if q is None else q
        return Congruence(IntPolynomial.of(-m * P.s * u, m, self.A * q), P.p ** (P.r // 2))

    def h3(self, u: int, v: int, *, q: int | None = None) -> Congruence:
        """In alpha, mod p^lam: q B inv(v - s u) - ubar^2 n1 alpha."""
        P = self.params
        q = P.q_prime if q is None else q
        plam = self._plam
        ubar = inv(u, plam)
        return Congruence(
            IntPolynomial.of(q * self.B * inv(v - P.s * u, plam), -ubar * ubar * P.n1), plam
        )

    def h4(self, u: int, u_second: int, q2: int) -> Congruence:
        """In w = inv(gamma2), mod p^lam: ubar inv(q2') - ubar' q2' w^2."""
        plam = self._plam
        return Congruence(
            IntPolynomial.of(inv(u, plam) * inv(q2, plam), 0, -inv(u_second, plam) * q2), plam
        )

    # direct evaluations used to cross-check the instantiated polynomials
    def h1_value(self, alpha: int) -> int:
        P = self.params
        qp = P.q_prime
        return (alpha * P.n1 * inv(P.p ** (2 * P.depth), qp) + P.m * inv(P.p ** (2 * P.r), qp)) % qp

    def h2_value(self, v: int, u: int) -> int:
        P = self.params
        half = P.p ** (P.r // 2)
        return (self.A * P.q_prime * v * v + P.m * v - P.m * P.s * u) % half

    def h3_value(self, alpha: int, u: int, v: int) -> int:
        P = self.params
        plam = self._plam
        ubar = inv(u, plam)
        return (P.q_prime * self.B * inv(v - P.s * u, plam) - ubar**2 * P.n1 * alpha) % plam

    def h4_value(self, u: int, u_second: int, gamma2: int, q2: int) -> int:
        plam = self._plam
        gbar = inv(gamma2, plam)
        return (inv(u, plam) * inv(q2, plam) - inv(u_second, plam) * q2 * gbar * gbar) % plam


def sextic(b_ratio: int, q2: int, q2_second: int, p: int) -> IntPolynomial:
    """B3 inv(B2) u^6 - B3 inv(B2) q2' q2'' u^5 + inv(q2'' q2') u - 1, coefficients mod p."""
    qq = q2 * q2_second
    return IntPolynomial.of(-1, inv(qq, p), 0, 0, 0, -b_ratio * qq, b_ratio).reduce_mod(p)


def sextic_factors(b_ratio: int, q2: int, q2_second: int, p: int) -> IntPolynomial:
    """(q2'' q2' B3 inv(B2) u^5 + 1)(inv(q2'' q2') u - 1) mod p."""
    qq = q2 * q2_second
    left = IntPolynomial.of(1, 0, 0, 0, 0, qq * b_ratio)
    right = IntPolynomial.of(-1, inv(qq, p))
    return (left * right).reduce_mod(p)
