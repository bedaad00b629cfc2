"""The character sum: brute force, stratum-free, and the Gauss-sum reduced closed form.

Every evaluator is vectorised over the inner beta sum and caches the structure that does
not depend on the character, so a sweep over all primitive characters of one modulus
reuses a single phase matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from ..config import settings
from ..errors import EmptyStratum, InvalidParameters, TooLarge, Unsupported
from ..logging import get_logger
from ..numtheory.characters import e_array
from ..numtheory.expsums import batch_inverse, inverse_table, kloosterman_table, ramanujan_sum_exact
from ..numtheory.residue import inv, units
from .params import CharsumParams

log = get_logger(__name__)


def _capped_valuation(n: np.ndarray, p: int, cap: int) -> np.ndarray:
    """min(v_p(n), cap) elementwise, with v_p(0) taken as cap."""
    out = np.zeros(n.shape, dtype=np.int64)
    for j in range(1, cap + 1):
        out += (n % p**j == 0).astype(np.int64)
    return out


def _pairs(p: int, ell: int, q: int) -> np.ndarray:
    """n = a + b q for a a unit mod q and b mod p^l."""
    a = units(q) if q > 1 else np.zeros(1, dtype=np.int64)
    b = np.arange(p**ell, dtype=np.int64)
    return (a[:, None] + b[None, :] * q).ravel()


def _beta_phase(n: np.ndarray, p: int, r: int, ell: int, ell2: int, q: int, m: int) -> np.ndarray:
    """e(m inv(c / p^l2) / (p^(r-l2) q)) with c = p^(r-l) n + q beta; rows n, columns beta."""
    beta = units(p**r)
    modulus = p ** (r - ell2) * q
    c = p ** (r - ell) * n[:, None] + q * beta[None, :]
    c_red = (c // p**ell2) % modulus
    cbar = batch_inverse(c_red.ravel(), modulus).reshape(c_red.shape)
    return e_array(cbar * (m % modulus), modulus)


@lru_cache(maxsize=256)
def _stratum_structure(
    p: int, r: int, ell: int, ell1: int, q: int, k: int, n1: int, m: int, ell2: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Character-free data of one stratum: Kloosterman index per pair, phase matrix, beta."""
    n = _pairs(p, ell, q)
    n = n[_capped_valuation(n, p, ell) == ell1]
    qv = q * p ** (ell - ell1)
    K = qv * k // n1
    x = n // p**ell1
    xbar = batch_inverse(x % qv, qv)
    kidx = (k * xbar) % K
    phase = _beta_phase(n, p, r, ell, ell2, q, m)
    beta = units(p**r)
    for arr in (kidx, phase, beta):
        arr.setflags(write=False)
    return kidx, phase, beta


def _stratum(params: CharsumParams) -> tuple[np.ndarray, np.ndarray]:
    """Return (Kloosterman index k xbar mod K, inner beta sum G) for every admissible pair."""
    params.validate()
    if params.term_count > settings.max_terms:
        raise TooLarge(
            f"brute force needs {params.term_count:.3g} terms, "
            f"above max_terms={settings.max_terms:.3g}"
        )
    kidx, phase, beta = _stratum_structure(
        params.p, params.r, params.ell, params.ell1, params.q, params.k, params.n1, params.m,
        params.ell2,
    )
    if kidx.size == 0:
        raise EmptyStratum(f"no pairs with gcd(a + bq, p^l) = p^{params.ell1}")
    weights = np.conj(params.chi.values[(-beta) % params.pp.modulus])
    return kidx, phase @ weights


def charsum_bruteforce(params: CharsumParams) -> complex:
    """Direct evaluation of the triple sum over (a, b, beta) weighted by S(k xbar, +-n2; K)."""
    kidx, inner = _stratum(params)
    table = kloosterman_table(params.sign * params.n2, params.kloosterman_modulus)
    return complex(np.dot(table[kidx], inner))


def alpha_factors_bruteforce(params: CharsumParams) -> tuple[np.ndarray, np.ndarray]:
    """Phi(alpha) = sum over pairs of e(alpha k xbar / K) G(a, b), for alpha a unit mod K."""
    kidx, inner = _stratum(params)
    K = params.kloosterman_modulus
    alphas = units(K)
    phase = e_array(alphas[:, None] * kidx[None, :], K)
    return alphas, phase @ inner


def charsum_unrestricted(params: CharsumParams) -> complex:
    """The sum without the gcd constraint, each pair using its own stratum l1."""
    params.validate()
    p, r, ell, q = params.p, params.r, params.ell, params.q
    if q % p == 0:
        raise Unsupported("the stratum-free sum is defined for (q, p) = 1 only")
    n = _pairs(p, ell, q)
    strata = _capped_valuation(n, p, ell)
    beta = units(p**r)
    weights = np.conj(params.chi.values[(-beta) % params.pp.modulus])
    inner = _beta_phase(n, p, r, ell, 0, q, params.m) @ weights
    total = 0j
    for j in np.unique(strata):
        j = int(j)
        qv = q * p ** (ell - j)
        if (qv * params.k) % params.n1:
            raise InvalidParameters(f"n1={params.n1} does not divide the stratum {j} modulus")
        K = qv * params.k // params.n1
        sel = strata == j
        xbar = batch_inverse((n[sel] // p**j) % qv, qv)
        table = kloosterman_table(params.sign * params.n2, K)
        total += complex(np.dot(table[(params.k * xbar) % K], inner[sel]))
    return total


def h2_roots(params: CharsumParams, u: int) -> list[int]:
    """Units v mod p^(r/2) with A q' v^2 + m v - m s u = 0 mod p^(r/2)."""
    params.validate()
    params.require_even(depth=False)
    half = params.p ** (params.r // 2)
    v = units(half)
    A, qp, m, s = params.a_constant, params.q_prime % half, params.m % half, params.s % half
    h2 = (A * qp % half * v % half * v + m * v - m * s % half * (u % half)) % half
    return [int(x) for x in v[h2 == 0]]


@dataclass(frozen=True)
class CbetaPair:
    u: int
    brute: complex
    reduced: complex

    @property
    def abs_error(self) -> float:
        return abs(self.brute - self.reduced)


def cbeta_pair(params: CharsumParams, u: int) -> CbetaPair:
    """Inner beta sum at x = u, directly and through the square-root stationary-phase form."""
    params.validate()
    params.require_even(depth=False)
    p, r = params.p, params.r
    if u % p == 0:
        raise InvalidParameters(f"u = {u} must be a unit mod {p}")
    if params.ell_prime >= params.r - params.ell:
        raise Unsupported("C_beta reduction needs l' < r - l")
    pr, qp, chi = params.pp.modulus, params.q_prime, params.chi
    qbar = inv(qp, pr)
    m, s = params.m, params.s
    beta = units(pr)
    c = (s * (u % pr) + qp % pr * beta) % pr
    brute = complex(
        np.dot(
            np.conj(chi.values[(-beta) % pr]),
            e_array(batch_inverse(c, pr) * (m * qbar % pr), pr),
        )
    )
    roots = np.array(h2_roots(params, u), dtype=np.int64)
    if roots.size == 0:
        reduced = 0j
    else:
        vbar = batch_inverse(roots, pr)
        terms = np.conj(chi.values[(roots - s * u) % pr]) * e_array(vbar * (m * qbar % pr), pr)
        reduced = p ** (r // 2) * chi.eval(-qp) * complex(np.sum(terms))
    return CbetaPair(u, brute, reduced)


def _admissible_uv(params: CharsumParams) -> tuple[np.ndarray, np.ndarray]:
    """(u1, v1) with u1 a unit mod p^lam and v1 a unit mod p^(r/2) solving h2."""
    lam = params.lam
    u1 = units(params.p**lam) if lam else np.zeros(1, dtype=np.int64)
    rows_u, rows_v = [], []
    for u in u1:
        for v in h2_roots(params, int(u)):
            rows_u.append(int(u))
            rows_v.append(v)
    return np.array(rows_u, dtype=np.int64), np.array(rows_v, dtype=np.int64)


def alpha_factors_reduced(params: CharsumParams) -> tuple[np.ndarray, np.ndarray]:
    """F(alpha) with C = sum over alpha of e(+-n2 abar / K) F(alpha), from the closed form."""
    params.validate()
    params.require_even()
    p, r = params.p, params.r
    K = params.kloosterman_modulus
    alphas = units(K)
    gap = r - params.ell
    if params.ell_prime == gap:
        raise Unsupported(f"l' = r - l = {gap} has no closed form")
    if params.ell_prime > gap:
        # the stated zero fails under brute force; see vanishing_row
        raise Unsupported(f"l' = {params.ell_prime} > r - l = {gap} has no closed form")
    lam = params.lam
    if params.ell4 > 0 and lam >= 1:
        return alphas, np.zeros(alphas.shape, dtype=complex)

    L, s, qp, n1, m = params.depth, params.s, params.q_prime, params.n1, params.m
    pr, pL, plam = p**r, p**L, p**lam
    chi = params.chi
    u1, v1 = _admissible_uv(params)
    if u1.size == 0:
        return alphas, np.zeros(alphas.shape, dtype=complex)

    ubar_L = batch_inverse(u1, pL) if L else np.zeros_like(u1)
    vbar = batch_inverse(v1, pr)
    chi_part = np.conj(chi.values[(v1 - s * u1) % pr])
    tail = e_array(vbar * (m * inv(qp, pr) % pr), pr)
    if L:
        coeff = ubar_L * inv(qp, pL) % pL * (n1 % pL) % pL
        phase = e_array((alphas[:, None] % pL) * coeff[None, :], pL)
    else:
        phase = np.ones((alphas.size, u1.size), dtype=complex)
    if lam:
        B = params.b_constant
        diff_inv = inverse_table(plam)[(v1 - s * u1) % plam]
        ubar_lam = ubar_L % plam
        lhs = (qp % plam) * B % plam * diff_inv % plam
        rhs = (ubar_lam * ubar_lam % plam * (n1 % plam))[None, :] * (alphas[:, None] % plam) % plam
        phase = np.where((lhs[None, :] - rhs) % plam == 0, phase, 0)
    inner = phase @ (chi_part * tail)

    if qp > 1:
        h1 = (alphas * (n1 * inv(p ** (2 * L), qp) % qp) + m * inv(p ** (2 * r), qp)) % qp
        ram = np.array([ramanujan_sum_exact(int(h), qp) for h in h1], dtype=float)
    else:
        ram = np.ones(alphas.shape, dtype=float)
    prefactor = p ** ((r + L) // 2) * chi.eval(-qp)
    return alphas, prefactor * ram * inner


def charsum_reduced(params: CharsumParams) -> complex:
    """Closed-form value of the character sum after both Gauss-sum evaluations."""
    alphas, factors = alpha_factors_reduced(params)
    K = params.kloosterman_modulus
    abar = inverse_table(K)[alphas] if K > 1 else np.zeros_like(alphas)
    return complex(np.dot(e_array(params.sign * params.n2 * abar, K), factors))


DEEP_MODULUS = "deep-modulus"
P_DIVIDES_N1 = "p-divides-n1"
VANISHING_TOLERANCE = 1e-9


def vanishing_branch(params: CharsumParams) -> Optional[str]:
    """Which branch of the closed form states C = 0, if any.

    ``deep-modulus`` is l' > r - l; ``p-divides-n1`` is p | n1 with lam >= 1.
    """
    gap = params.r - params.ell
    if params.ell_prime == gap:
        return None
    if params.ell_prime > gap:
        return DEEP_MODULUS
    if params.ell4 > 0 and params.lam >= 1:
        return P_DIVIDES_N1
    return None


@dataclass(frozen=True)
class VanishingRow:
    """Brute-force value of a sum the closed form states is zero.

    ``expanded`` recomputes the sum through its alpha factors, so a nonzero value is seen
    by two evaluation paths before it is recorded as a discrepancy.
    """

    branch: str
    total: complex
    expanded: complex
    largest_factor: float
    scale: float

    @property
    def vanishes(self) -> bool:
        return abs(self.total) <= VANISHING_TOLERANCE * self.scale

    @property
    def consistent(self) -> bool:
        return abs(self.total - self.expanded) <= VANISHING_TOLERANCE * self.scale

    @property
    def discrepancy(self) -> bool:
        return self.branch == DEEP_MODULUS and self.consistent and not self.vanishes


def vanishing_row(params: CharsumParams) -> VanishingRow:
    """Evaluate a stated-zero tuple by brute force and through the Kloosterman expansion."""
    branch = vanishing_branch(params)
    if branch is None:
        raise InvalidParameters(f"{params} is not on a branch where the sum is stated to vanish")
    total = charsum_bruteforce(params)
    alphas, factors = alpha_factors_bruteforce(params)
    K = params.kloosterman_modulus
    abar = inverse_table(K)[alphas] if K > 1 else np.zeros_like(alphas)
    expanded = complex(np.dot(e_array(params.sign * params.n2 * abar, K), factors))
    scale = params.p ** ((params.r + params.ell - params.ell1) / 2) * params.q
    largest = float(np.max(np.abs(factors))) if factors.size else 0.0
    row = VanishingRow(branch, total, expanded, largest, scale)
    if row.discrepancy:
        log.info("stated zero fails on %s: |C| = %.6g", branch, abs(total))
    return row


def relative_error(brute: complex, reduced: complex) -> float:
    scale = max(1.0, abs(brute))
    return abs(brute - reduced) / scale

