"""Complete exponential sums: Kloosterman and Ramanujan sums, batched inverses, Moebius."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from sympy import divisors, isprime, totient

from ..config import settings
from ..errors import InvalidParameters, TooLarge, VerificationFailed
from .characters import e_array
from .residue import units

KLOOSTERMAN_LIMIT = 10**7
_CHUNK = 1 << 22


class MobiusSieve:
    """Lazily grown Moebius table; growth is serialised, reads are lock-free."""

    def __init__(self, limit: int) -> None:
        self.limit = limit
        self._mu = np.ones(1, dtype=np.int8)
        self._lock = threading.Lock()

    def _build(self, n: int) -> np.ndarray:
        mu = np.ones(n + 1, dtype=np.int8)
        composite = np.zeros(n + 1, dtype=bool)
        mu[0] = 0
        for p in range(2, n + 1):
            if composite[p]:
                continue
            composite[p * p :: p] = True
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
        mu.setflags(write=False)
        return mu

    def mu_table(self, n: int) -> np.ndarray:
        if n > self.limit:
            raise TooLarge(f"sieve request {n} exceeds limit {self.limit}")
        mu = self._mu
        if len(mu) > n:
            return mu
        with self._lock:
            if len(self._mu) <= n:
                size = min(self.limit, max(n, 2 * (len(self._mu) - 1), 1024))
                self._mu = self._build(size)
            return self._mu

    def mobius(self, n: int) -> int:
        return int(self.mu_table(n)[n])


SIEVE = MobiusSieve(settings.sieve_limit)


def mobius(n: int) -> int:
    return SIEVE.mobius(n)


@dataclass(frozen=True)
class KloostermanSpec:
    a: int
    b: int
    q: int


def _pow_vec(base: np.ndarray, exponent: int, q: int) -> np.ndarray:
    result = np.ones_like(base)
    b = base % q
    while exponent:
        if exponent & 1:
            result = result * b % q
        b = b * b % q
        exponent >>= 1
    return result


def batch_inverse(xs: np.ndarray, q: int) -> np.ndarray:
    """Inverses of units mod q by vectorised Euler exponentiation x^(phi(q)-1)."""
    if q > 3_000_000_000:
        raise TooLarge(f"int64 batched inverses need q < 3e9, got {q}")
    xs = np.asarray(xs, dtype=np.int64) % q
    if q == 1:
        return np.zeros_like(xs)
    if np.any(np.gcd(xs, q) != 1):
        raise InvalidParameters(f"batch_inverse input contains non-units mod {q}")
    return _pow_vec(xs, int(totient(q)) - 1, q)


def naive_inverses(xs: np.ndarray, q: int) -> np.ndarray:
    return np.array([pow(int(x), -1, q) for x in xs], dtype=np.int64)


@lru_cache(maxsize=32)
def inverse_table(q: int) -> np.ndarray:
    """inv[x] for x mod q, 0 at non-units."""
    table = np.zeros(q, dtype=np.int64)
    u = units(q)
    table[u] = batch_inverse(u, q)
    table.setflags(write=False)
    return table


def kloosterman(spec: KloostermanSpec) -> complex:
    q = spec.q
    if q > KLOOSTERMAN_LIMIT:
        raise TooLarge(f"Kloosterman modulus {q} exceeds {KLOOSTERMAN_LIMIT}")
    x = units(q)
    xbar = inverse_table(q)[x]
    total = 0j
    for lo in range(0, len(x), _CHUNK):
        xs, xb = x[lo : lo + _CHUNK], xbar[lo : lo + _CHUNK]
        total += complex(np.sum(e_array((spec.a % q) * xs + (spec.b % q) * xb, q)))
    if (spec.a - spec.b) % q == 0 and abs(total.imag) > 1e-9 * max(1, len(x)):
        raise VerificationFailed(f"S({spec.a},{spec.b};{q}) is not real: {total}")
    return total


def kloosterman_table(b: int, q: int) -> np.ndarray:
    """S(a, b; q) for every a mod q."""
    if q > 4096:
        raise TooLarge(f"Kloosterman table needs q <= 4096, got {q}")
    x = units(q)
    xbar = inverse_table(q)[x]
    a = np.arange(q, dtype=np.int64)[:, None]
    return e_array(a * x[None, :] + (b % q) * xbar[None, :], q).sum(axis=1)


@lru_cache(maxsize=1 << 16)
def ramanujan_sum_exact(h: int, q: int) -> int:
    """Sum over d | (q, h) of d mu(q/d)."""
    g = math.gcd(h, q)
    return sum(d * mobius(q // d) for d in divisors(g))


def ramanujan_sum(h: int, q: int) -> int:
    if q > KLOOSTERMAN_LIMIT:
        raise TooLarge(f"Ramanujan modulus {q} exceeds {KLOOSTERMAN_LIMIT}")
    exact = ramanujan_sum_exact(h, q)
    direct = complex(np.sum(e_array((h % q) * units(q), q)))
    if abs(direct - exact) > 1e-6:
        raise VerificationFailed(f"c_{q}({h}): divisor side {exact} vs direct {direct}")
    return exact


def weil_ratio(p: int, samples: Optional[int] = None, seed: int = 0) -> float:
    """max |S(a,b;p)| / (2 sqrt p) over p not dividing ab; exhaustive when samples is None."""
    if p > 10**4:
        raise TooLarge(f"weil_ratio needs p <= 1e4, got {p}")
    if not isprime(p):
        raise InvalidParameters(f"{p} is not prime")
    # S(a, b; p) = S(1, ab; p) for p not dividing a
    if samples is None:
        cs = np.arange(1, p, dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        a = rng.integers(1, p, size=samples)
        b = rng.integers(1, p, size=samples)
        cs = np.unique(a * b % p)
    x = units(p)
    xbar = inverse_table(p)[x]
    worst = 0.0
    rows = max(1, _CHUNK // max(1, len(x)))
    for lo in range(0, len(cs), rows):
        c = cs[lo : lo + rows][:, None]
        sums = e_array(x[None, :] + c * xbar[None, :], p).sum(axis=1)
        worst = max(worst, float(np.max(np.abs(sums))))
    return worst / (2.0 * math.sqrt(p))
