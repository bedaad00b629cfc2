"""The post-Poisson pairing of two character sums, computed two independent ways."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TooLarge
from ..logging import get_logger
from ..numtheory.characters import e_array
from ..numtheory.expsums import inverse_table
from .params import PoissonPair
from .sums import alpha_factors_bruteforce, alpha_factors_reduced

log = get_logger(__name__)

POISSON_MODULUS_LIMIT = 10**5


@dataclass(frozen=True)
class PostPoissonValue:
    n2: int
    modulus: int
    via_frequencies: complex
    via_congruence: complex
    size: float = 0.0

    @property
    def relative_gap(self) -> float:
        """Gap against the larger value, floored at the size of the sum without cancellation."""
        scale = max(abs(self.via_frequencies), abs(self.via_congruence), self.size)
        gap = abs(self.via_frequencies - self.via_congruence)
        return gap / scale if scale > 0 else gap


def _abar(alphas: np.ndarray, K: int) -> np.ndarray:
    return inverse_table(K)[alphas] if K > 1 else np.zeros_like(alphas)


def post_poisson_sum(pair: PoissonPair, n2: int) -> PostPoissonValue:
    """(1/Q) sum over nu mod Q of C1(nu) conj(C2(nu)) e(nu n2 / Q).

    The first way builds C(nu) from brute-force alpha factors; the second keeps only the
    alpha pairs on the congruence +-abar q2'' -+ abar' q2' + n2 = 0 mod Q and uses the
    closed-form factors.
    """
    pair.validate()
    Q = pair.modulus
    if Q > POISSON_MODULUS_LIMIT:
        raise TooLarge(f"Poisson modulus {Q} exceeds {POISSON_MODULUS_LIMIT}")
    first, second = pair.first, pair.second
    sign = first.sign
    K1, K2 = first.kloosterman_modulus, second.kloosterman_modulus

    alphas1, phi1 = alpha_factors_bruteforce(first)
    alphas2, phi2 = alpha_factors_bruteforce(second)
    nu = np.arange(Q, dtype=np.int64)
    c1 = e_array(sign * nu[:, None] * _abar(alphas1, K1)[None, :], K1) @ phi1
    c2 = e_array(sign * nu[:, None] * _abar(alphas2, K2)[None, :], K2) @ phi2
    way_one = complex(np.sum(c1 * np.conj(c2) * e_array(nu * (n2 % Q), Q)) / Q)

    _, f1 = alpha_factors_reduced(first)
    _, f2 = alpha_factors_reduced(second)
    r1 = sign * _abar(alphas1, K1) * pair.q2_second % Q
    r2 = sign * _abar(alphas2, K2) * pair.q2 % Q
    on_congruence = ((r1[:, None] - r2[None, :] + n2) % Q == 0).astype(float)
    way_two = complex(f1 @ on_congruence @ np.conj(f2))

    log.debug("post-Poisson Q=%d n2=%d: %s vs %s", Q, n2, way_one, way_two)
    size = float(np.sum(np.abs(phi1)) * np.sum(np.abs(phi2)))
    return PostPoissonValue(n2, Q, way_one, way_two, size)
