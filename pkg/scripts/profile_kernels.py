from __future__ import annotations

import cProfile
import pstats
from pathlib import Path

from depth_subconvexity.charsum import CharsumParams, charsum_bruteforce, charsum_reduced
from depth_subconvexity.numtheory.expsums import KloostermanSpec, kloosterman


def _workload() -> None:
    for q in (1, 2, 4, 5):
        params = CharsumParams(p=3, r=4, ell=2, q=q, n2=2, m=1)
        charsum_bruteforce(params)
        charsum_reduced(params)
    for q in (10_007, 65_536, 100_000):
        kloosterman(KloostermanSpec(1, 3, q))


def main() -> None:
    prof = cProfile.Profile()
    prof.enable()
    _workload()
    prof.disable()
    dump = Path("artifacts/profile_kernels.prof")
    dump.parent.mkdir(parents=True, exist_ok=True)
    prof.dump_stats(str(dump))
    print(f"Wrote {dump}")
    stats = pstats.Stats(prof).strip_dirs().sort_stats("tottime")
    stats.print_stats(15)


if __name__ == "__main__":
    main()
