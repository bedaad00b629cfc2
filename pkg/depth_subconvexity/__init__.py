__all__ = ["__version__"]
__version__ = "0.1.0"

"""
Depth-aspect subconvexity verification toolkit.

Provides executable checks for:
- Residue arithmetic, characters and exponential sums mod p^r
- The character sum, its closed form and the post-Poisson pairing
- The delta expansion, oscillatory integrals and test functions
- GL(2), divisor and d3 Voronoi summation
- A grid harness with reports, benchmarks and a Typer CLI
"""

__all__ = [
    "numtheory",
    "charsum",
    "analytic",
    "voronoi",
    "harness",
]
