"""Exact arithmetic mod p^r: residues, Dirichlet characters and exponential sums."""
from .characters import DirichletCharacter, e, primitive_characters
from .expsums import kloosterman, ramanujan_sum
from .residue import IntPolynomial, PrimePower, ResidueElement

__all__ = [
    "DirichletCharacter",
    "IntPolynomial",
    "PrimePower",
    "ResidueElement",
    "e",
    "kloosterman",
    "primitive_characters",
    "ramanujan_sum",
]
