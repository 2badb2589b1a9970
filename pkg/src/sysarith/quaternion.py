"""Quaternion algebras given by ramification sets, over Q and over Q(i).

An admissible set has even cardinality >= 2 (no archimedean ramification is
allowed, so the finite set alone must have even size).  A quadratic field
embeds into the algebra iff no ramified prime splits in it; that single
predicate drives every search and certificate in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InadmissibleAlgebraError, InputError
from .gaussian import (
    GaussianInt,
    GaussianPrimeIdeal,
    GaussianQuadExt,
    _ideal_key,
    quad_residue_symbol,
    splitting_in_ext,
)
from .real_quadratic import SPLIT, QuadFieldQ, is_prime, kronecker_symbol


@dataclass(frozen=True)
class QuaternionAlgebraQ:
    ram: frozenset[int]

    @property
    def ram_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.ram))

    def to_json(self) -> dict:
        return {"base": "Q", "ram": list(self.ram_sorted)}


@dataclass(frozen=True)
class QuaternionAlgebraQi:
    ram: frozenset[GaussianPrimeIdeal]

    @property
    def ram_sorted(self) -> tuple[GaussianPrimeIdeal, ...]:
        return tuple(sorted(self.ram, key=_ideal_key))

    @property
    def ram_norms(self) -> tuple[int, ...]:
        return tuple(sorted(P.norm for P in self.ram))

    def to_json(self) -> dict:
        return {"base": "Qi", "ram": [P.to_json() for P in self.ram_sorted]}


def algebra_q(primes: Iterable[int]) -> QuaternionAlgebraQ:
    ram = frozenset(primes)
    for p in ram:
        if not is_prime(p):
            raise InputError(f"ramification set contains non-prime {p}")
    return QuaternionAlgebraQ(ram)


def algebra_qi(ideals: Iterable[GaussianPrimeIdeal]) -> QuaternionAlgebraQi:
    ram = frozenset(ideals)
    for P in ram:
        if not isinstance(P, GaussianPrimeIdeal):
            raise InputError(f"expected GaussianPrimeIdeal, got {P!r}")
    return QuaternionAlgebraQi(ram)


def is_admissible(B) -> bool:
    if not isinstance(B, (QuaternionAlgebraQ, QuaternionAlgebraQi)):
        raise InputError(
            "expected a quaternion algebra (build one with algebra_q or "
            f"algebra_qi), got {type(B).__name__}"
        )
    n = len(B.ram)
    return n >= 2 and n % 2 == 0


def require_admissible(B) -> None:
    if not is_admissible(B):
        raise InadmissibleAlgebraError(
            f"ramification set must have even cardinality >= 2, got {len(B.ram)}"
        )


def embeds_q(field, B: QuaternionAlgebraQ) -> bool:
    """Q(sqrt(d)) embeds iff no ramified prime splits in it.  Empty ram: True."""
    d = field.d if isinstance(field, QuadFieldQ) else field
    return all(kronecker_symbol(d, p) != 1 for p in B.ram)


def embeds_qi(ext: GaussianQuadExt, B: QuaternionAlgebraQi) -> bool:
    return all(splitting_in_ext(P, ext) != SPLIT for P in B.ram)


def torsion_free_q(B: QuaternionAlgebraQ) -> bool:
    """Kills 2- and 3-torsion: some p = 1 mod 4 and some p = 1 mod 3 ramify."""
    return any(p % 4 == 1 for p in B.ram) and any(p % 3 == 1 for p in B.ram)


_TWO = GaussianInt(2, 0)
_THREE = GaussianInt(3, 0)


def torsion_free_qi(B: QuaternionAlgebraQi) -> bool:
    """Some odd ramified prime sees 2 as a square, and some sees 3.

    Q(i)(zeta_8) = Q(i)(sqrt(2)) and Q(i)(zeta_12) = Q(i)(sqrt(3)), so these
    residue conditions obstruct the torsion-generating extensions.
    """
    odd = [P for P in B.ram if P.norm % 2 == 1]
    return any(quad_residue_symbol(_TWO, P) == 1 for P in odd) and any(
        quad_residue_symbol(_THREE, P) == 1 for P in odd
    )


def excluded_fields_subset(A, B, pool) -> bool:
    """True if every pool field that fails to embed in A also fails in B.

    Requires ram(A) to be a subset of ram(B); then embedding obstructions
    can only grow, and this check certifies it on the given pool.
    """
    if not set(A.ram) <= set(B.ram):
        raise InputError("ram(A) must be contained in ram(B)")
    if isinstance(A, QuaternionAlgebraQi):
        return all(embeds_qi(L, A) or not embeds_qi(L, B) for L in pool)
    return all(embeds_q(L, A) or not embeds_q(L, B) for L in pool)
