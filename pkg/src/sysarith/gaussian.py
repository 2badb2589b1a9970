"""Arithmetic over Z[i]: canonical prime ideals, quadratic residue symbols,
and quadratic extensions Q(i)(sqrt(delta)) with exact relative discriminants.

Canonical generators: (1+i) above 2; (q, 0) for inert q = 3 mod 4; for split
p = 1 mod 4 the two conjugates a+bi with a > b > 0 and b+ai.  Units of Z[i]
modulo squares are {1, i} since -1 = i^2, so a square class is a unit flag
plus a set of distinct canonical prime generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateExtensionError, InputError
from .real_quadratic import INERT, RAMIFIED, SPLIT, is_prime

from . import _accel


@dataclass(frozen=True)
class GaussianInt:
    """a + b*i with exact integer components."""

    a: int
    b: int

    @property
    def norm(self) -> int:
        return self.a * self.a + self.b * self.b

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.a, -self.b)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(
            self.a * other.a - self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}i"
        return f"{self.a}{self.b:+}i"

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b}


ONE = GaussianInt(1, 0)
IUNIT = GaussianInt(0, 1)
_UNITS = (ONE, IUNIT, GaussianInt(-1, 0), GaussianInt(0, -1))


def _divmod_gauss(z: GaussianInt, w: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    n = w.norm
    t = z * w.conj()
    qa = (2 * t.a + n) // (2 * n)
    qb = (2 * t.b + n) // (2 * n)
    q = GaussianInt(qa, qb)
    r = GaussianInt(z.a - (q * w).a, z.b - (q * w).b)
    return q, r


def _exact_div(z: GaussianInt, w: GaussianInt) -> GaussianInt | None:
    q, r = _divmod_gauss(z, w)
    if r.a == 0 and r.b == 0:
        return q
    return None


def canonical_associate(z: GaussianInt) -> GaussianInt:
    """The associate i^k * z with a > 0, b >= 0 (first quadrant, real axis in)."""
    if z.a == 0 and z.b == 0:
        return z
    for u in _UNITS:
        w = z * u
        if w.a > 0 and w.b >= 0:
            return w
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class GaussianPrimeIdeal:
    """A prime of Z[i] with its canonical generator and residue behaviour."""

    gen: GaussianInt
    norm: int
    kind: str

    def to_json(self) -> dict:
        return {"a": self.gen.a, "b": self.gen.b, "norm": self.norm, "kind": self.kind}


def _ideal_key(P: GaussianPrimeIdeal) -> tuple:
    return (P.norm, P.gen.b, P.gen.a)


def splitting_in_qi(p: int) -> str:
    """Behaviour of a rational prime in Z[i]: 2 ramifies, 1 mod 4 splits."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if p == 2:
        return RAMIFIED
    return SPLIT if p % 4 == 1 else INERT


def _sum_two_squares(p: int) -> tuple[int, int]:
    """(a, b) with a^2 + b^2 = p and a > b > 0, for prime p = 1 mod 4."""
    n = 2
    while pow(n, (p - 1) // 2, p) != p - 1:
        n += 1
    x = pow(n, (p - 1) // 4, p)
    a, b = p, x
    while b * b > p:
        a, b = b, a % b
    a = a % b
    lo, hi = sorted((abs(a), abs(b)))
    assert lo * lo + hi * hi == p and lo > 0
    return hi, lo


def ideal_above(p: int, conjugate: bool = False) -> GaussianPrimeIdeal:
    """The canonical prime above p; conjugate=True picks b+ai for split p."""
    kind = splitting_in_qi(p)
    if kind == RAMIFIED:
        return GaussianPrimeIdeal(GaussianInt(1, 1), 2, RAMIFIED)
    if kind == INERT:
        return GaussianPrimeIdeal(GaussianInt(p, 0), p * p, INERT)
    a, b = _sum_two_squares(p)
    if conjugate:
        return GaussianPrimeIdeal(GaussianInt(b, a), p, SPLIT)
    return GaussianPrimeIdeal(GaussianInt(a, b), p, SPLIT)


def gaussian_primes_up_to_norm(bound: int) -> list[GaussianPrimeIdeal]:
    """All primes of Z[i] with norm <= bound, sorted by (norm, b, a).

    Split conjugates come out adjacent, a > b generator first.
    """
    bound = int(math.floor(bound))
    out = []
    if bound >= 2:
        out.append(ideal_above(2))
    for p in (int(v) for v in _accel.primes_up_to(int(bound))):
        if p % 4 == 1:
            out.append(ideal_above(p))
            out.append(ideal_above(p, conjugate=True))
    q = 3
    while q * q <= bound:
        if is_prime(q) and q % 4 == 3:
            out.append(ideal_above(q))
        q += 2
    out.sort(key=_ideal_key)
    return out


def _gauss_pow_mod(a: int, b: int, e: int, q: int) -> tuple[int, int]:
    ra, rb = 1 % q, 0
    a %= q
    b %= q
    while e:
        if e & 1:
            ra, rb = (ra * a - rb * b) % q, (ra * b + rb * a) % q
        a, b = (a * a - b * b) % q, (2 * a * b) % q
        e >>= 1
    return ra, rb


def quad_residue_symbol(delta: GaussianInt, P: GaussianPrimeIdeal) -> int:
    """delta^((N-1)/2) in the residue field of an odd prime P: +1, -1, or 0."""
    if isinstance(delta, int):
        delta = GaussianInt(delta, 0)
    if P.norm % 2 == 0:
        raise InputError("residue symbol undefined at the even prime (1+i)")
    if P.kind == SPLIT:
        p = P.norm
        u, v = P.gen.a, P.gen.b
        # i maps to -u/v in Z[i]/(u+vi) = F_p
        img = (delta.a - delta.b * u * pow(v, -1, p)) % p
        if img == 0:
            return 0
        s = pow(img, (p - 1) // 2, p)
        return 1 if s == 1 else -1
    q = P.gen.a
    if delta.a % q == 0 and delta.b % q == 0:
        return 0
    ra, rb = _gauss_pow_mod(delta.a, delta.b, (q * q - 1) // 2, q)
    assert rb == 0 and ra in (1, q - 1)
    return 1 if ra == 1 else -1


# ---------------------------------------------------------------------------
# square classes and factorization

def factor_gaussian(z: GaussianInt) -> tuple[GaussianInt, list[tuple[GaussianInt, int]]]:
    """z = unit * prod(gen^e) over canonical prime generators, norms ascending."""
    if z.norm == 0:
        raise InputError("cannot factor 0")
    factors: list[tuple[GaussianInt, int]] = []
    n = z.norm
    e2 = 0
    while n % 2 == 0:
        n //= 2
        e2 += 1
    if e2:
        pi = GaussianInt(1, 1)
        for _ in range(e2):
            z = _exact_div(z, pi)
        factors.append((pi, e2))
    p = 3
    rest = n
    while p * p <= rest:
        if rest % p == 0:
            while rest % p == 0:
                rest //= p
            z, ex = _strip_odd_prime(z, p)
            factors.extend(ex)
        p += 2
    if rest > 1:
        z, ex = _strip_odd_prime(z, rest)
        factors.extend(ex)
    assert z.norm == 1
    factors.sort(key=lambda t: (t[0].norm, t[0].b, t[0].a))
    return z, factors


def _strip_odd_prime(z, p):
    out = []
    if p % 4 == 3:
        e = 0
        w = GaussianInt(p, 0)
        while True:
            q = _exact_div(z, w)
            if q is None:
                break
            z, e = q, e + 1
        if e:
            out.append((w, e))
        return z, out
    for gen in (ideal_above(p).gen, ideal_above(p, conjugate=True).gen):
        e = 0
        while True:
            q = _exact_div(z, gen)
            if q is None:
                break
            z, e = q, e + 1
        if e:
            out.append((gen, e))
    return z, out


def canonicalize_delta(z: GaussianInt) -> tuple[int, tuple[GaussianInt, ...]]:
    """Square class of z as (unit_exp in {0,1}, odd-exponent canonical primes).

    -1 = i^2 is a square, so the unit classes are represented by 1 and i.
    """
    unit, factors = factor_gaussian(z)
    gens = tuple(g for g, e in factors if e % 2 == 1)
    unit_exp = 1 if unit in (IUNIT, GaussianInt(0, -1)) else 0
    return unit_exp, gens


# ---------------------------------------------------------------------------
# the quadratic defect at (1+i), on units of Z[i] mod (1+i)^8 = 16*(-1)
#
# For odd u the extension Q(i)(sqrt(u)) is unramified at (1+i) iff u is
# congruent to a square times 1 mod (1+i)^5; the defect below measures the
# best such approximation and fixes the (1+i)-exponent of the relative
# discriminant: defect 1 -> exponent 4, defect 3 -> exponent 2, defect 4 ->
# exponent 0 inert, defect >= 5 -> exponent 0 split.

_ODD_SQUARES_MOD16 = tuple(
    sorted(
        {
            ((a * a - b * b) % 16, (2 * a * b) % 16)
            for a in range(16)
            for b in range(16)
            if (a + b) % 2 == 1
        }
    )
)


def _vpi_mod16(a: int, b: int) -> int:
    # (1+i)-valuation of a residue mod 16, capped at 8 (= v of 16 itself)
    if a == 0 and b == 0:
        return 8
    n = a * a + b * b
    return ((n & -n).bit_length()) - 1


def _two_adic_defect(u: GaussianInt) -> int:
    ua, ub = u.a % 16, u.b % 16
    best = 0
    for sa, sb in _ODD_SQUARES_MOD16:
        ra = (ua * sa - ub * sb - 1) % 16
        rb = (ua * sb + ub * sa) % 16
        v = _vpi_mod16(ra, rb)
        if v > best:
            best = v
            if best >= 8:
                break
    return best


@dataclass(frozen=True)
class GaussianQuadExt:
    """Q(i)(sqrt(delta)) for delta in a canonical nontrivial square class."""

    delta: GaussianInt
    unit_exp: int
    gens: tuple[GaussianInt, ...]
    rel_disc_odd: GaussianInt
    rel_disc_two_exp: int
    rel_disc_norm: int
    two_splitting: str

    def to_json(self) -> dict:
        return {
            "delta": {
                "a": self.delta.a,
                "b": self.delta.b,
                "unit": "i" if self.unit_exp else "1",
            },
            "rel_disc_norm": self.rel_disc_norm,
        }


def _ext_from_parts(unit_exp: int, gens: tuple[GaussianInt, ...]) -> GaussianQuadExt:
    gens = tuple(sorted(gens, key=lambda g: (g.norm, g.b, g.a)))
    delta = IUNIT if unit_exp else ONE
    for g in gens:
        delta = delta * g
    odd = tuple(g for g in gens if g.norm % 2 == 1)
    if len(odd) != len(gens):
        two_exp, two_kind = 5, RAMIFIED
    else:
        defect = _two_adic_defect(delta)
        if defect >= 5:
            two_exp, two_kind = 0, SPLIT
        elif defect == 4:
            two_exp, two_kind = 0, INERT
        else:
            assert defect in (1, 3)
            two_exp, two_kind = 5 - defect, RAMIFIED
    odd_part = ONE
    for g in odd:
        odd_part = odd_part * g
    odd_part = canonical_associate(odd_part) if odd else ONE
    norm = odd_part.norm << two_exp
    return GaussianQuadExt(delta, unit_exp, gens, odd_part, two_exp, norm, two_kind)


def quad_ext(delta) -> GaussianQuadExt:
    """Build Q(i)(sqrt(delta)) from any nonzero delta (int or GaussianInt)."""
    if isinstance(delta, int):
        delta = GaussianInt(delta, 0)
    unit_exp, gens = canonicalize_delta(delta)
    if unit_exp == 0 and not gens:
        raise DegenerateExtensionError(f"{delta} is a square in Q(i)")
    return _ext_from_parts(unit_exp, gens)


def relative_discriminant(delta) -> tuple[GaussianInt, int, int]:
    """(odd part, (1+i)-exponent, norm) of the relative discriminant."""
    ext = quad_ext(delta)
    return ext.rel_disc_odd, ext.rel_disc_two_exp, ext.rel_disc_norm


def splitting_in_ext(P: GaussianPrimeIdeal, ext: GaussianQuadExt) -> str:
    """How the prime P of Z[i] behaves in the quadratic extension."""
    if P.norm % 2 == 0:
        if ext.rel_disc_two_exp > 0:
            return RAMIFIED
        return ext.two_splitting
    if P.gen in ext.gens:
        return RAMIFIED
    s = quad_residue_symbol(ext.delta, P)
    assert s != 0
    return SPLIT if s == 1 else INERT


def quad_exts_with_disc_below(bound: float) -> list[GaussianQuadExt]:
    """All quadratic extensions of Q(i) with rel_disc_norm <= bound.

    Sorted by (rel_disc_norm, delta norm, unit_exp, generator keys); the
    smallest possible norm is 9 (delta = 3), so small bounds give [].
    """
    if bound < 0:
        raise InputError(f"bound must be nonnegative, got {bound}")
    limit = math.floor(bound)
    odd_gens = [P.gen for P in gaussian_primes_up_to_norm(limit) if P.norm % 2 == 1]
    out: list[GaussianQuadExt] = []

    def emit(gens: tuple[GaussianInt, ...], norm_prod: int) -> None:
        for unit_exp in (0, 1):
            for with_pi in (False, True):
                if not gens and unit_exp == 0 and not with_pi:
                    continue
                if with_pi and norm_prod << 5 > limit:
                    continue
                full = (gens + (GaussianInt(1, 1),)) if with_pi else gens
                ext = _ext_from_parts(unit_exp, full)
                if ext.rel_disc_norm <= limit:
                    out.append(ext)

    def rec(start: int, gens: tuple[GaussianInt, ...], norm_prod: int) -> None:
        emit(gens, norm_prod)
        for j in range(start, len(odd_gens)):
            n = norm_prod * odd_gens[j].norm
            if n > limit:
                break  # norms ascending, nothing later fits either
            rec(j + 1, gens + (odd_gens[j],), n)

    rec(0, (), 1)
    out.sort(
        key=lambda e: (
            e.rel_disc_norm,
            e.delta.norm,
            e.unit_exp,
            tuple((g.norm, g.b, g.a) for g in e.gens),
        )
    )
    return out
