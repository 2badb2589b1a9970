"""Real quadratic fields Q(sqrt(d)): splitting of primes, fundamental units,
regulators, and the bounded-regulator field scan.

All unit arithmetic is exact integers; floating point only enters at the
final logarithm, taken with enough working precision for the convergent
size.  Units satisfy x^2 - disc*y^2 = +-4 with the unit equal to
(x + y*sqrt(disc))/2.
"""

from __future__ import annotations

import math
import sys
import threading
from dataclasses import dataclass

import mpmath

from .errors import InputError

SPLIT = "split"
INERT = "inert"
RAMIFIED = "ramified"

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the base set covers all n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = ((d & -d).bit_length()) - 1
    d >>= r
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_squarefree(n: int) -> bool:
    if n < 1:
        raise InputError(f"expected a positive integer, got {n}")
    if n % 4 == 0:
        return False
    while n % 2 == 0:
        n //= 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return False
        else:
            p += 2
    return True


def squarefree_part(n: int) -> int:
    """The squarefree m with n = m * square, keeping the sign of n."""
    if n == 0:
        raise InputError("0 has no squarefree part")
    sign = -1 if n < 0 else 1
    n = abs(n)
    m = 1
    while n % 2 == 0:
        n //= 2
        if n % 2 == 0:
            n //= 2
        else:
            m *= 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                n //= p
            else:
                m *= p
        else:
            p += 2
    return sign * m * n


def fundamental_discriminant(d: int) -> int:
    """Discriminant of Q(sqrt(d)) for squarefree d: d if d = 1 mod 4, else 4d."""
    return d if d % 4 == 1 else 4 * d


def kronecker(a: int, n: int) -> int:
    """General Kronecker symbol (a/n) for n >= 0."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    r = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            r = -r
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                r = -r
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            r = -r
        a %= n
    return r if n == 1 else 0


def kronecker_symbol(d: int, p: int) -> int:
    """(disc/p) for disc the discriminant of Q(sqrt(d)); 0 iff p | disc."""
    if d == 0:
        raise InputError("d must be nonzero")
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    disc = fundamental_discriminant(squarefree_part(d))
    return kronecker(disc, p)


def splitting_type_q(field, p: int) -> str:
    d = field.d if isinstance(field, QuadFieldQ) else field
    s = kronecker_symbol(d, p)
    if s == 1:
        return SPLIT
    if s == -1:
        return INERT
    return RAMIFIED


def _check_field_d(d: int) -> None:
    if d < 2:
        raise InputError(f"d must be an integer >= 2, got {d}")
    if not is_squarefree(d):
        raise InputError(f"d must be squarefree, got {d}")


@dataclass(frozen=True)
class QuadFieldQ:
    """A real quadratic field Q(sqrt(d)), d >= 2 squarefree."""

    d: int
    disc: int

    @property
    def regulator(self) -> float:
        return regulator(self.d)

    def to_json(self) -> dict:
        return {"d": self.d, "disc": self.disc, "regulator": self.regulator}


def quad_field(d: int) -> QuadFieldQ:
    _check_field_d(d)
    return QuadFieldQ(d, fundamental_discriminant(d))


@dataclass(frozen=True)
class FundamentalUnit:
    """x, y with x^2 - disc*y^2 = 4*norm; the unit is (x + y*sqrt(disc))/2."""

    x: int
    y: int
    norm: int

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "norm": self.norm}


class _ExceedsCutoff:
    __slots__ = ()

    def __repr__(self) -> str:
        return "EXCEEDS_CUTOFF"


EXCEEDS_CUTOFF = _ExceedsCutoff()

_lock = threading.Lock()
_unit_cache: dict[int, FundamentalUnit] = {}
_reg_cache: dict[int, float] = {}


def _pqa_unit(D: int, cutoff: float | None):
    """Continued fraction of (P0 + sqrt(D))/2 for the discriminant D.

    Convergents G_i/B_i satisfy G^2 - D*B^2 = +-4 exactly at the period end;
    the period parity gives the unit norm.  When a cutoff is supplied we bail
    out as soon as the convergent alone forces log(unit) > cutoff, which
    keeps the bounded field scan cheap for fields with huge regulators.
    """
    sq = math.isqrt(D)
    P0 = sq if (sq - D) % 2 == 0 else sq - 1
    Q0 = 2
    P, Q = P0, Q0
    g_prev, g_prev2 = 2, -P0
    b_prev, b_prev2 = 0, 1
    limit = math.exp(cutoff) + 1.0 if cutoff is not None else None
    length = 0
    while True:
        a = (P + sq) // Q
        g = a * g_prev + g_prev2
        b = a * b_prev + b_prev2
        length += 1
        P = a * Q - P
        Q = (D - P * P) // Q
        if P == P0 and Q == Q0:
            break
        # the unit lies in (G-1, G+1), so G-1 > e^cutoff already decides
        if limit is not None and g - 1 > limit:
            return EXCEEDS_CUTOFF
        g_prev2, g_prev = g_prev, g
        b_prev2, b_prev = b_prev, b
    norm = 1 if length % 2 == 0 else -1
    assert g * g - D * b * b == 4 * norm
    return FundamentalUnit(g, b, norm)


def _unit_log(u: FundamentalUnit, disc: int) -> float:
    prec = max(80, u.x.bit_length() + 32)
    with mpmath.workprec(prec):
        val = (mpmath.mpf(u.x) + mpmath.mpf(u.y) * mpmath.sqrt(disc)) / 2
        return float(mpmath.log(val))


def fundamental_unit(d: int, cutoff: float | None = None):
    """Fundamental unit of Q(sqrt(d)), or EXCEEDS_CUTOFF if its log > cutoff."""
    _check_field_d(d)
    with _lock:
        u = _unit_cache.get(d)
    if u is None:
        res = _pqa_unit(fundamental_discriminant(d), cutoff)
        if res is EXCEEDS_CUTOFF:
            return EXCEEDS_CUTOFF
        u = res
        with _lock:
            _unit_cache.setdefault(d, u)
    if cutoff is not None and regulator(d) > cutoff:
        return EXCEEDS_CUTOFF
    return u


def regulator(d: int) -> float:
    """log of the fundamental unit (norm -1 units included)."""
    _check_field_d(d)
    with _lock:
        r = _reg_cache.get(d)
    if r is not None:
        return r
    u = fundamental_unit(d)
    r = _unit_log(u, fundamental_discriminant(d))
    with _lock:
        _reg_cache.setdefault(d, r)
    return r


def regulator_lower_bound(d: int) -> float:
    """log((sqrt(d-4) + sqrt(d))/2), increasing in d, below every regulator."""
    if d < 4:
        raise InputError(f"bound needs d >= 4, got {d}")
    return math.log((math.sqrt(d - 4) + math.sqrt(d)) / 2)


def fields_with_regulator_below(bound: float) -> list[QuadFieldQ]:
    """All real quadratic fields with regulator < bound, ascending d.

    d = 2 and 3 sit below the generic lower bound, so they are tested
    directly; from d = 5 on the bound is monotone and truncates the scan.
    """
    if not bound > 0:
        raise InputError(f"bound must be positive, got {bound}")
    if bound > 10:
        raise InputError(
            f"regulator bound {bound} would scan ~e^(2*bound) discriminants; "
            "bounds above 10 are not supported")
    out = []
    for d in (2, 3):
        if regulator(d) < bound:
            out.append(quad_field(d))
    d = 5
    while regulator_lower_bound(d) < bound:
        if is_squarefree(d):
            u = fundamental_unit(d, cutoff=bound)
            if u is not EXCEEDS_CUTOFF and regulator(d) < bound:
                out.append(quad_field(d))
        d += 1
    return sorted(out, key=lambda f: f.d)


# ---------------------------------------------------------------------------
# unit cache persistence

CACHE_HEADER = "sysarith-units 1"


def save_unit_cache(path: str) -> int:
    """Write every in-memory fundamental unit as 'd<TAB>x<TAB>y<TAB>norm'."""
    with _lock:
        items = sorted(_unit_cache.items())
    with open(path, "w", encoding="ascii") as fh:
        fh.write(CACHE_HEADER + "\n")
        for d, u in items:
            fh.write(f"{d}\t{u.x}\t{u.y}\t{u.norm}\n")
    return len(items)


def load_unit_cache(path: str) -> int:
    """Load a unit cache; regulators are recomputed lazily from the units.

    A malformed file is ignored in full with a warning, never trusted in
    part: a wrong unit would silently corrupt every search built on it.
    """
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        print(f"warning: cannot read unit cache {path}: {e}", file=sys.stderr)
        return 0
    if not lines or lines[0] != CACHE_HEADER:
        print(f"warning: ignoring unit cache {path}: bad header", file=sys.stderr)
        return 0
    loaded: dict[int, FundamentalUnit] = {}
    for line in lines[1:]:
        if not line:
            continue
        try:
            d, x, y, norm = (int(v) for v in line.split("\t"))
        except ValueError:
            print(f"warning: ignoring unit cache {path}: bad row {line!r}", file=sys.stderr)
            return 0
        if norm not in (1, -1) or d < 2 or not is_squarefree(d):
            print(f"warning: ignoring unit cache {path}: bad row {line!r}", file=sys.stderr)
            return 0
        if x * x - fundamental_discriminant(d) * y * y != 4 * norm:
            print(f"warning: ignoring unit cache {path}: inconsistent row for d={d}", file=sys.stderr)
            return 0
        loaded[d] = FundamentalUnit(x, y, norm)
    with _lock:
        _unit_cache.update(loaded)
    return len(loaded)


def clear_caches() -> None:
    with _lock:
        _unit_cache.clear()
        _reg_cache.clear()
