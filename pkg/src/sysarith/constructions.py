"""Same-systole families, greedy cover algebras, and explicit bound evaluators.

The family generator adjoins a fixed non-split prime and a growing sequence of
non-split primes to a base algebra, preserving the systole field while the
area factor grows by an exact integer identity.  The cover constructions build
an algebra obstructing every quadratic field (resp. extension of Q(i)) below a
discriminant bound by greedy set cover with certified witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import InputError, NoCandidateError
from .gaussian import (
    SPLIT,
    GaussianInt,
    _ideal_key,
    gaussian_primes_up_to_norm,
    quad_exts_with_disc_below,
    quad_residue_symbol,
    splitting_in_ext,
)
from .geodesics import MODE_PAPER, exact_systole_q
from .quaternion import (
    QuaternionAlgebraQ,
    algebra_q,
    algebra_qi,
    embeds_q,
    torsion_free_q,
)
from .real_quadratic import (
    QuadFieldQ,
    fundamental_discriminant,
    is_prime,
    is_squarefree,
    quad_field,
    splitting_type_q,
    squarefree_part,
)
from .search import _MaskMatrix, _sweep_range_full, max_ram_cardinality

_COVER_DISC_CAP = 10_000_000
_PRIMORIAL_CAP = 100_000_000

ROLE_COVER = "cover"
ROLE_TORSION = "torsion"
ROLE_PARITY = "parity"


# ---------------------------------------------------------------------------
# systole witness and the same-systole family

def systole_field_q(B: QuaternionAlgebraQ, cap: float) -> QuadFieldQ:
    """The real quadratic field realizing the shortest geodesic of B, if any
    appears below the cap."""
    res = exact_systole_q(B, MODE_PAPER, cap)
    if not res.found:
        raise NoCandidateError(
            f"no geodesic of length below {cap} for ramification set {B.ram_sorted}")
    return res.field


@dataclass(frozen=True)
class FamilyEntry:
    """One member of a same-systole family: the base set plus {p0, pi}."""

    index: int
    ram: tuple[int, ...]
    factor: int
    p0: int
    pi: int
    embeds_certified: bool
    torsion_inherited: bool | None

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "ram": list(self.ram),
            "factor": self.factor,
            "p0": self.p0,
            "pi": self.pi,
            "embeds_certified": self.embeds_certified,
            "torsion_inherited": self.torsion_inherited,
        }


def _nonsplit_primes(L: QuadFieldQ, exclude: frozenset[int]):
    """Primes not in `exclude` and not split in L, ascending."""
    p = 1
    while True:
        p += 1
        if not is_prime(p):
            continue
        if p in exclude:
            continue
        if splitting_type_q(L, p) != "split":
            yield p


def same_systole_family_q(B: QuaternionAlgebraQ, L: QuadFieldQ,
                          count: int) -> list[FamilyEntry]:
    """`count` algebras containing ram(B) whose systole field is still L.

    Adjoins p0 (the smallest prime outside ram(B) that is non-split in L) and
    then the next such primes p1 < p2 < ...; each entry satisfies the exact
    identity factor(ram_i) = factor(B) * (p0 - 1) * (pi - 1).
    """
    if count < 0:
        raise InputError(f"count must be >= 0, got {count}")
    if not embeds_q(L, B):
        raise InputError(
            f"field d={L.d} does not embed into the base algebra {B.ram_sorted}")
    base = B.ram
    base_factor = math.prod(p - 1 for p in base)
    base_torsion_free = torsion_free_q(B)
    gen = _nonsplit_primes(L, base)
    p0 = next(gen)
    entries = []
    for i in range(1, count + 1):
        pi = next(gen)
        ram = tuple(sorted(base | {p0, pi}))
        algebra = algebra_q(ram)
        factor = math.prod(p - 1 for p in ram)
        assert factor == base_factor * (p0 - 1) * (pi - 1), \
            "internal: factor identity violated"
        entries.append(FamilyEntry(
            index=i, ram=ram, factor=factor, p0=p0, pi=pi,
            embeds_certified=embeds_q(L, algebra),
            torsion_inherited=torsion_free_q(algebra) if base_torsion_free else None,
        ))
    return entries


def growth_check(family: list[FamilyEntry]) -> float:
    """Observed constant c_obs = max over i >= 2 of factor_i/(i^2 * factor_{i-1})."""
    if len(family) < 2:
        raise InputError("growth check needs at least 2 family entries")
    c_obs = 0.0
    for prev, cur in zip(family, family[1:]):
        c_obs = max(c_obs, cur.factor / (cur.index ** 2 * prev.factor))
    return c_obs


# ---------------------------------------------------------------------------
# greedy cover algebras

@dataclass(frozen=True)
class CoverResult:
    """An algebra obstructing every field below a discriminant bound."""

    algebra: object  # QuaternionAlgebraQ or QuaternionAlgebraQi
    fields: tuple
    certificate: dict  # field -> splitting member of the ramification set
    roles: tuple  # (member, role); role in {cover, torsion, parity}
    exact: bool = False

    @property
    def factor(self) -> int:
        return math.prod(
            (m.norm if hasattr(m, "norm") else m) - 1
            for m in self.algebra.ram_sorted)

    def to_json(self) -> dict:
        def member_json(m):
            return m if isinstance(m, int) else m.to_json()

        return {
            "ram": [member_json(m) for m in self.algebra.ram_sorted],
            "factor": self.factor,
            "fields": [f.to_json() for f in self.fields],
            "certificate": [
                {"field": f.to_json(), "witness": member_json(w)}
                for f, w in self.certificate.items()
            ],
            "roles": [{"member": member_json(m), "role": r} for m, r in self.roles],
            "exact": self.exact,
        }


def real_fields_with_disc_below(bound: float) -> list[QuadFieldQ]:
    """All real quadratic fields with fundamental discriminant <= bound."""
    out = []
    d = 1
    while True:
        d += 1
        if d > bound:
            break
        if is_squarefree(d) and fundamental_discriminant(d) <= bound:
            out.append(quad_field(d))
    return out


def _greedy_cover(items, covers_count, covers_row, full_mask):
    """Greedy max-coverage over bitmask rows; returns picked indices in order.

    items are scanned ascending, so ties go to the earliest (smallest) item.
    """
    uncovered = full_mask
    picks = []
    while uncovered:
        best_i, best_n = None, 0
        for i in range(len(items)):
            n = covers_count(i, uncovered)
            if n > best_n:
                best_i, best_n = i, n
        if best_i is None:
            return None  # some field uncoverable in this window
        picks.append(best_i)
        uncovered &= ~covers_row(best_i)
    # drop picks made redundant by later picks (keeps irredundancy exact)
    kept = list(picks)
    for i in reversed(range(len(kept))):
        rest = 0
        for j, k in enumerate(kept):
            if j != i:
                rest |= covers_row(k)
        if rest & full_mask == full_mask:
            del kept[i]
    return kept


def cover_algebra_2d(x: float, require_torsion_free: bool = False,
                     exact: bool = False) -> CoverResult:
    """An admissible prime set in which every real quadratic field with
    fundamental discriminant <= e^(2+2x) has a split prime, with certificate.

    Greedy by default; `exact` (x <= 1.5) finds the minimal-factor such set.
    """
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x >= 0):
        raise InputError(f"x must be a finite real >= 0, got {x!r}")
    bound = math.exp(2.0 + 2.0 * x)
    if bound > _COVER_DISC_CAP:
        raise InputError(f"discriminant bound e^(2+2x) = {bound:.3g} exceeds "
                         f"the supported cap {_COVER_DISC_CAP}")
    fields = real_fields_with_disc_below(bound)
    if exact:
        return _exact_cover_2d(x, fields, require_torsion_free)
    discs = [f.disc for f in fields]
    full_mask = (1 << len(fields)) - 1

    window = max(1000, 3 * max(discs, default=0))
    while True:
        primes = [int(p) for p in _accel.primes_up_to(window)]
        words = _accel.build_split_masks(
            np.array(primes, dtype=np.int64), discs)
        rows = _accel.masks_to_ints(words)
        covered_any = 0
        for r in rows:
            covered_any |= r
        if covered_any & full_mask == full_mask:
            break
        if window > 64 * _COVER_DISC_CAP:
            raise NoCandidateError(
                f"no prime window covers every field below disc bound {bound:.3g}")
        window *= 2

    picks = _greedy_cover(
        primes,
        lambda i, unc: bin(rows[i] & unc).count("1"),
        lambda i: rows[i],
        full_mask)
    assert picks is not None
    ram = [primes[i] for i in picks]
    roles = [(p, ROLE_COVER) for p in sorted(ram)]

    if require_torsion_free:
        for addition in _torsion_additions_2d(ram, primes):
            ram.append(addition)
            roles.append((addition, ROLE_TORSION))
    while len(ram) < 2 or len(ram) % 2 != 0:
        parity = next(p for p in primes if p not in ram)
        ram.append(parity)
        roles.append((parity, ROLE_PARITY))

    algebra = algebra_q(ram)
    certificate = {
        f: next(p for p in algebra.ram_sorted if splitting_type_q(f, p) == "split")
        for f in fields
    }
    return CoverResult(algebra=algebra, fields=tuple(fields),
                       certificate=certificate, roles=tuple(roles))


def _torsion_additions_2d(ram: list[int], window_primes: list[int]) -> list[int]:
    """Primes to append so the set meets both torsion conditions."""
    has4 = any(p % 4 == 1 for p in ram)
    has3 = any(p % 3 == 1 for p in ram)
    if has4 and has3:
        return []
    if not has4 and not has3:
        both = next(p for p in window_primes if p % 12 == 1 and p not in ram)
        return [both]
    residue = 4 if not has4 else 3
    return [next(p for p in window_primes if p % residue == 1 and p not in ram)]


def _exact_cover_2d(x: float, fields, require_torsion_free: bool) -> CoverResult:
    if x > 1.5:
        raise InputError(f"exact cover is supported only for x <= 1.5, got {x}")
    greedy = cover_algebra_2d(x, require_torsion_free, exact=False)
    bound = greedy.factor + 1
    primes = _accel.primes_up_to(bound)
    facs = [int(p) - 1 for p in primes]
    facs_np = np.asarray(facs, dtype=np.int64)
    discs = [f.disc for f in fields]
    masks = _MaskMatrix(primes, discs, require_torsion_free)
    cards = list(range(2, max_ram_cardinality(bound) + 1, 2))
    lo = 2
    while lo < bound:
        hi = min(lo * 2, bound)
        best, winners, _ = _sweep_range_full(masks, facs, facs_np, cards, lo, hi)
        if best is not None:
            idxs = min(winners)
            ram = [int(primes[i]) for i in idxs]
            algebra = algebra_q(ram)
            certificate = {
                f: next(p for p in algebra.ram_sorted
                        if splitting_type_q(f, p) == "split")
                for f in fields
            }
            return CoverResult(
                algebra=algebra, fields=tuple(fields), certificate=certificate,
                roles=tuple((p, ROLE_COVER) for p in sorted(ram)), exact=True)
        lo = hi
    raise AssertionError("internal: greedy cover factor not rediscovered")


def cover_algebra_3d(x: float, require_torsion_free: bool = False) -> CoverResult:
    """An admissible Gaussian prime-ideal set in which every quadratic
    extension of Q(i) with relative discriminant norm <= e^(2+2x) has a split
    ideal, with certificate."""
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x >= 0):
        raise InputError(f"x must be a finite real >= 0, got {x!r}")
    bound = math.exp(2.0 + 2.0 * x)
    if bound > _COVER_DISC_CAP:
        raise InputError(f"discriminant-norm bound e^(2+2x) = {bound:.3g} exceeds "
                         f"the supported cap {_COVER_DISC_CAP}")
    exts = quad_exts_with_disc_below(bound)
    full_mask = (1 << len(exts)) - 1

    window = max(200, 3 * max((e.rel_disc_norm for e in exts), default=0))
    while True:
        pool = gaussian_primes_up_to_norm(window)
        rows = []
        for P in pool:
            acc = 0
            for e_i, ext in enumerate(exts):
                if splitting_in_ext(P, ext) == SPLIT:
                    acc |= 1 << e_i
            rows.append(acc)
        covered_any = 0
        for r in rows:
            covered_any |= r
        if covered_any & full_mask == full_mask:
            break
        if window > 64 * _COVER_DISC_CAP:
            raise NoCandidateError(
                f"no ideal window covers every extension below norm bound {bound:.3g}")
        window *= 2

    picks = _greedy_cover(
        pool,
        lambda i, unc: bin(rows[i] & unc).count("1"),
        lambda i: rows[i],
        full_mask)
    assert picks is not None
    ram = [pool[i] for i in picks]
    roles = [(P, ROLE_COVER) for P in sorted(ram, key=_ideal_key)]

    if require_torsion_free:
        for addition in _torsion_additions_3d(ram, pool):
            ram.append(addition)
            roles.append((addition, ROLE_TORSION))
    while len(ram) < 2 or len(ram) % 2 != 0:
        parity = next(P for P in pool if P not in ram)
        ram.append(parity)
        roles.append((parity, ROLE_PARITY))

    algebra = algebra_qi(ram)
    certificate = {
        e: next(P for P in algebra.ram_sorted if splitting_in_ext(P, e) == SPLIT)
        for e in exts
    }
    return CoverResult(algebra=algebra, fields=tuple(exts),
                       certificate=certificate, roles=tuple(roles))


def _torsion_additions_3d(ram: list, pool: list) -> list:
    """Ideals to append so the set meets both Q(i) torsion conditions."""
    two, three = GaussianInt(2, 0), GaussianInt(3, 0)

    def sym(P, z):
        return quad_residue_symbol(z, P) if P.norm % 2 == 1 else 0

    has2 = any(sym(P, two) == 1 for P in ram)
    has3 = any(sym(P, three) == 1 for P in ram)
    if has2 and has3:
        return []
    odd = [P for P in pool if P.norm % 2 == 1 and P not in ram]
    if not has2 and not has3:
        both = next((P for P in odd
                     if sym(P, two) == 1 and sym(P, three) == 1), None)
        if both is not None:
            return [both]
        first = next(P for P in odd if sym(P, two) == 1)
        second = next(P for P in odd if P != first and sym(P, three) == 1)
        return [first, second]
    want = two if not has2 else three
    return [next(P for P in odd if sym(P, want) == 1)]


# ---------------------------------------------------------------------------
# explicit bound evaluators

def primorial_log_bound(x: float) -> float:
    """log of the primorial of x (sum of log p over primes p <= x)."""
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x >= 2):
        raise InputError(f"primorial bound needs x >= 2, got {x!r}")
    if x > _PRIMORIAL_CAP:
        raise InputError(f"x = {x:.3g} exceeds the supported cap {_PRIMORIAL_CAP}")
    primes = _accel.primes_up_to(int(x))
    return float(np.sum(np.log(primes.astype(np.float64))))


def theorem_area_log_bound_2d(x: float, c1: float, c2: float) -> float:
    """log of the area majorant pi/3 times the primorial of 2*c1*e^((2+2x)*c2)."""
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x >= 0):
        raise InputError(f"x must be a finite real >= 0, got {x!r}")
    if c1 < 1 or c2 < 1:
        raise InputError(f"constants must satisfy c1, c2 >= 1, got {c1}, {c2}")
    threshold = 2.0 * c1 * math.exp((2.0 + 2.0 * x) * c2)
    return math.log(math.pi / 3.0) + primorial_log_bound(threshold)


def _exact_kth_root_pow2(value: int, halvings: int) -> int:
    """Exact 2^halvings-th root of a perfect power, else InputError."""
    root = value
    for _ in range(halvings):
        r = math.isqrt(root)
        if r * r != root:
            raise InputError(f"{value} is not a perfect 2^{halvings}-th power")
        root = r
    return root


def multiquadratic_discriminant(a_list) -> tuple[int, int]:
    """(|disc|, r) of the multiquadratic field generated by sqrt of each a_i,
    where |disc| = (2^r * rad(prod a_i))^(2^(m-1)).

    Computed from the product of the discriminants of the 2^m - 1 quadratic
    subfields; r is read off that product and lies in {0, 2, 3}.
    """
    a = list(a_list)
    m = len(a)
    if m == 0:
        raise InputError("need at least one generator")
    if m > 16:
        raise InputError(f"at most 16 generators supported, got {m}")
    if len(set(a)) != m:
        raise InputError(f"generators must be distinct, got {a}")
    for ai in a:
        if ai == 0 or not is_squarefree(abs(ai)):
            raise InputError(f"generators must be nonzero squarefree, got {ai}")
    prod_discs = 1
    for bits in range(1, 1 << m):
        sub = 1
        for i in range(m):
            if bits >> i & 1:
                sub *= a[i]
        d = squarefree_part(sub)
        if d == 1:
            raise InputError(
                f"generators are multiplicatively dependent mod squares: {a}")
        prod_discs *= abs(fundamental_discriminant(d))
    rad = 1
    total = abs(math.prod(a))
    p = 1
    while total > 1:
        p += 1
        if total % p == 0:
            rad *= p
            while total % p == 0:
                total //= p
    base = _exact_kth_root_pow2(prod_discs, m - 1)
    two_part, shape_err = divmod(base, rad)
    r = max(two_part.bit_length() - 1, 0)
    if shape_err or (1 << r) != two_part or r not in (0, 2, 3):
        raise InputError(f"discriminant {prod_discs} does not match the "
                         f"(2^r * rad)^(2^(m-1)) shape for generators {a}")
    return prod_discs, r


def silverman_disc_bound(n: int, x: float, absolute_qi: bool = False) -> float:
    """The discriminant-norm bound e^(2(n+x)) for degree-n base fields; the
    absolute form over Q(i) (n = 2) is 16 * e^(2(2+x))."""
    if not isinstance(n, int) or n < 1:
        raise InputError(f"degree n must be an integer >= 1, got {n!r}")
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x >= 0):
        raise InputError(f"x must be a finite real >= 0, got {x!r}")
    if absolute_qi:
        if n != 2:
            raise InputError("the absolute Q(i) form requires n = 2")
        return 16.0 * math.exp(2.0 * (2.0 + x))
    return math.exp(2.0 * (n + x))
