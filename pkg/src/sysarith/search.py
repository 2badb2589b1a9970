"""Minimal-coarea searches for quaternion algebras with prescribed systole bound.

The surface search composes four steps: list the real quadratic fields whose
regulator falls below the target, find some candidate algebra obstructing all
of them inside a small prime pool, convert its area factor into cardinality
and prime-pool bounds, and exhaustively test every admissible prime set below
the candidate factor.  The 3-manifold variant over Q(i) is budgeted and
best-effort: it certifies its output but does not claim minimality.
"""

from __future__ import annotations

import heapq
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import InadmissibleAlgebraError, InputError, NoCandidateError
from .gaussian import (
    SPLIT,
    GaussianPrimeIdeal,
    GaussianQuadExt,
    _ideal_key,
    gaussian_primes_up_to_norm,
    ideal_above,
    quad_exts_with_disc_below,
    splitting_in_ext,
)
from .quaternion import QuaternionAlgebraQ, algebra_q, algebra_qi
from .real_quadratic import (
    fields_with_regulator_below,
    is_prime,
    splitting_type_q,
)
from .volume import volume_qi



# ---------------------------------------------------------------------------
# ordered enumeration of index sets by exact product
#
# Index tuples (i_1 < ... < i_k) over a nondecreasing factor list are emitted
# in nondecreasing product order from a min-heap.  Each tuple has exactly one
# parent (decrement the last decrementable coordinate), so each is generated
# once: a node's children are "bump the last coordinate" (always canonical)
# and "bump coordinate l" for the single l whose suffix is packed tight.

def _ordered_index_sets(factors, cards, bound=None):
    """Yield (product, idx_tuple) over all strictly increasing index tuples.

    factors: nondecreasing list of positive ints; cards: iterable of tuple
    lengths; bound: strict upper bound on emitted products (None = none).
    Products are exact Python ints; ordering is (product, idx_tuple).
    """
    n = len(factors)
    heap = []
    for card in sorted(set(cards)):
        if card < 1 or card > n:
            continue
        root = tuple(range(card))
        prod = math.prod(factors[i] for i in root)
        if bound is None or prod < bound:
            heap.append((prod, root))
    heapq.heapify(heap)
    while heap:
        prod, idxs = heapq.heappop(heap)
        yield prod, idxs
        last = idxs[-1]
        if last + 1 < n:
            child = prod // factors[last] * factors[last + 1]
            if bound is None or child < bound:
                heapq.heappush(heap, (child, idxs[:-1] + (last + 1,)))
        # the one inner coordinate whose bump keeps the parent rule canonical:
        # the suffix after it must already be packed tight
        k = len(idxs)
        s = k - 1
        while s > 0 and idxs[s] == idxs[s - 1] + 1:
            s -= 1
        l = s - 1
        if l >= 0 and idxs[l + 1] == idxs[l] + 2:
            child = prod // factors[idxs[l]] * factors[idxs[l] + 1]
            if bound is None or child < bound:
                bumped = idxs[:l] + (idxs[l] + 1,) + idxs[l + 1 :]
                heapq.heappush(heap, (child, bumped))


def max_ram_cardinality(area_factor_bound: int) -> int:
    """Largest even 2k such that the 2k smallest primes have prod(p-1) < bound."""
    if area_factor_bound < 1:
        raise InputError(f"area factor bound must be >= 1, got {area_factor_bound}")
    card = 0
    prod = 1
    p = 1
    while True:
        pair = 1
        for _ in range(2):
            p = _next_prime(p)
            pair *= p - 1
        if prod * pair < area_factor_bound:
            prod *= pair
            card += 2
        else:
            return card


def _next_prime(p: int) -> int:
    q = p + 1
    while not is_prime(q):
        q += 1
    return q


def enumerate_prime_sets(factor_bound: int, cardinality: int):
    """Stream all sets of `cardinality` distinct primes with prod(p-1) < bound.

    Sets are yielded as ascending prime tuples in nondecreasing factor order,
    each exactly once.
    """
    if cardinality < 1 or cardinality % 2 != 0:
        raise InputError(f"cardinality must be a positive even integer, got {cardinality}")
    if factor_bound <= 1:
        return
    # product of (p-1) over the (cardinality-1) smallest primes bounds the
    # largest usable prime: (p-1) * that product < bound
    prod_small = 1
    p = 1
    for _ in range(cardinality - 1):
        p = _next_prime(p)
        prod_small *= p - 1
    limit = (factor_bound - 1) // prod_small + 1
    primes = [int(q) for q in _accel.primes_up_to(max(limit, 3))]
    factors = [q - 1 for q in primes]
    for prod, idxs in _ordered_index_sets(factors, [cardinality], factor_bound):
        yield tuple(primes[i] for i in idxs)


# ---------------------------------------------------------------------------
# obstruction masks
#
# Bit f of a prime's row is set iff the prime splits in field f; a set of
# primes obstructs every field iff the OR of its rows covers all field bits.
# With the torsion filter on, two extra virtual bits (p = 1 mod 4 and
# p = 1 mod 3) must be covered as well.

class _MaskMatrix:
    """Lazily materialized packed split-mask rows for a prime pool."""

    def __init__(self, primes: np.ndarray, discs: list[int], torsion: bool,
                 block: int = 1 << 16):
        self.primes = primes
        self.discs = discs
        self.torsion = torsion
        self.block = block
        self.bits = len(discs) + (2 if torsion else 0)
        self.width = max(1, (self.bits + 63) // 64)
        # one sentinel all-zero row at index len(primes) for padded gathers
        self._rows = np.zeros((0, self.width), dtype=np.uint64)
        full = np.zeros(self.width, dtype=np.uint64)
        for b in range(self.bits):
            full[b // 64] |= np.uint64(1 << (b % 64))
        self.target = full

    def _build(self, lo: int, hi: int) -> np.ndarray:
        chunk = self.primes[lo:hi]
        words = _accel.build_split_masks(chunk, self.discs)
        if words.shape[1] < self.width:
            pad = np.zeros((len(chunk), self.width - words.shape[1]), dtype=np.uint64)
            words = np.hstack([words, pad])
        if self.torsion:
            b4, b3 = len(self.discs), len(self.discs) + 1
            words[:, b4 // 64] |= np.where(
                chunk % 4 == 1, np.uint64(1 << (b4 % 64)), np.uint64(0))
            words[:, b3 // 64] |= np.where(
                chunk % 3 == 1, np.uint64(1 << (b3 % 64)), np.uint64(0))
        return words

    def ensure(self, n_rows: int) -> np.ndarray:
        """Return the row matrix covering at least prime indices [0, n_rows)."""
        have = len(self._rows)
        if n_rows > have:
            want = min(len(self.primes), max(n_rows, have + self.block))
            self._rows = np.vstack([self._rows, self._build(have, want)])
        return self._rows


# ---------------------------------------------------------------------------
# step 2: candidate algebra from a fixed small pool (ordered stream)

_POOL_STAGES = ((25, (2, 4, 6)), (50, (2, 4, 6, 8)))


def _first_n_primes(n: int) -> list[int]:
    out = []
    p = 1
    for _ in range(n):
        p = _next_prime(p)
        out.append(p)
    return out


def _candidate_set(discs: list[int], require_torsion_free: bool):
    """Least-factor pool set obstructing every disc (lex-least tie), or None.

    Each pool stage is exhausted by the memoryless range sweep, so a None
    really does mean the stage's pool contains no valid set.
    """
    for pool_size, cards in _POOL_STAGES:
        primes = np.array(_first_n_primes(pool_size), dtype=np.int64)
        masks = _MaskMatrix(primes, discs, require_torsion_free)
        facs = [int(p) - 1 for p in primes]
        facs_np = np.asarray(facs, dtype=np.int64)
        max_factor = math.prod(facs[-max(cards):])
        lo = 2
        while lo <= max_factor:
            best, winners, _ = _sweep_range_full(
                masks, facs, facs_np, cards, lo, lo * 2)
            if best is not None:
                idxs = min(winners)
                return tuple(int(primes[i]) for i in idxs), best
            lo *= 2
    return None


def candidate_algebra_2d(l: float, require_torsion_free: bool = False) -> QuaternionAlgebraQ:
    """Some admissible algebra obstructing every field with regulator < l.

    Drawn from a fixed pool (first 25 primes, cardinality 2/4/6; widened once
    to 50 primes and cardinality 8), first in area-factor order.
    """
    _check_l(l)
    fields = fields_with_regulator_below(l)
    found = _candidate_set([f.disc for f in fields], require_torsion_free)
    if found is None:
        raise NoCandidateError(
            f"no candidate algebra for systole bound {l} in the widened prime pool")
    return algebra_q(found[0])


def _check_l(l: float) -> None:
    if not (isinstance(l, (int, float)) and math.isfinite(l) and l > 0):
        raise InputError(f"systole bound must be a positive finite real, got {l!r}")


# ---------------------------------------------------------------------------
# step 4: exhaustive sweep below the candidate factor
#
# Factor ranges [2^k, 2^(k+1)) are processed in order; within a range, sets
# are enumerated by prefix descent and the final coordinate is tested as one
# vectorized slice.  The first range containing a passing set holds the
# optimum and all its ties; earlier ranges were exhausted without a pass.

def _slice_bounds(facs_np, prod, lo, hi, after):
    """Index range [j0, j1) with lo <= prod*facs[j] < hi and j > after."""
    j0 = int(np.searchsorted(facs_np, (lo + prod - 1) // prod, side="left"))
    j1 = int(np.searchsorted(facs_np, (hi - 1) // prod, side="right"))
    return max(j0, after + 1), j1


def _sweep_range_full(masks, facs, facs_np, cards, lo, hi, executor=None,
                      slice_chunk=1 << 20, count_below=None):
    """Scan [lo, hi): return (best_factor, winner_index_tuples, n_below).

    n_below counts enumerated sets with factor < count_below (all sets when
    count_below is None is not needed, so None counts everything in range).
    """
    best = None
    winners: list[tuple] = []
    n_counted = 0
    jobs = []

    def eval_slice(prefix_idxs, prod, j0, j1):
        rows = masks.ensure(j1)
        prefix_or = np.zeros(masks.width, dtype=np.uint64)
        for i in prefix_idxs:
            prefix_or |= rows[i]
        local_best = None
        local_winners = []
        local_count = 0
        for s0 in range(j0, j1, slice_chunk):
            s1 = min(j1, s0 + slice_chunk)
            sub = rows[s0:s1] | prefix_or
            ok = (sub == masks.target).all(axis=1)
            fvec = prod * facs_np[s0:s1]
            if count_below is None:
                local_count += s1 - s0
            else:
                local_count += int(np.count_nonzero(fvec < count_below))
            hits = np.flatnonzero(ok)
            if hits.size:
                hf = fvec[hits]
                fmin = int(hf.min())
                if local_best is None or fmin < local_best:
                    local_best = fmin
                    local_winners = []
                if fmin == local_best:
                    for j in (hits[hf == fmin] + s0):
                        local_winners.append(prefix_idxs + (int(j),))
        return local_best, local_winners, local_count

    def submit(prefix_idxs, prod, j0, j1):
        # materialize rows in the submitting thread: workers only read
        masks.ensure(j1)
        if executor is None:
            jobs.append(eval_slice(prefix_idxs, prod, j0, j1))
        else:
            jobs.append(executor.submit(eval_slice, prefix_idxs, prod, j0, j1))

    for card in sorted(set(cards)):
        if card < 2 or card > len(facs):
            continue
        stack = [((), 1, 0)]
        while stack:
            prefix, prod, start = stack.pop()
            depth = len(prefix)
            for i in range(start, len(facs)):
                prod2 = prod * facs[i]
                rest = prod2
                for j in range(i + 1, i + 1 + (card - 1 - depth)):
                    if j >= len(facs):
                        rest = None
                        break
                    rest *= facs[j]
                if rest is None or rest >= hi:
                    break
                if depth == card - 2:
                    j0, j1 = _slice_bounds(facs_np, prod2, lo, hi, i)
                    if j0 < j1:
                        submit(prefix + (i,), prod2, j0, j1)
                else:
                    stack.append((prefix + (i,), prod2, i + 1))

    for job in jobs:
        b, w, c = job if executor is None else job.result()
        n_counted += c
        if b is not None and (best is None or b < best):
            best = b
            winners = []
        if b is not None and b == best:
            winners.extend(w)
    return best, winners, n_counted


# ---------------------------------------------------------------------------
# search results

@dataclass(frozen=True)
class SearchResult:
    """Outcome of a minimal/valid-algebra search over Q or Q(i)."""

    l: float
    base: str  # "Q" or "Qi"
    factor: int
    sets: tuple
    excluded_fields: tuple
    certificates: tuple  # one dict per set: field -> splitting member
    exhaustive: bool
    best_effort: bool = False
    tested_below_optimum: int = 0
    volume: float | None = None

    def algebras(self):
        make = algebra_q if self.base == "Q" else algebra_qi
        return [make(s) for s in self.sets]

    def to_json(self) -> dict:
        def member_json(m):
            return m.to_json() if isinstance(m, GaussianPrimeIdeal) else m

        return {
            "l": self.l,
            "base": self.base,
            "factor_or_volume": self.volume if self.base == "Qi" else self.factor,
            "sets": [[member_json(m) for m in s] for s in self.sets],
            "excluded_fields": [f.to_json() for f in self.excluded_fields],
            "certificates": [
                [{"field": f.to_json(), "witness": member_json(w)}
                 for f, w in cert.items()]
                for cert in self.certificates
            ],
            "exhaustive": self.exhaustive,
            "best_effort": self.best_effort,
            "tested_below_optimum": self.tested_below_optimum,
        }


def _certify_q(primes: tuple[int, ...], fields) -> dict:
    cert = {}
    for f in fields:
        witness = next((p for p in primes if splitting_type_q(f, p) == "split"), None)
        assert witness is not None, "internal: passing set lost its certificate"
        cert[f] = witness
    return cert


def _certify_qi(ideals: tuple[GaussianPrimeIdeal, ...], exts) -> dict:
    cert = {}
    for e in exts:
        witness = next((P for P in ideals if splitting_in_ext(P, e) == SPLIT), None)
        assert witness is not None, "internal: passing set lost its certificate"
        cert[e] = witness
    return cert


def minimal_algebra_2d(l: float, require_torsion_free: bool = False,
                       workers: int = 1) -> SearchResult:
    """All minimal-area-factor admissible prime sets obstructing every field
    with regulator < l (optionally also torsion-free), with certificates.
    """
    _check_l(l)
    if workers < 1:
        raise InputError(f"workers must be >= 1, got {workers}")
    fields = fields_with_regulator_below(l)
    discs = [f.disc for f in fields]
    found = _candidate_set(discs, require_torsion_free)
    if found is None:
        raise NoCandidateError(
            f"no candidate algebra for systole bound {l} in the widened prime pool")
    cand_factor = found[1]
    bound = cand_factor + 1  # the sweep uses strict <, so include the candidate
    cards = list(range(2, max_ram_cardinality(bound) + 1, 2))
    primes = _accel.primes_up_to(bound + 1)
    facs = [int(p) - 1 for p in primes]
    facs_np = np.array(facs, dtype=np.int64)
    masks = _MaskMatrix(primes, discs, require_torsion_free)

    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        best = None
        winners: list[tuple] = []
        tested_below = 0
        lo = 2
        while lo < bound:
            hi = min(lo * 2, bound)
            b, w, c = _sweep_range_full(masks, facs, facs_np, cards, lo, hi,
                                        executor=executor)
            if b is None:
                tested_below += c
                lo = hi
                continue
            best, winners = b, w
            _, _, below = _sweep_range_full(masks, facs, facs_np, cards, lo, hi,
                                            executor=executor, count_below=best)
            tested_below += below
            break
        assert best is not None, "internal: candidate factor not rediscovered"
    finally:
        if executor is not None:
            executor.shutdown()

    prime_list = [int(p) for p in primes]
    sets = sorted(tuple(prime_list[i] for i in idxs) for idxs in winners)
    certs = tuple(_certify_q(s, fields) for s in sets)
    return SearchResult(
        l=float(l), base="Q", factor=best, sets=tuple(sets),
        excluded_fields=tuple(fields), certificates=certs,
        exhaustive=True, best_effort=False, tested_below_optimum=tested_below)


# ---------------------------------------------------------------------------
# 3-manifold variant over Q(i): budgeted, certified, best-effort

def valid_algebra_3d(l: float, pool_norm_bound: int,
                     budget: int = 200_000) -> SearchResult:
    """Least-volume admissible ideal set found within the budget such that
    every quadratic extension of Q(i) with relative discriminant norm at most
    e^(2(l+2)) is obstructed.  Best-effort: minimality is not claimed.
    """
    _check_l(l)
    if pool_norm_bound < 2:
        raise InputError(f"pool norm bound must be >= 2, got {pool_norm_bound}")
    if budget < 1:
        raise InputError(f"budget must be >= 1, got {budget}")
    exts = quad_exts_with_disc_below(math.exp(2.0 * (l + 2.0)))
    pool = gaussian_primes_up_to_norm(pool_norm_bound)
    if len(pool) < 2:
        raise NoCandidateError(
            f"ideal pool with norm bound {pool_norm_bound} has fewer than 2 ideals")
    factors = [P.norm - 1 for P in pool]
    target = (1 << len(exts)) - 1
    rows = []
    for P in pool:
        acc = 0
        for e_i, ext in enumerate(exts):
            if splitting_in_ext(P, ext) == SPLIT:
                acc |= 1 << e_i
        rows.append(acc)

    cards = range(2, len(pool) + 1, 2)
    best = None
    winners: list[tuple] = []
    fail_factors: list[int] = []
    pops = 0
    for prod, idxs in _ordered_index_sets(factors, cards):
        pops += 1
        if pops > budget:
            break
        if best is not None and prod > best:
            break
        acc = 0
        for i in idxs:
            acc |= rows[i]
        if acc == target:
            if best is None:
                best = prod
            winners.append(idxs)
        elif best is None:
            fail_factors.append(prod)
    tested_below = sum(1 for f in fail_factors if best is None or f < best)
    if best is None:
        raise NoCandidateError(
            f"no valid ideal set within budget {budget} over pool norm bound "
            f"{pool_norm_bound} for systole bound {l}")

    sets = sorted((tuple(pool[i] for i in idxs) for idxs in winners),
                  key=lambda s: [_ideal_key(P) for P in s])
    certs = tuple(_certify_qi(s, exts) for s in sets)
    return SearchResult(
        l=float(l), base="Qi", factor=best, sets=tuple(sets),
        excluded_fields=tuple(exts), certificates=certs,
        exhaustive=False, best_effort=True, tested_below_optimum=tested_below,
        volume=volume_qi(algebra_qi(sets[0])))


# ---------------------------------------------------------------------------
# norm-multiset verification (the tables list ideals only by absolute norm)

@dataclass(frozen=True)
class AssignmentReport:
    ideals: tuple[GaussianPrimeIdeal, ...]
    valid: bool
    failing_ext: GaussianQuadExt | None

    def to_json(self) -> dict:
        return {
            "ideals": [P.to_json() for P in self.ideals],
            "valid": self.valid,
            "failing_ext": None if self.failing_ext is None else self.failing_ext.to_json(),
        }


@dataclass(frozen=True)
class ExclusionReport:
    norms: tuple[int, ...]
    l: float
    valid: bool
    assignments: tuple[AssignmentReport, ...]
    tested_extensions: int

    def to_json(self) -> dict:
        return {
            "norms": list(self.norms),
            "l": self.l,
            "valid": self.valid,
            "assignments": [a.to_json() for a in self.assignments],
            "tested_extensions": self.tested_extensions,
        }


def _norm_choices(norm: int, multiplicity: int):
    """Concrete prime-ideal options realizing `multiplicity` ideals of `norm`."""
    if norm == 2:
        if multiplicity > 1:
            raise InputError("norm 2 has a unique (ramified) prime ideal")
        return [(ideal_above(2),)]
    if is_prime(norm) and norm % 4 == 1:
        P, Pbar = ideal_above(norm), ideal_above(norm, conjugate=True)
        if multiplicity == 1:
            return [(P,), (Pbar,)]
        if multiplicity == 2:
            return [(P, Pbar)]
        raise InputError(f"norm {norm} admits at most 2 prime ideals")
    root = math.isqrt(norm)
    if root * root == norm and is_prime(root) and root % 4 == 3:
        if multiplicity > 1:
            raise InputError(f"norm {norm} has a unique (inert) prime ideal")
        return [(ideal_above(root),)]
    raise InputError(f"no Gaussian prime ideal has norm {norm}")


def verify_exclusion_3d(ram_norm_multiset, l: float) -> ExclusionReport:
    """Check whether some conjugate assignment of the norm multiset obstructs
    every quadratic extension of Q(i) in the l-bounded list."""
    _check_l(l)
    norms = sorted(int(n) for n in ram_norm_multiset)
    if len(norms) < 2 or len(norms) % 2 != 0:
        raise InadmissibleAlgebraError(
            f"ramification multiset must have even cardinality >= 2, got {norms}")
    counts: dict[int, int] = {}
    for n in norms:
        counts[n] = counts.get(n, 0) + 1
    options = [_norm_choices(n, m) for n, m in sorted(counts.items())]
    exts = quad_exts_with_disc_below(math.exp(2.0 * (l + 2.0)))

    reports = []
    any_valid = False
    for combo in itertools.product(*options):
        ideals = tuple(sorted((P for group in combo for P in group), key=_ideal_key))
        failing = None
        for ext in exts:
            if not any(splitting_in_ext(P, ext) == SPLIT for P in ideals):
                failing = ext
                break
        ok = failing is None
        any_valid = any_valid or ok
        reports.append(AssignmentReport(ideals=ideals, valid=ok, failing_ext=failing))
    return ExclusionReport(
        norms=tuple(norms), l=float(l), valid=any_valid,
        assignments=tuple(reports), tested_extensions=len(exts))
