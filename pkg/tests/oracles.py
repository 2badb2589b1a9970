"""Independent brute-force oracles the tests compare library code against.

Everything here trades speed for obviousness: direct residue enumeration,
naive subset filters, and straight double-loop lattice sums, written without
reusing any package internals beyond basic value types.
"""

from __future__ import annotations

import math
from itertools import combinations


def sieve_primes(n: int) -> list[int]:
    """All primes <= n by a plain sieve."""
    if n < 2:
        return []
    mask = bytearray([1]) * (n + 1)
    mask[0] = mask[1] = 0
    for p in range(2, int(n ** 0.5) + 1):
        if mask[p]:
            mask[p * p:: p] = bytearray(len(mask[p * p:: p]))
    return [i for i, m in enumerate(mask) if m]


def brute_is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def brute_squarefree_part(n: int) -> int:
    if n == 0:
        return 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    k = 2
    while k * k <= n:
        while n % (k * k) == 0:
            n //= k * k
        if n % k == 0:
            out *= k
            n //= k
        k += 1
    return sign * out * n


def brute_splitting_q(d: int, p: int) -> str:
    """Splitting of p in Q(sqrt(d)) by enumerating squares mod the discriminant rules."""
    disc = d if d % 4 == 1 else 4 * d
    if p == 2:
        if disc % 2 == 0:
            return "ramified"
        return "split" if disc % 8 == 1 else "inert"
    if disc % p == 0:
        return "ramified"
    squares = {(x * x) % p for x in range(1, p)}
    return "split" if disc % p in squares else "inert"


def brute_symbol_qi(delta_a: int, delta_b: int, gen_a: int, gen_b: int,
                    p: int) -> str:
    """Splitting of an odd Gaussian prime ideal in Q(i)(sqrt(delta)) by
    enumerating all squares of the residue field."""
    if gen_b % p != 0:
        i_val = (-gen_a * pow(gen_b, -1, p)) % p
        d = (delta_a + delta_b * i_val) % p
        if d == 0:
            return "ramified"
        squares = {(x * x) % p for x in range(1, p)}
        return "split" if d in squares else "inert"
    q = abs(gen_a)
    squares = set()
    for x in range(q):
        for y in range(q):
            if (x, y) != (0, 0):
                squares.add(((x * x - y * y) % q, (2 * x * y) % q))
    d = (delta_a % q, delta_b % q)
    if d == (0, 0):
        return "ramified"
    return "split" if d in squares else "inert"


def naive_prime_sets(factor_bound: int, cardinality: int) -> list[tuple[int, ...]]:
    """All prime sets of the given size with prod(p-1) < factor_bound,
    sorted by (factor, set).

    The pool is pre-pruned: p can only appear if (p-1) times the product of
    the cardinality-1 smallest factors stays below the bound (that product
    can only shrink by excluding p itself, so nothing valid is dropped).
    """
    if factor_bound <= 1:
        return []
    pool = [p for p in sieve_primes(factor_bound + 1) if p - 1 < factor_bound]
    prefix = math.prod(p - 1 for p in pool[: cardinality - 1])
    pool = [p for p in pool if (p - 1) * prefix < factor_bound]
    out = []
    for combo in combinations(pool, cardinality):
        f = math.prod(p - 1 for p in combo)
        if f < factor_bound:
            out.append((f, combo))
    out.sort()
    return [c for _, c in out]


def lattice_zeta_qi(norm_bound: int) -> float:
    """Partial sum of 1/N(z)^2 over nonzero Gaussian integers up to the norm
    bound, divided by the unit count 4."""
    total = 0.0
    m = int(math.isqrt(norm_bound))
    for a in range(-m, m + 1):
        for b in range(-m, m + 1):
            n = a * a + b * b
            if 0 < n <= norm_bound:
                total += 1.0 / (n * n)
    return total / 4.0


def biquadratic_rel_disc_norm(m: int) -> int:
    """N(disc of Q(i)(sqrt(m)) / Q(i)) for a rational squarefree m (m not 0,
    and the extension nontrivial), via the product of the discriminants of
    the three quadratic subfields of the degree-4 Galois field Q(i, sqrt(m)):
    |disc| = |d(-1) * d(m) * d(-m)|, and the relative norm is |disc| / 16.
    """

    def fund_disc(d: int) -> int:
        return d if d % 4 == 1 else 4 * d

    abs_disc = abs(fund_disc(-1) * fund_disc(m) * fund_disc(-m))
    assert abs_disc % 16 == 0
    return abs_disc // 16


def brute_even_split_qi(delta_a: int, delta_b: int) -> bool:
    """Whether the even prime (1+i) splits in Q(i)(sqrt(delta)), for odd
    delta: true iff delta is a 2-adic square, checked by enumerating every
    odd square residue modulo (1+i)^5.  (x+yi) is divisible by (1+i)^5 iff
    x+y and x-y are both 0 mod 8."""
    assert (delta_a + delta_b) % 2 == 1, "delta must be odd"
    for a in range(16):
        for b in range(16):
            if (a + b) % 2 != 1:
                continue
            x = (a * a - b * b) - delta_a
            y = (2 * a * b) - delta_b
            if (x + y) % 8 == 0 and (x - y) % 8 == 0:
                return True
    return False


def brute_fundamental_unit(d: int, y_limit: int = 10 ** 6):
    """Smallest (x, y, norm) with x^2 - disc*y^2 = +-4, y >= 1, by direct scan."""
    disc = d if d % 4 == 1 else 4 * d
    for y in range(1, y_limit):
        for norm in (-1, 1):
            x2 = disc * y * y + 4 * norm
            if x2 > 0:
                x = math.isqrt(x2)
                if x * x == x2:
                    return x, y, norm
    raise AssertionError(f"no unit found for d={d} within y < {y_limit}")


def brute_geodesic_min_trace_length(cap: float) -> list[tuple[int, float]]:
    """(t, length) for traces t >= 3 with length <= cap."""
    out = []
    t = 3
    while True:
        length = math.log((t + math.sqrt(t * t - 4)) / 2)
        if length > cap:
            return out
        out.append((t, length))
        t += 1
