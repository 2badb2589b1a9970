"""Real quadratic fields: units, regulators, splitting, and the unit cache."""

import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sysarith.errors import InputError
from sysarith.real_quadratic import (
    EXCEEDS_CUTOFF,
    clear_caches,
    fields_with_regulator_below,
    fundamental_discriminant,
    fundamental_unit,
    is_prime,
    is_squarefree,
    kronecker,
    kronecker_symbol,
    load_unit_cache,
    quad_field,
    regulator,
    regulator_lower_bound,
    save_unit_cache,
    splitting_type_q,
    squarefree_part,
)

from oracles import (
    brute_fundamental_unit,
    brute_is_squarefree,
    brute_splitting_q,
    brute_squarefree_part,
)

# regulators frozen from the independent continued-fraction computation
FROZEN_REGULATORS = {
    2: 0.881373587019543,
    3: 1.3169578969248166,
    5: 0.4812118250596035,
    10: 1.8184464592320668,
    13: 1.1947632172871094,
    15: 2.0634370688955608,
    17: 2.0947125472611012,
    77: 2.1846437916051066,
}


def test_basic_predicates_against_sympy():
    for n in range(-2, 500):
        assert is_prime(n) == sympy.isprime(n), n
    for n in range(1, 500):
        assert is_squarefree(n) == brute_is_squarefree(n), n
        assert squarefree_part(n) == brute_squarefree_part(n), n
        assert squarefree_part(-n) == brute_squarefree_part(-n), -n


@given(st.integers(min_value=2, max_value=10 ** 6))
def test_squarefree_part_decomposition(n):
    s = squarefree_part(n)
    q = n // s
    assert s * q == n
    r = math.isqrt(q)
    assert r * r == q  # cofactor is a perfect square
    assert brute_is_squarefree(s)


def test_fundamental_discriminant():
    assert fundamental_discriminant(5) == 5
    assert fundamental_discriminant(2) == 8
    assert fundamental_discriminant(3) == 12
    assert fundamental_discriminant(-1) == -4
    assert fundamental_discriminant(-3) == -3


def test_splitting_against_brute_force():
    primes = [p for p in range(2, 80) if is_prime(p)]
    for d in range(2, 60):
        if not is_squarefree(d):
            continue
        f = quad_field(d)
        for p in primes:
            assert splitting_type_q(f, p) == brute_splitting_q(d, p), (d, p)


@given(st.integers(min_value=-10 ** 6, max_value=10 ** 6),
       st.integers(min_value=0, max_value=10 ** 4))
def test_kronecker_total_definition(a, n):
    # kronecker(a, n) is defined for all n >= 0 and lies in {-1, 0, 1}
    assert kronecker(a, n) in (-1, 0, 1)


@given(st.integers(min_value=-500, max_value=500),
       st.integers(min_value=-500, max_value=500),
       st.integers(min_value=1, max_value=300))
def test_kronecker_multiplicative(a, b, n):
    assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)


def test_kronecker_symbol_matches_legendre():
    for d in (2, 3, 5, 13, 77):
        disc = fundamental_discriminant(d)
        for p in (3, 5, 7, 11, 13, 101):
            expect = pow(disc, (p - 1) // 2, p) if disc % p else 0
            expect = -1 if expect == p - 1 else expect
            if p != 2:
                assert kronecker_symbol(d, p) == expect, (d, p)
    with pytest.raises(InputError):
        kronecker_symbol(5, 6)


UNIT_SAMPLE = [2, 3, 5, 6, 7, 10, 13, 15, 17, 21, 29, 53, 61, 77, 85, 94, 109]


def test_fundamental_unit_minimality_against_brute_force():
    for d in UNIT_SAMPLE:
        u = fundamental_unit(d)
        assert (u.x, u.y, u.norm) == brute_fundamental_unit(d), d
        disc = fundamental_discriminant(d)
        assert u.x * u.x - disc * u.y * u.y == 4 * u.norm


def test_frozen_regulators():
    for d, reg in FROZEN_REGULATORS.items():
        assert regulator(d) == pytest.approx(reg, abs=1e-12), d


def test_regulator_lower_bound_is_a_lower_bound():
    for d in UNIT_SAMPLE:
        if d >= 5:
            assert regulator_lower_bound(d) <= regulator(d) + 1e-12, d
    with pytest.raises(InputError):
        regulator_lower_bound(3)


def test_unit_cutoff_sentinel():
    assert fundamental_unit(94, cutoff=1.0) is EXCEEDS_CUTOFF
    u = fundamental_unit(94, cutoff=20.0)
    assert u is not EXCEEDS_CUTOFF and u.y == 221064


def test_fields_with_regulator_below():
    assert [f.d for f in fields_with_regulator_below(0.5)] == [5]
    assert [f.d for f in fields_with_regulator_below(1.0)] == [2, 5]
    assert [f.d for f in fields_with_regulator_below(2.25)] == [
        2, 3, 5, 10, 13, 15, 17, 21, 29, 53, 77, 85]
    assert [f.d for f in fields_with_regulator_below(2.7)] == [
        2, 3, 5, 6, 10, 13, 15, 17, 21, 26, 29, 35, 37, 53, 77, 85, 165, 173]


def test_fields_with_regulator_below_guards():
    with pytest.raises(InputError):
        fields_with_regulator_below(0.0)
    with pytest.raises(InputError):
        fields_with_regulator_below(11.0)


def test_quad_field_validation():
    with pytest.raises(InputError):
        quad_field(12)  # not squarefree
    with pytest.raises(InputError):
        quad_field(1)
    with pytest.raises(InputError):
        quad_field(-5)


def test_unit_cache_roundtrip(tmp_path):
    path = tmp_path / "units.tsv"
    regulator(13)
    regulator(77)
    n = save_unit_cache(str(path))
    assert n >= 2
    clear_caches()
    assert load_unit_cache(str(path)) == n
    assert regulator(77) == pytest.approx(FROZEN_REGULATORS[77], abs=1e-12)


def test_unit_cache_corrupt_is_ignored(tmp_path, capsys):
    path = tmp_path / "units.tsv"
    path.write_text("garbage header\n2\t6\t2\t1\n")
    assert load_unit_cache(str(path)) == 0
    assert "warning" in capsys.readouterr().err

    # header fine, row inconsistent with the unit equation
    path.write_text("sysarith-units 1\n2\t7\t2\t1\n")
    assert load_unit_cache(str(path)) == 0
    assert "warning" in capsys.readouterr().err

    # fully valid file loads
    path.write_text("sysarith-units 1\n2\t6\t2\t1\n")
    assert load_unit_cache(str(path)) == 1
