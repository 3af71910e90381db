import random

import pytest

from spmul.modular import (
    PrimeField,
    element_order,
    factorize,
    find_order_element,
    is_prime,
)

BENCH_PRIME = 3 * 2**30 + 1


def trial_division_is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def brute_force_order(residue, p):
    acc = 1
    for k in range(1, p):
        acc = acc * residue % p
        if acc == 1:
            return k
    raise AssertionError("not a unit")


def test_is_prime_matches_trial_division():
    for n in range(2000):
        assert is_prime(n) == trial_division_is_prime(n), n
    rng = random.Random(1)
    for _ in range(60):
        n = rng.randrange(1 << 30, 1 << 34)
        assert is_prime(n) == trial_division_is_prime(n), n


def test_factorize_reconstructs():
    rng = random.Random(2)
    for _ in range(60):
        n = rng.randrange(2, 1 << 48)
        fac = factorize(n)
        prod = 1
        for q, m in fac:
            assert is_prime(q)
            prod *= q**m
        assert prod == n
        assert fac == sorted(fac)


def test_prime_field_validation():
    with pytest.raises(ValueError):
        PrimeField(2)
    with pytest.raises(ValueError):
        PrimeField(15)
    with pytest.raises(ValueError):
        PrimeField(1 << 62)
    field = PrimeField(13)
    prod = 1
    for q, m in field.factorization:
        prod *= q**m
    assert prod == 12


def test_field_ops_small_examples():
    f7 = PrimeField(7)
    assert (f7.element(3) * f7.element(5)).residue == 1
    assert f7.element(3).inv().residue == 5
    f13 = PrimeField(13)
    assert (f13.element(2) ** 12).residue == 1
    assert (f7.element(2) + f7.element(6)).residue == 1
    assert (f7.element(2) - f7.element(6)).residue == 3
    assert (f7.element(3) / f7.element(5)).residue == 3 * 3 % 7  # 5^-1 = 3


def test_field_ops_errors():
    f7 = PrimeField(7)
    f11 = PrimeField(11)
    with pytest.raises(ZeroDivisionError):
        f7.element(0).inv()
    with pytest.raises(ZeroDivisionError):
        f7.element(3) / f7.element(0)
    with pytest.raises(ValueError):
        f7.element(3) + f11.element(3)
    with pytest.raises(ValueError):
        f7.element(3) * f11.element(3)


def test_inverse_property_exhaustive_f101():
    f = PrimeField(101)
    for a in range(1, 101):
        assert (f.element(a) * f.element(a).inv()).residue == 1


def test_pow_binary_and_negative():
    f = PrimeField(101)
    a = f.element(7)
    assert (a**0).residue == 1
    assert (a**100).residue == 1
    assert (a**-1) == a.inv()
    rng = random.Random(3)
    for _ in range(50):
        e = rng.randrange(0, 10**9)
        assert (a**e).residue == pow(7, e, 101)


def test_find_order_element_f13():
    f13 = PrimeField(13)
    w = find_order_element(f13, 12)
    # Exhaustive oracle: 2 is the smallest residue of full order 12.
    orders = {a: brute_force_order(a, 13) for a in range(2, 13)}
    smallest_primitive = min(a for a, o in orders.items() if o == 12)
    assert w.residue == smallest_primitive == 2
    assert brute_force_order(w.residue, 13) == 12


def test_find_order_element_too_small():
    f7 = PrimeField(7)
    with pytest.raises(ValueError, match="field too small"):
        find_order_element(f7, 8)


def test_find_order_element_bench_prime():
    field = PrimeField(BENCH_PRIME)
    w = find_order_element(field, 1 << 20)
    p = field.p
    assert pow(w.residue, (p - 1) // 2, p) != 1
    assert pow(w.residue, (p - 1) // 3, p) != 1
    assert pow(w.residue, p - 1, p) == 1


def test_element_order_examples():
    f7 = PrimeField(7)
    assert element_order(f7.element(3)) == 6 == brute_force_order(3, 7)
    assert element_order(f7.element(2)) == 3 == brute_force_order(2, 7)
    assert element_order(f7.element(1)) == 1
    with pytest.raises(ValueError):
        element_order(f7.element(0))


def test_element_order_matches_brute_force():
    f = PrimeField(241)
    for a in range(1, 241):
        assert element_order(f.element(a)) == brute_force_order(a, 241)


def test_order_divides_group_order():
    field = PrimeField(1009)
    rng = random.Random(4)
    for _ in range(100):
        a = field.element(rng.randrange(1, 1009))
        assert 1008 % element_order(a) == 0


def test_powers_of_high_order_element_are_distinct():
    # Distinctness of w**k for 0 <= k < order(w), the invertibility argument.
    field = PrimeField(241)
    w = find_order_element(field, 240)
    order = element_order(w)
    powers = {pow(w.residue, k, 241) for k in range(order)}
    assert len(powers) == order


def test_primitive_root_composite_candidate():
    # The smallest primitive root of 41 is 6; candidate search must not
    # skip composites.
    f41 = PrimeField(41)
    assert f41.primitive_root() == 6
    assert brute_force_order(6, 41) == 40
