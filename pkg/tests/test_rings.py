import math
import random
from fractions import Fraction

import pytest

from spmul.modular import is_prime
from spmul.rings import (
    FloatPoly,
    ReducedPrimeSequence,
    coeff_bound,
    crt_combine,
    float_scale,
    float_sparse_mul,
    integer_sparse_mul,
    next_prime_above,
    rational_sparse_mul,
    reduced_prime_sequence,
)
from spmul.sparse import QQ, ZZ, SparsePoly, naive_mul, sumset_support


def random_int_poly(rng, nvars, terms, max_exp, bits):
    terms = min(terms, (max_exp + 1) ** nvars)
    exps = set()
    while len(exps) < terms:
        exps.add(tuple(rng.randint(0, max_exp) for _ in range(nvars)))
    pairs = []
    for e in exps:
        c = rng.getrandbits(bits) + 1
        pairs.append((e, -c if rng.random() < 0.5 else c))
    return SparsePoly(nvars, pairs, ZZ)


def random_rat_poly(rng, nvars, terms, max_exp, max_den=1 << 12):
    terms = min(terms, (max_exp + 1) ** nvars)
    exps = set()
    while len(exps) < terms:
        exps.add(tuple(rng.randint(0, max_exp) for _ in range(nvars)))
    return SparsePoly(
        nvars,
        [(e, Fraction(rng.randint(-999, 999), rng.randint(1, max_den))) for e in exps],
        QQ,
    )


def test_coeff_bound_example():
    P = SparsePoly(1, [((0,), 5), ((1,), 2)], ZZ)
    Q = SparsePoly(1, [((0,), 3), ((2,), 1)], ZZ)
    cb = coeff_bound(P, Q)
    assert (cb.l_p, cb.l_q, cb.l) == (3, 2, 6)
    R = naive_mul(P, Q)
    assert max(abs(c) for _, c in R.terms) < 1 << cb.l


def test_coeff_bound_constants_and_units():
    a = SparsePoly(1, [((0,), 5)], ZZ)
    b = SparsePoly(1, [((0,), 3)], ZZ)
    assert coeff_bound(a, b).l == 3 + 2
    one = SparsePoly(1, [((0,), 1)], ZZ)
    assert coeff_bound(one, one).l == 2
    with pytest.raises(ValueError):
        coeff_bound(one, SparsePoly.zero(1, ZZ))


def test_coeff_bound_soundness_random():
    rng = random.Random(31)
    for _ in range(40):
        P = random_int_poly(rng, 2, rng.randint(1, 12), 6, rng.randint(1, 40))
        Q = random_int_poly(rng, 2, rng.randint(1, 12), 6, rng.randint(1, 40))
        l = coeff_bound(P, Q).l
        R = naive_mul(P, Q)
        if not R.is_zero():
            assert max(abs(c).bit_length() for _, c in R.terms) <= l


def trial_division_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def test_next_prime_above_examples():
    assert next_prime_above(100) == 101
    assert next_prime_above(2) == 3
    assert next_prime_above(1) == 2
    got = next_prime_above(1 << 31)
    assert got == 2147483659
    assert trial_division_prime(got)
    for between in range((1 << 31) + 1, got):
        assert not is_prime(between)


def test_reduced_prime_sequence_examples():
    assert reduced_prime_sequence(10, 100).primes == (11, 13)
    assert reduced_prime_sequence(10, 5).primes == (11,)
    assert reduced_prime_sequence(1, 1).primes == (2,)


def test_reduced_prime_sequence_invariants_random():
    rng = random.Random(32)
    for _ in range(50):
        d = rng.randint(1, 10**6)
        N = rng.randint(1, 1 << rng.randint(1, 120))
        seq = reduced_prime_sequence(d, N)
        assert seq.primes[0] > d
        assert math.prod(seq.primes) > N
        assert math.prod(seq.primes) // seq.primes[-1] <= N
        assert list(seq.primes) == sorted(set(seq.primes))


def test_reduced_prime_sequence_validation():
    with pytest.raises(ValueError):
        ReducedPrimeSequence(primes=(7, 11), order=10, capacity=5)
    with pytest.raises(ValueError):
        ReducedPrimeSequence(primes=(11, 13), order=10, capacity=200)
    with pytest.raises(ValueError):
        ReducedPrimeSequence(primes=(11, 13), order=10, capacity=1000)


def test_crt_combine_examples():
    assert crt_combine([2, 3], [5, 7]) == 17
    assert crt_combine([4, 6], [5, 7]) == -1
    assert crt_combine([3], [11]) == 3
    assert crt_combine([8], [11]) == -3
    with pytest.raises(ValueError):
        crt_combine([1, 2, 3], [5, 7])
    with pytest.raises(ValueError):
        crt_combine([7, 2], [5, 7])


def test_crt_combine_brute_force_symmetric_range():
    seq = reduced_prime_sequence(10, 100)  # (11, 13), M = 143
    for x in range(-71, 72):
        assert crt_combine([x % 11, x % 13], seq) == x


def test_integer_mul_trivial_and_forced_crt():
    A = SparsePoly(1, [((0,), 1), ((1,), 1)], ZZ)
    B = SparsePoly(1, [((0,), 1), ((1,), -1)], ZZ)
    assert integer_sparse_mul(A, B).terms == (((0,), 1), ((2,), -1))
    big = SparsePoly(1, [((0,), 1), ((1,), 1 << 40)], ZZ)
    got = integer_sparse_mul(big, big)
    assert got.terms == (((0,), 1), ((1,), 1 << 41), ((2,), 1 << 80))
    # 128-bit coefficients force the multi-prime path in auto mode.
    rng = random.Random(33)
    P = random_int_poly(rng, 2, 8, 5, 128)
    Q = random_int_poly(rng, 2, 8, 5, 128)
    assert integer_sparse_mul(P, Q) == naive_mul(P, Q)


def test_integer_mul_strategies_agree():
    rng = random.Random(34)
    for _ in range(12):
        n = rng.randint(1, 3)
        P = random_int_poly(rng, n, rng.randint(1, 12), 6, rng.randint(4, 24))
        Q = random_int_poly(rng, n, rng.randint(1, 12), 6, rng.randint(4, 24))
        want = naive_mul(P, Q)
        assert integer_sparse_mul(P, Q, strategy="bigprime") == want
        assert integer_sparse_mul(P, Q, strategy="crt") == want
        assert integer_sparse_mul(P, Q) == want


def test_integer_mul_explicit_support_and_zero():
    P = SparsePoly(1, [((1,), 3)], ZZ)
    Q = SparsePoly(1, [((2,), -4)], ZZ)
    X = sumset_support(P, Q)
    assert integer_sparse_mul(P, Q, X).terms == (((3,), -12),)
    assert integer_sparse_mul(P, SparsePoly.zero(1, ZZ)).is_zero()
    with pytest.raises(ValueError):
        integer_sparse_mul(P, SparsePoly(1, [((0,), Fraction(1, 2))], QQ))


def test_float_scale_example():
    fp = FloatPoly(1, [((0,), 1.5)], precision=4, eta=0)
    phat, scale = float_scale(fp)
    assert phat.terms == (((0,), 12),)
    assert scale == -3
    assert 12 * Fraction(2) ** scale == Fraction(3, 2)


def test_float_scale_zero_and_exact():
    zero = FloatPoly(2, [], precision=24)
    phat, scale = float_scale(zero)
    assert phat.is_zero() and scale == 0
    # Coefficients within eta binary orders of the top reconstruct exactly.
    fp = FloatPoly(1, [((0,), 1.0), ((1,), 1.5)], precision=24, eta=1)
    phat, scale = float_scale(fp)
    unit = Fraction(2) ** scale
    for (e, c), (e2, c2) in zip(fp.terms, phat.terms):
        assert e == e2 and Fraction(c) == c2 * unit


def test_float_scale_error_bound_random():
    rng = random.Random(35)
    for _ in range(60):
        prec = rng.choice((12, 24))
        eta = rng.choice((0, 4))
        terms = [
            ((k,), math.ldexp(rng.randint(-(1 << 30), 1 << 30), rng.randint(-20, 10)))
            for k in range(rng.randint(1, 8))
        ]
        fp = FloatPoly(1, terms, precision=prec, eta=eta)
        if fp.is_zero():
            continue
        phat, scale = float_scale(fp)
        unit = Fraction(2) ** scale
        hat = dict(phat.terms)
        for e, c in fp.terms:
            err = abs(Fraction(c) - hat.get(e, 0) * unit)
            assert err <= unit / 2


def test_float_poly_validation():
    with pytest.raises(ValueError):
        FloatPoly(1, [((0,), float("inf"))])
    with pytest.raises(ValueError):
        FloatPoly(1, [((0,), float("nan"))])
    with pytest.raises(ValueError):
        FloatPoly(1, [((0,), 1.0)], eta=-1)


def test_float_mul_examples():
    one = FloatPoly(1, [((0,), 1.0)], precision=24)
    assert float_sparse_mul(one, one).terms == (((0,), 1.0),)
    a = FloatPoly(2, [((1, 0), 1.5)], precision=24)
    b = FloatPoly(2, [((0, 1), 2.0)], precision=24)
    assert float_sparse_mul(a, b).terms == (((1, 1), 3.0),)


def test_float_mul_matches_exact_oracle():
    from spmul.bench import float_mul_check, random_dyadic_float_poly

    rng = random.Random(36)
    for _ in range(25):
        n = rng.randint(1, 2)
        a = random_dyadic_float_poly(rng, n, rng.randint(1, 10), 5, mantissa_bits=20)
        b = random_dyadic_float_poly(rng, n, rng.randint(1, 10), 5, mantissa_bits=20)
        assert float_mul_check(a, b)


def test_rational_mul_examples():
    a = SparsePoly(1, [((0,), Fraction(1, 2)), ((1,), 1)], QQ)
    b = SparsePoly(1, [((0,), Fraction(1, 2)), ((1,), -1)], QQ)
    want = (((0,), Fraction(1, 4)), ((2,), Fraction(-1)))
    assert rational_sparse_mul(a, b).terms == want
    assert rational_sparse_mul(a, b, heuristic=True).terms == want


def test_rational_mul_integer_inputs_match_integer_path():
    rng = random.Random(37)
    P = random_int_poly(rng, 2, 8, 5, 30)
    Q = random_int_poly(rng, 2, 8, 5, 30)
    Pq = SparsePoly(2, [(e, Fraction(c)) for e, c in P.terms], QQ)
    Qq = SparsePoly(2, [(e, Fraction(c)) for e, c in Q.terms], QQ)
    got = rational_sparse_mul(Pq, Qq)
    want = integer_sparse_mul(P, Q)
    assert [(e, c) for e, c in got.terms] == [(e, Fraction(c)) for e, c in want.terms]


def test_rational_mul_random_vs_naive():
    rng = random.Random(38)
    for _ in range(10):
        n = rng.randint(1, 2)
        a = random_rat_poly(rng, n, rng.randint(1, 10), 6)
        b = random_rat_poly(rng, n, rng.randint(1, 10), 6)
        want = naive_mul(a, b)
        assert rational_sparse_mul(a, b) == want
        assert rational_sparse_mul(a, b, heuristic=True) == want


def test_rational_heuristic_matches_clearing_path():
    rng = random.Random(39)
    for _ in range(6):
        a = random_rat_poly(rng, 2, 8, 4, max_den=1 << 16)
        b = random_rat_poly(rng, 2, 8, 4, max_den=1 << 16)
        assert rational_sparse_mul(a, b, heuristic=True) == rational_sparse_mul(a, b)


def test_rational_zero():
    zero = SparsePoly.zero(1, QQ)
    a = SparsePoly(1, [((0,), Fraction(1, 3))], QQ)
    assert rational_sparse_mul(a, zero).is_zero()


def test_rational_heuristic_accepts_cancelled_coefficients(monkeypatch):
    # The z coefficient of the product cancels to zero inside the sumset;
    # reconstruction must treat the zero residue as 0/1, not as a failure
    # that silently forces the denominator-clearing fallback.
    import spmul.rings as rings

    def fail_fallback(P, Q, X):
        raise AssertionError("heuristic fell back")

    monkeypatch.setattr(rings, "_rational_by_clearing", fail_fallback)
    a = SparsePoly(1, [((0,), Fraction(1, 2)), ((1,), 1)], QQ)
    b = SparsePoly(1, [((0,), Fraction(1, 2)), ((1,), -1)], QQ)
    got = rational_sparse_mul(a, b, heuristic=True)
    assert got.terms == (((0,), Fraction(1, 4)), ((2,), Fraction(-1)))
