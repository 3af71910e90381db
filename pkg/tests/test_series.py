import math
import random

import pytest

from spmul.modular import PrimeField, find_order_element
from spmul.series import (
    SliceStack,
    TruncatedSeries,
    initial_segment,
    inverse_projective_transform,
    naive_series_mul,
    projective_transform,
    series_mul,
)
from spmul.sparse import SparsePoly, naive_mul

F97 = PrimeField(97)
BENCH = PrimeField(3 * 2**30 + 1)


def random_series(rng, field, n, d):
    size = initial_segment(n, d).size
    return TruncatedSeries(field, n, d, [rng.randrange(field.p) for _ in range(size)])


def test_initial_segment_sizes():
    assert initial_segment(2, 12).size == 78
    assert initial_segment(4, 12).size == 1365
    assert initial_segment(6, 7).size == 924
    seg = initial_segment(2, 2)
    assert set(seg.exponents) == {(0, 0), (1, 0), (0, 1)}
    assert seg.size == 3
    for n in range(1, 7):
        for d in range(1, 12):
            assert initial_segment(n, d).size == math.comb(n + d - 1, n)


def test_initial_segment_graded_lex_order():
    seg = initial_segment(3, 4)
    degs = [sum(e) for e in seg.exponents]
    assert degs == sorted(degs)
    for a, b in zip(seg.exponents, seg.exponents[1:]):
        assert (sum(a), a) < (sum(b), b)
    assert all(sum(e) < 4 for e in seg.exponents)
    assert (1, 1, 1) in seg and (2, 2, 0) not in seg


def test_segment_size_identity():
    # s * (n + d - 1) = n * |I_d| with s the slice-support size.
    for n in range(1, 9):
        for d in range(1, 33):
            size = math.comb(n + d - 1, n)
            s = math.comb(n + d - 2, n - 1)
            assert s * (n + d - 1) == n * size


def test_projective_transform_exponent_mapping():
    series = TruncatedSeries.from_terms(F97, 2, 3, [((1, 0), 5)])
    stack = projective_transform(series)
    # z1 -> z1 * z2, so (1, 0) lands in slice 1 at slice-exponent (1,).
    xseg = stack.slice_support()
    assert stack.slices[1][xseg.index[(1,)]] == 5
    assert not any(stack.slices[0])
    assert not any(stack.slices[2])


def test_projective_transform_unital_and_roundtrip():
    one = TruncatedSeries.from_terms(F97, 3, 4, [((0, 0, 0), 1)])
    stack = projective_transform(one)
    assert stack.slices[0][0] == 1
    assert inverse_projective_transform(stack) == one
    rng = random.Random(41)
    for _ in range(100):
        n = rng.randint(1, 4)
        d = rng.randint(1, 8)
        series = random_series(rng, F97, n, d)
        assert inverse_projective_transform(projective_transform(series)) == series


def test_projective_transform_is_multiplicative():
    # T(P*Q) = T(P)*T(Q) for truncation-safe pairs, both sides expanded
    # naively as plain sparse polynomials.
    rng = random.Random(42)
    for _ in range(10):
        n = rng.randint(2, 3)
        d = 7
        half = d // 2
        seg = initial_segment(n, half + 1)
        P = TruncatedSeries.from_terms(
            F97, n, d, [(e, rng.randrange(F97.p)) for e in seg.exponents]
        )
        Q = TruncatedSeries.from_terms(
            F97, n, d, [(e, rng.randrange(F97.p)) for e in seg.exponents]
        )

        def transformed_sparse(stack):
            xseg = stack.slice_support()
            terms = []
            for j, sl in enumerate(stack.slices):
                for pos, c in enumerate(sl):
                    if c:
                        terms.append((xseg.exponents[pos] + (j,), c))
            return SparsePoly(stack.nvars, terms, F97)

        lhs = transformed_sparse(projective_transform(naive_series_mul(P, Q)))
        rhs = naive_mul(
            transformed_sparse(projective_transform(P)),
            transformed_sparse(projective_transform(Q)),
        )
        assert lhs == rhs


def test_inverse_transform_rejects_out_of_image():
    xseg = initial_segment(1, 3)
    # Slice 0 holding exponent (1,) has partial sum 1 > 0.
    bad = [[0, 5], [0, 0], [0, 0, 0]]
    with pytest.raises(ValueError, match="image"):
        inverse_projective_transform(SliceStack(F97, 2, 3, bad))


def test_slice_stack_validation():
    with pytest.raises(ValueError):
        SliceStack(F97, 2, 3, [[1, 2, 3, 4], [0], [0]])  # wider than the simplex
    with pytest.raises(ValueError):
        SliceStack(F97, 2, 3, [[1], [0]])  # wrong slice count


def test_slice_support_containment():
    rng = random.Random(43)
    series = random_series(rng, F97, 3, 6)
    stack = projective_transform(series)
    xseg = stack.slice_support()
    for j, sl in enumerate(stack.slices):
        for pos, c in enumerate(sl):
            if c:
                assert sum(xseg.exponents[pos]) <= j


def test_series_mul_spec_example():
    A = TruncatedSeries.from_terms(F97, 2, 3, [((0, 0), 1), ((1, 0), 1), ((0, 1), 1)])
    B = TruncatedSeries.from_terms(F97, 2, 3, [((0, 0), 1), ((1, 0), 1)])
    w = find_order_element(F97, 3)
    got = series_mul(A, B, w)
    want = TruncatedSeries.from_terms(
        F97, 2, 3,
        [((0, 0), 1), ((1, 0), 2), ((0, 1), 1), ((2, 0), 1), ((1, 1), 1)],
    )
    assert got == want == naive_series_mul(A, B)


def test_series_mul_identity_and_degree_one():
    rng = random.Random(44)
    P = random_series(rng, F97, 3, 4)
    one = TruncatedSeries.from_terms(F97, 3, 4, [((0, 0, 0), 1)])
    w = find_order_element(F97, 4**2)
    assert series_mul(P, one, w) == P
    a = TruncatedSeries(F97, 2, 1, [5])
    b = TruncatedSeries(F97, 2, 1, [7])
    assert series_mul(a, b, find_order_element(F97, 1)).coeffs == (35 % 97,)


def test_series_mul_univariate():
    rng = random.Random(45)
    a = random_series(rng, BENCH, 1, 30)
    b = random_series(rng, BENCH, 1, 30)
    w = find_order_element(BENCH, 1)
    assert series_mul(a, b, w) == naive_series_mul(a, b)


def test_series_mul_wide_modulus():
    # Exercises the pure-Python evaluation path (p >= 2**32).
    field = PrimeField((1 << 61) - 1)
    rng = random.Random(52)
    for n, d in ((2, 9), (3, 5)):
        a = random_series(rng, field, n, d)
        b = random_series(rng, field, n, d)
        w = find_order_element(field, d ** (n - 1))
        assert series_mul(a, b, w) == naive_series_mul(a, b), (n, d)


def test_series_mul_oracle_shapes():
    rng = random.Random(46)
    w_for = {}
    for n, d in ((2, 12), (3, 8), (4, 6), (6, 4)):
        w = find_order_element(BENCH, d ** (n - 1))
        for _ in range(3):
            a = random_series(rng, BENCH, n, d)
            b = random_series(rng, BENCH, n, d)
            assert series_mul(a, b, w) == naive_series_mul(a, b), (n, d)


def test_series_mul_bilinear():
    rng = random.Random(47)
    n, d = 3, 5
    w = find_order_element(BENCH, d ** (n - 1))
    p = BENCH.p
    a = random_series(rng, BENCH, n, d)
    a2 = random_series(rng, BENCH, n, d)
    b = random_series(rng, BENCH, n, d)
    scalar = rng.randrange(1, p)
    combo = TruncatedSeries(
        BENCH, n, d, [(scalar * x + y) % p for x, y in zip(a.coeffs, a2.coeffs)]
    )
    lhs = series_mul(combo, b, w)
    r1 = series_mul(a, b, w)
    r2 = series_mul(a2, b, w)
    rhs = TruncatedSeries(
        BENCH, n, d, [(scalar * x + y) % p for x, y in zip(r1.coeffs, r2.coeffs)]
    )
    assert lhs == rhs


def test_series_mul_order_too_small():
    a = TruncatedSeries.from_terms(F97, 3, 5, [((0, 0, 0), 1)])
    # order(w) must reach 5**2 = 25 but 96 has elements of order 24 only
    # below that; pick an element of order 24.
    w = F97.element(pow(find_order_element(F97, 1).residue, 4, 97))
    from spmul.modular import element_order

    assert element_order(w) == 24 < 25
    with pytest.raises(ValueError, match="order"):
        series_mul(a, a, w)


def test_series_mul_shape_mismatch():
    a = TruncatedSeries.from_terms(F97, 2, 3, [((0, 0), 1)])
    b = TruncatedSeries.from_terms(F97, 2, 4, [((0, 0), 1)])
    w = find_order_element(F97, 16)
    with pytest.raises(ValueError):
        series_mul(a, b, w)


def test_naive_series_mul_commutative_and_zero():
    rng = random.Random(48)
    a = random_series(rng, F97, 2, 5)
    b = random_series(rng, F97, 2, 5)
    assert naive_series_mul(a, b) == naive_series_mul(b, a)
    zero = TruncatedSeries.zero(F97, 2, 5)
    assert naive_series_mul(a, zero).is_zero()


def test_from_terms_rejects_overflow():
    with pytest.raises(ValueError):
        TruncatedSeries.from_terms(F97, 2, 3, [((2, 1), 1)])
