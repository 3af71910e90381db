"""Integer, floating-point and rational coefficients on top of the F_p core.

Arbitrary-precision integers are plain Python ints (exact arithmetic,
bit_length available).  Integer products run modulo one big prime when a
machine-word prime can hold the coefficient bound, and otherwise modulo a
reduced sequence of word-size primes recombined coefficientwise by
Chinese remaindering with symmetric-range lifting.  Floating coefficients
are scaled to integers with a user-chosen discrepancy (extra headroom
bits), multiplied exactly, and rounded back.  Rational products either
clear denominators or run a heuristic multi-prime reconstruction.

Per-prime modular products are independent of each other (safe to run
concurrently); the recombination is a deterministic reduction over their
results.  Every function here is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .modular import MAX_MODULUS, PrimeField, find_order_element, is_prime
from .sparse import QQ, ZZ, SparsePoly, SupportSet, _mul_vector_mod, _radices_over, sumset_support


@dataclass(frozen=True)
class CoeffBound:
    """Bit-length bound for the coefficients of an integer product.

    l_p and l_q are the maximal coefficient bit lengths of the factors;
    every product coefficient has absolute value below 2**l.
    """

    l_p: int
    l_q: int
    l: int


def coeff_bound(P: SparsePoly, Q: SparsePoly) -> CoeffBound:
    """Combined bound l = l_P + l_Q + ceil(log2(min(s_P, s_Q)))."""
    if P.is_zero() or Q.is_zero():
        raise ValueError("coefficient bound is undefined for a zero factor")
    l_p = max(abs(c).bit_length() for _, c in P.terms)
    l_q = max(abs(c).bit_length() for _, c in Q.terms)
    smin = min(len(P.terms), len(Q.terms))
    l = l_p + l_q + (smin - 1).bit_length()
    return CoeffBound(l_p=l_p, l_q=l_q, l=l)


def next_prime_above(n: int) -> int:
    """Smallest prime strictly greater than n, deterministically certified."""
    if n < 1:
        raise ValueError("expected n >= 1")
    c = n + 1
    if c <= 2:
        return 2
    if c % 2 == 0:
        c += 1
    while True:
        if is_prime(c):
            return c
        c += 2


@dataclass(frozen=True)
class ReducedPrimeSequence:
    """Consecutive primes above `order` whose product just exceeds `capacity`.

    Invariants: primes ascend, the first exceeds the order, the full
    product exceeds the capacity, and dropping the last prime does not.
    """

    primes: tuple
    order: int
    capacity: int

    def __post_init__(self):
        if not self.primes:
            raise ValueError("at least one prime is required")
        if list(self.primes) != sorted(set(self.primes)):
            raise ValueError("primes must be strictly increasing")
        if self.primes[0] <= self.order:
            raise ValueError("first prime must exceed the order")
        prod = math.prod(self.primes)
        if prod <= self.capacity:
            raise ValueError("prime product must exceed the capacity")
        if prod // self.primes[-1] > self.capacity:
            raise ValueError("the sequence is not minimal for the capacity")

    @property
    def modulus(self) -> int:
        return math.prod(self.primes)


def reduced_prime_sequence(d: int, N: int) -> ReducedPrimeSequence:
    """Consecutive primes starting above d until their product exceeds N."""
    if d < 1 or N < 1:
        raise ValueError("expected d >= 1 and N >= 1")
    primes = []
    prod = 1
    c = d
    while prod <= N:
        c = next_prime_above(c)
        primes.append(c)
        prod *= c
    return ReducedPrimeSequence(primes=tuple(primes), order=d, capacity=N)


def crt_combine(residues, primes) -> int:
    """The integer in the symmetric range (-M/2, M/2] matching all residues.

    primes may be a ReducedPrimeSequence or any sequence of pairwise
    coprime moduli; M is their product.
    """
    plist = list(primes.primes) if isinstance(primes, ReducedPrimeSequence) else list(primes)
    residues = list(residues)
    if len(residues) != len(plist):
        raise ValueError("length mismatch between residues and primes")
    for r, p in zip(residues, plist):
        if not 0 <= r < p:
            raise ValueError(f"residue {r} is not canonical modulo {p}")
    M = math.prod(plist)
    x = 0
    for r, p in zip(residues, plist):
        m = M // p
        x += r * m * pow(m, -1, p)
    x %= M
    if 2 * x > M:
        x -= M
    return x


def _to_field(P: SparsePoly, field: PrimeField) -> SparsePoly:
    return SparsePoly(P.nvars, [(e, c % field.p) for e, c in P.terms], field)


def _symmetric_lift(c: int, p: int) -> int:
    return c if 2 * c <= p else c - p


def integer_sparse_mul(
    P: SparsePoly,
    Q: SparsePoly,
    X: SupportSet | None = None,
    strategy: str = "auto",
) -> SparsePoly:
    """Exact product of integer polynomials through prime-field products.

    With strategy "auto", a single prime above max(2**(l+1), d) is used
    whenever one fits in a machine word (l the coefficient bound, d the
    exponent box volume); otherwise the product is assembled by Chinese
    remaindering over a reduced prime sequence with order d and capacity
    2**(l+1).  "bigprime" and "crt" force the corresponding path.
    """
    if P.nvars != Q.nvars:
        raise ValueError("variable count mismatch")
    if P.ring is not ZZ or Q.ring is not ZZ:
        raise ValueError("integer_sparse_mul expects ZZ coefficients")
    if strategy not in ("auto", "bigprime", "crt"):
        raise ValueError(f"unknown strategy {strategy!r}")
    n = P.nvars
    if P.is_zero() or Q.is_zero():
        return SparsePoly.zero(n, ZZ)
    if X is None:
        X = sumset_support(P, Q)
    km = _radices_over(
        (X.exponents, (e for e, _ in P.terms), (e for e, _ in Q.terms)), n
    )
    d = km.total
    bound = coeff_bound(P, Q)
    N = 1 << (bound.l + 1)
    if strategy == "auto":
        strategy = "bigprime" if max(N, d) < MAX_MODULUS // 2 else "crt"
    if strategy == "bigprime":
        target = max(N, d, 3)
        if target >= MAX_MODULUS // 2:
            raise ValueError("coefficient bound too large for a machine-word prime")
        p = next_prime_above(target)
        field = PrimeField(p)
        w = find_order_element(field, d)
        vec = _mul_vector_mod(_to_field(P, field), _to_field(Q, field), X, w)
        lifted = [_symmetric_lift(c, p) for c in vec]
    else:
        if d >= MAX_MODULUS // 2:
            raise ValueError("exponent box too large for machine-word moduli")
        seq = reduced_prime_sequence(max(d, 2), N)
        vectors = []
        for p in seq.primes:
            field = PrimeField(p)
            w = find_order_element(field, d)
            vectors.append(_mul_vector_mod(_to_field(P, field), _to_field(Q, field), X, w))
        lifted = [crt_combine(res, seq) for res in zip(*vectors)]
    return SparsePoly(n, [(e, c) for e, c in zip(X.exponents, lifted) if c], ZZ)


# ---------------------------------------------------------------------------
# floating-point coefficients
# ---------------------------------------------------------------------------


class FloatPoly:
    """Sparse polynomial with finite binary floating coefficients.

    precision is the working mantissa width in bits; eta is the
    discrepancy, the extra headroom kept when scaling coefficients to
    integers so that coefficients smaller than the largest one by up to
    eta binary orders of magnitude survive the scaling exactly.
    """

    __slots__ = ("nvars", "terms", "precision", "eta")

    def __init__(self, nvars: int, terms, precision: int = 53, eta: int = 0):
        nvars = int(nvars)
        if nvars < 1:
            raise ValueError("at least one variable is required")
        if precision < 1:
            raise ValueError("precision must be positive")
        if eta < 0:
            raise ValueError("discrepancy must be a natural number")
        acc: dict = {}
        for exp, coeff in terms:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not have {nvars} parts")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = float(coeff)
            if not math.isfinite(c):
                raise ValueError("coefficients must be finite")
            acc[exp] = acc.get(exp, 0.0) + c
        self.nvars = nvars
        self.terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0.0))
        self.precision = int(precision)
        self.eta = int(eta)

    def is_zero(self) -> bool:
        return not self.terms

    def max_exponent(self) -> int:
        """Largest binary exponent e with every |coefficient| < 2**e."""
        if not self.terms:
            raise ValueError("the zero polynomial has no exponent")
        return max(math.frexp(c)[1] for _, c in self.terms)

    def support(self) -> tuple:
        return tuple(e for e, _ in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FloatPoly)
            and other.nvars == self.nvars
            and other.terms == self.terms
        )

    def __repr__(self) -> str:
        return (
            f"FloatPoly(n={self.nvars}, {len(self.terms)} terms, "
            f"precision={self.precision}, eta={self.eta})"
        )


def float_scale(P: FloatPoly) -> tuple:
    """Scale to an integer polynomial plus a power-of-two exponent.

    Returns (Phat, scale) with every |P_i - Phat_i * 2**scale| at most
    2**(scale - 1); coefficients are rounded to nearest (ties to even)
    rather than truncated, which is what actually achieves that bound.
    """
    if P.is_zero():
        return SparsePoly.zero(P.nvars, ZZ), 0
    e_max = P.max_exponent()
    shift = P.precision + P.eta - e_max
    terms = []
    for exp, c in P.terms:
        v = Fraction(c)
        scaled = v * (1 << shift) if shift >= 0 else v / (1 << -shift)
        terms.append((exp, round(scaled)))
    return SparsePoly(P.nvars, terms, ZZ), -shift


def _round_to_precision(v: Fraction, bits: int) -> float:
    """Correctly rounded float with a mantissa of at most `bits` bits."""
    if v == 0:
        return 0.0
    num, den = abs(v.numerator), v.denominator
    e = num.bit_length() - den.bit_length()
    if (num >> e if e >= 0 else num << -e) < den:
        e -= 1
    # Now 2**e <= |v| < 2**(e+1).
    shift = bits - 1 - e
    scaled = abs(v) * (1 << shift) if shift >= 0 else abs(v) / (1 << -shift)
    m = round(scaled)
    out = math.ldexp(m, -shift)
    return -out if v < 0 else out


def float_sparse_mul(P: FloatPoly, Q: FloatPoly) -> FloatPoly:
    """Product via exact integer multiplication of the scaled coefficients."""
    if P.nvars != Q.nvars:
        raise ValueError("variable count mismatch")
    n = P.nvars
    precision = min(P.precision, Q.precision)
    eta = max(P.eta, Q.eta)
    if P.is_zero() or Q.is_zero():
        return FloatPoly(n, (), precision=precision, eta=eta)
    phat, sp = float_scale(P)
    qhat, sq = float_scale(Q)
    if phat.is_zero() or qhat.is_zero():
        return FloatPoly(n, (), precision=precision, eta=eta)
    z = integer_sparse_mul(phat, qhat)
    scale = sp + sq
    unit = Fraction(1 << scale) if scale >= 0 else Fraction(1, 1 << -scale)
    terms = [(e, _round_to_precision(c * unit, precision)) for e, c in z.terms]
    return FloatPoly(n, terms, precision=precision, eta=eta)


# ---------------------------------------------------------------------------
# rational coefficients
# ---------------------------------------------------------------------------


def _rational_reconstruct(x: int, m: int) -> Fraction | None:
    """num/den with num*den small, den invertible, congruent to x mod m."""
    x %= m
    if x == 0:
        return Fraction(0)
    bound = math.isqrt((m - 1) // 2) if m > 1 else 0
    r0, r1 = m, x
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if r1 == 0 or abs(t1) > bound + 1 or math.gcd(r1, abs(t1)) != 1:
        return None
    if math.gcd(abs(t1), m) != 1:
        return None
    return Fraction(r1, t1) if t1 > 0 else Fraction(-r1, -t1)


def _denominator_lcm(P: SparsePoly) -> int:
    acc = 1
    for _, c in P.terms:
        acc = acc * c.denominator // math.gcd(acc, c.denominator)
    return acc


def _rational_mod(P: SparsePoly, field: PrimeField) -> SparsePoly:
    p = field.p
    terms = []
    for e, c in P.terms:
        terms.append((e, c.numerator % p * pow(c.denominator, -1, p) % p))
    return SparsePoly(P.nvars, terms, field)


def rational_sparse_mul(
    P: SparsePoly,
    Q: SparsePoly,
    X: SupportSet | None = None,
    heuristic: bool = False,
    max_doublings: int = 6,
) -> SparsePoly:
    """Exact product of rational polynomials.

    The default path clears denominators, multiplies over the integers and
    divides back.  The heuristic path runs modulo an increasing sequence
    of primes coprime to every denominator, reattempting rational
    reconstruction after 1, 2, 4, ... primes; two consecutive agreeing
    reconstructions are verified against one extra prime before being
    accepted.  If the round cap is hit the denominator-clearing path is
    used instead.
    """
    if P.nvars != Q.nvars:
        raise ValueError("variable count mismatch")
    if P.ring is not QQ or Q.ring is not QQ:
        raise ValueError("rational_sparse_mul expects QQ coefficients")
    n = P.nvars
    if P.is_zero() or Q.is_zero():
        return SparsePoly.zero(n, QQ)
    if not heuristic:
        return _rational_by_clearing(P, Q, X)
    if X is None:
        X = sumset_support(P, Q)
    km = _radices_over(
        (X.exponents, (e for e, _ in P.terms), (e for e, _ in Q.terms)), n
    )
    d = km.total
    if d >= MAX_MODULUS // 2:
        raise ValueError("exponent box too large for machine-word moduli")
    qprod = _denominator_lcm(P) * _denominator_lcm(Q)

    primes: list[int] = []
    vectors: list[list[int]] = []
    c = max(d, 2)

    def push_prime():
        nonlocal c
        while True:
            c = next_prime_above(c)
            if qprod % c != 0:
                break
        field = PrimeField(c)
        w = find_order_element(field, d)
        primes.append(c)
        vectors.append(
            _mul_vector_mod(_rational_mod(P, field), _rational_mod(Q, field), X, w)
        )

    previous = None
    rounds = 1
    for _ in range(max_doublings + 1):
        while len(primes) < rounds:
            push_prime()
        candidate = _try_reconstruct(vectors, primes)
        if candidate is not None and candidate == previous:
            if _verified_by_extra_prime(candidate, P, Q, X, d, qprod, primes):
                return SparsePoly(
                    n, [(e, v) for e, v in zip(X.exponents, candidate) if v], QQ
                )
        previous = candidate
        rounds *= 2
    return _rational_by_clearing(P, Q, X)


def _rational_by_clearing(P: SparsePoly, Q: SparsePoly, X) -> SparsePoly:
    qp = _denominator_lcm(P)
    qq = _denominator_lcm(Q)
    phat = SparsePoly(P.nvars, [(e, int(c * qp)) for e, c in P.terms], ZZ)
    qhat = SparsePoly(Q.nvars, [(e, int(c * qq)) for e, c in Q.terms], ZZ)
    z = integer_sparse_mul(phat, qhat, X)
    scale = Fraction(1, qp * qq)
    return SparsePoly(P.nvars, [(e, c * scale) for e, c in z.terms], QQ)


def _try_reconstruct(vectors, primes) -> list | None:
    M = math.prod(primes)
    out = []
    for residues in zip(*vectors):
        x = 0
        for r, p in zip(residues, primes):
            m = M // p
            x += r * m * pow(m, -1, p)
        frac = _rational_reconstruct(x % M, M)
        if frac is None:
            return None
        out.append(frac)
    return out


def _verified_by_extra_prime(candidate, P, Q, X, d, qprod, used_primes) -> bool:
    c = used_primes[-1]
    while True:
        c = next_prime_above(c)
        if qprod % c != 0 and all(v.denominator % c != 0 for v in candidate):
            break
    field = PrimeField(c)
    w = find_order_element(field, d)
    vec = _mul_vector_mod(_rational_mod(P, field), _rational_mod(Q, field), X, w)
    for v, r in zip(candidate, vec):
        if v.numerator % c * pow(v.denominator, -1, c) % c != r:
            return False
    return True
