"""Sparse multivariate polynomials and the fast support-driven product.

A polynomial is a sorted tuple of (exponent, coefficient) pairs: exponents
are tuples of naturals, coefficients are nonzero and canonical for the
ring tag (a PrimeField instance, or the ZZ / QQ markers for exact integer
and rational arithmetic).  The fast product works over a prime field: it
packs each exponent vector into a single index through a mixed-radix
(Kronecker) map, evaluates both factors at powers of a high-order element
with the transposed multi-point machinery, multiplies pointwise, and
interpolates the coefficients back on a support that must contain the
product's support.

All functions are pure; the two forward evaluations are independent of
each other and safe to run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .densepoly import TransposedInterpContext, _transposed_eval
from .modular import FieldElement, PrimeField, element_order

Exponent = tuple


class _IntegerRing:
    """Coefficient tag for exact arbitrary-precision integers."""

    name = "z"

    def canonical(self, c):
        return int(c)

    def __repr__(self):
        return "ZZ"


class _RationalRing:
    """Coefficient tag for exact rationals (Fraction coefficients)."""

    name = "q"

    def canonical(self, c):
        return Fraction(c)

    def __repr__(self):
        return "QQ"


ZZ = _IntegerRing()
QQ = _RationalRing()


def _canon_coeff(ring, c):
    if isinstance(ring, PrimeField):
        if isinstance(c, FieldElement):
            if c.field.p != ring.p:
                raise ValueError("coefficient from a different field")
            return c.residue
        return int(c) % ring.p
    return ring.canonical(c)


def ring_name(ring) -> str:
    return "fp" if isinstance(ring, PrimeField) else ring.name


class SparsePoly:
    """Multivariate polynomial in sparse representation.

    terms is a tuple of (exponent, coefficient) pairs with pairwise
    distinct exponents, nonzero canonical coefficients, sorted in
    lexicographic exponent order.
    """

    __slots__ = ("nvars", "ring", "terms")

    def __init__(self, nvars: int, terms, ring):
        nvars = int(nvars)
        if nvars < 1:
            raise ValueError("at least one variable is required")
        acc = {}
        for exp, coeff in terms:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not have {nvars} parts")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = _canon_coeff(ring, coeff)
            if exp in acc:
                c = _add_coeff(ring, acc[exp], c)
            acc[exp] = c
        if isinstance(ring, PrimeField):
            items = [(e, c % ring.p) for e, c in acc.items()]
        else:
            items = list(acc.items())
        self.nvars = nvars
        self.ring = ring
        self.terms = tuple(sorted((e, c) for e, c in items if c))

    @classmethod
    def zero(cls, nvars: int, ring) -> "SparsePoly":
        return cls(nvars, (), ring)

    @classmethod
    def _from_canonical(cls, nvars: int, terms, ring) -> "SparsePoly":
        # Trusted fast path: terms already sorted, distinct, nonzero, canonical.
        self = object.__new__(cls)
        self.nvars = nvars
        self.ring = ring
        self.terms = tuple(terms)
        return self

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> tuple:
        return tuple(e for e, _ in self.terms)

    def coefficients(self) -> tuple:
        return tuple(c for _, c in self.terms)

    def coefficient(self, exp):
        exp = tuple(exp)
        for e, c in self.terms:
            if e == exp:
                return c
        return _canon_coeff(self.ring, 0) if not isinstance(self.ring, PrimeField) else 0

    def map_coefficients(self, fn, ring) -> "SparsePoly":
        """A new polynomial with fn applied to every coefficient."""
        return SparsePoly(self.nvars, [(e, fn(c)) for e, c in self.terms], ring)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparsePoly)
            and other.nvars == self.nvars
            and _same_ring(other.ring, self.ring)
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash((self.nvars, ring_name(self.ring), self.terms))

    def __repr__(self) -> str:
        shown = ", ".join(f"{e}:{c}" for e, c in self.terms[:4])
        more = "" if len(self.terms) <= 4 else f", +{len(self.terms) - 4} terms"
        return f"SparsePoly({self.ring!r}, n={self.nvars}, {{{shown}{more}}})"


def _same_ring(a, b) -> bool:
    if isinstance(a, PrimeField) or isinstance(b, PrimeField):
        return isinstance(a, PrimeField) and isinstance(b, PrimeField) and a.p == b.p
    return type(a) is type(b)


def _add_coeff(ring, a, b):
    return a + b


class SupportSet:
    """A sorted set of distinct exponent vectors."""

    __slots__ = ("nvars", "exponents", "_lookup")

    def __init__(self, nvars: int, exponents):
        nvars = int(nvars)
        exps = []
        for exp in exponents:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not have {nvars} parts")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            exps.append(exp)
        lookup = set(exps)
        if len(lookup) != len(exps):
            exps = sorted(lookup)
        else:
            exps = sorted(exps)
        self.nvars = nvars
        self.exponents = tuple(exps)
        self._lookup = lookup

    @classmethod
    def _from_valid(cls, nvars: int, lookup: set) -> "SupportSet":
        # Trusted fast path: exponents known valid (right arity, nonnegative).
        self = object.__new__(cls)
        self.nvars = nvars
        self.exponents = tuple(sorted(lookup))
        self._lookup = lookup
        return self

    def __len__(self) -> int:
        return len(self.exponents)

    def __contains__(self, exp) -> bool:
        return tuple(exp) in self._lookup

    def __iter__(self):
        return iter(self.exponents)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SupportSet)
            and other.nvars == self.nvars
            and other.exponents == self.exponents
        )

    def __repr__(self) -> str:
        return f"SupportSet(n={self.nvars}, {len(self.exponents)} exponents)"


class KroneckerMap:
    """Mixed-radix packing of exponent vectors into single indices.

    radices (d_1, ..., d_n) define the box; cumulative[j] is the product of
    the first j radices, and an exponent maps to the dot product of its
    parts with the cumulative weights.  The map is injective on the box
    with range [0, total).
    """

    __slots__ = ("radices", "cumulative", "total")

    def __init__(self, radices):
        radices = tuple(int(d) for d in radices)
        if any(d < 1 for d in radices):
            raise ValueError("all radices must be at least 1")
        cumulative = []
        acc = 1
        for d in radices:
            cumulative.append(acc)
            acc *= d
        self.radices = radices
        self.cumulative = tuple(cumulative)
        self.total = acc

    def index(self, exp) -> int:
        exp = tuple(exp)
        if len(exp) != len(self.radices):
            raise ValueError("exponent arity does not match the radices")
        for e, d in zip(exp, self.radices):
            if not 0 <= e < d:
                raise ValueError(f"exponent {exp} is outside the radix box {self.radices}")
        return sum(e * c for e, c in zip(exp, self.cumulative))

    def __eq__(self, other) -> bool:
        return isinstance(other, KroneckerMap) and other.radices == self.radices

    def __repr__(self) -> str:
        return f"KroneckerMap(radices={self.radices}, total={self.total})"


@dataclass(frozen=True)
class SupportStats:
    """Term counts and support bit-sizes for a product instance.

    The bit-size of one exponent vector is the sum over its parts of the
    bit length of each part; e_p, e_q and e add those up over the two
    factor supports and the target support.
    """

    s_p: int
    s_q: int
    s: int
    e_p: int
    e_q: int
    e: int

    @property
    def sigma(self) -> int:
        return self.s_p + self.s_q + self.s

    @property
    def epsilon(self) -> int:
        return self.e_p + self.e_q + self.e


def exponent_bitsize(exp) -> int:
    """Sum of ceil(log2(part + 1)) over the parts of one exponent vector."""
    return sum(int(e).bit_length() for e in exp)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def kronecker_radices(X: SupportSet) -> KroneckerMap:
    """The tightest radix box containing X: d_j = 1 + max exponent in slot j."""
    if not X.exponents:
        raise ValueError("cannot size a radix box for an empty support")
    n = X.nvars
    maxes = [0] * n
    for exp in X.exponents:
        for j, e in enumerate(exp):
            if e > maxes[j]:
                maxes[j] = e
    return KroneckerMap([m + 1 for m in maxes])


def _radices_over(exp_iters, nvars: int) -> KroneckerMap:
    maxes = [0] * nvars
    seen = False
    for exps in exp_iters:
        for exp in exps:
            seen = True
            for j, e in enumerate(exp):
                if e > maxes[j]:
                    maxes[j] = e
    if not seen:
        raise ValueError("cannot size a radix box for an empty support")
    return KroneckerMap([m + 1 for m in maxes])


def kronecker_index(exp, km: KroneckerMap) -> int:
    """Packed index of one exponent vector inside the radix box."""
    return km.index(exp)


_POWER_TABLE_MAX = 1 << 13


def _eval_points_raw(exps, km: KroneckerMap, field: PrimeField, w: int) -> list:
    """Powers w**kappa(i) for each exponent i, via per-slot power bases.

    Slots with small radices get full power tables; huge radices fall back
    to binary powering per exponent part.
    """
    p = field.p
    bases = [pow(w, c, p) for c in km.cumulative]
    radices = km.radices
    tables = []
    for base, d in zip(bases, radices):
        if d <= _POWER_TABLE_MAX:
            tab = [1] * d
            x = 1
            for e in range(1, d):
                x = x * base % p
                tab[e] = x
            tables.append(tab)
        else:
            tables.append(None)
    out = []
    try:
        for exp in exps:
            acc = 1
            for j, e in enumerate(exp):
                if e:
                    tab = tables[j]
                    if tab is not None:
                        acc = acc * tab[e] % p
                    else:
                        if e >= radices[j]:
                            raise IndexError
                        acc = acc * pow(bases[j], e, p) % p
            out.append(acc)
    except IndexError:
        raise ValueError(
            f"exponent {tuple(exp)} is outside the radix box {radices}"
        ) from None
    return out


def eval_points(Y: SupportSet, km: KroneckerMap, w: FieldElement):
    """The evaluation points w**kappa(i) for i in Y, as a PointSet.

    Requires the multiplicative order of w to be at least the box volume,
    which keeps the packed indices (and hence the points) pairwise
    distinct.
    """
    from .densepoly import PointSet

    if element_order(w) < km.total:
        raise ValueError(
            f"element order {element_order(w)} is below the box volume {km.total}; "
            "points would collide"
        )
    pts = _eval_points_raw(Y.exponents, km, w.field, w.residue)
    return PointSet(w.field, pts)


def sumset_support(P: SparsePoly, Q: SparsePoly) -> SupportSet:
    """All pairwise exponent sums of the two supports.

    This is the canonical safe product support when no tighter superset is
    known; building it costs O(s_P * s_Q) time, which dominates the
    product itself for very sparse inputs.
    """
    if P.nvars != Q.nvars:
        raise ValueError("variable count mismatch")
    sums = {
        tuple(x + y for x, y in zip(ep, eq))
        for ep, _ in P.terms
        for eq, _ in Q.terms
    }
    return SupportSet._from_valid(P.nvars, sums)


def support_stats(P: SparsePoly, Q: SparsePoly, X: SupportSet) -> SupportStats:
    """Sizes and bit-sizes of the two factor supports and the target support."""
    return SupportStats(
        s_p=len(P.terms),
        s_q=len(Q.terms),
        s=len(X),
        e_p=sum(exponent_bitsize(e) for e, _ in P.terms),
        e_q=sum(exponent_bitsize(e) for e, _ in Q.terms),
        e=sum(exponent_bitsize(e) for e in X.exponents),
    )


def naive_mul(P: SparsePoly, Q: SparsePoly) -> SparsePoly:
    """Product by accumulating every pairwise monomial product."""
    if P.nvars != Q.nvars:
        raise ValueError("variable count mismatch")
    if not _same_ring(P.ring, Q.ring):
        raise ValueError("ring mismatch")
    ring = P.ring
    n = P.nvars
    if P.is_zero() or Q.is_zero():
        return SparsePoly.zero(n, ring)
    acc: dict = {}
    qterms = Q.terms
    get = acc.get
    if isinstance(ring, PrimeField):
        # Products are accumulated unreduced and taken mod p once at the end.
        for ep, cp in P.terms:
            for eq, cq in qterms:
                key = tuple(x + y for x, y in zip(ep, eq))
                acc[key] = get(key, 0) + cp * cq
        p = ring.p
        items = [(e, c % p) for e, c in acc.items()]
    else:
        for ep, cp in P.terms:
            for eq, cq in qterms:
                key = tuple(x + y for x, y in zip(ep, eq))
                acc[key] = get(key, 0) + cp * cq
        items = acc.items()
    return SparsePoly._from_canonical(n, sorted((e, c) for e, c in items if c), ring)


def _mul_vector_mod(P: SparsePoly, Q: SparsePoly, X: SupportSet, w: FieldElement) -> list:
    """Coefficient vector of P*Q on X's exponents (aligned, zeros kept).

    Both factors must already live over w's field.  The caller guarantees
    that X covers the product support and that the order of w reaches the
    box volume of X together with both supports.
    """
    field = w.field
    km = _radices_over(
        (X.exponents, (e for e, _ in P.terms), (e for e, _ in Q.terms)), P.nvars
    )
    if element_order(w) < km.total:
        raise ValueError(
            f"element order {element_order(w)} is below the box volume {km.total}; "
            "points would collide"
        )
    wres = w.residue
    p = field.p
    s = len(X)
    pts_p = _eval_points_raw((e for e, _ in P.terms), km, field, wres)
    pts_q = _eval_points_raw((e for e, _ in Q.terms), km, field, wres)
    ep = _transposed_eval([c for _, c in P.terms], pts_p, s, field)
    eq = _transposed_eval([c for _, c in Q.terms], pts_q, s, field)
    er = [a * b % p for a, b in zip(ep, eq)]
    pts_x = _eval_points_raw(X.exponents, km, field, wres)
    ctx = TransposedInterpContext(field, pts_x)
    return ctx.apply(er)


def sparse_mul_given_support(
    P: SparsePoly,
    Q: SparsePoly,
    X: SupportSet,
    w: FieldElement,
    debug_check: bool = False,
) -> SparsePoly:
    """Fast product of two prime-field polynomials on a known support.

    X must contain the support of P*Q; a too-small X silently aliases
    coefficients onto X (the evaluation map is no longer injective on the
    difference), which cannot be detected cheaply.  With debug_check the
    result is compared against the naive product for small instances and a
    mismatch raises.

    The radix box is sized over X together with both input supports, so
    the packed index map is defined everywhere it is used; the order of w
    must reach that box volume.
    """
    if P.nvars != Q.nvars or P.nvars != X.nvars:
        raise ValueError("variable count mismatch")
    if not isinstance(P.ring, PrimeField) or not _same_ring(P.ring, Q.ring):
        raise ValueError("both factors must live over the same prime field")
    if w.field.p != P.ring.p:
        raise ValueError("high-order element must live in the coefficient field")
    if len(X) < 1:
        raise ValueError("the target support must be nonempty")
    n = P.nvars
    ring = P.ring
    if P.is_zero() or Q.is_zero():
        return SparsePoly.zero(n, ring)
    vec = _mul_vector_mod(P, Q, X, w)
    result = SparsePoly._from_canonical(
        n, ((e, int(c)) for e, c in zip(X.exponents, vec) if c), ring
    )
    if debug_check and len(P) * len(Q) <= 1 << 16:
        expected = naive_mul(P, Q)
        if result != expected:
            raise ArithmeticError(
                "debug check failed: the given support does not cover the product"
            )
    return result
