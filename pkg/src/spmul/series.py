"""Truncated total-degree power series and their fast product.

A series is stored densely over the initial segment of exponents with
total degree below the truncation order, enumerated in graded
lexicographic order.  The fast product substitutes z_j -> z_j * z_n for
j < n, which turns total degree into the partial degree of the last
variable; the transformed factors split into slices by that degree, each
slice is evaluated at a shared set of points built from a high-order
field element, the point-indexed univariate products are truncated, and
the result slices are interpolated back and untransformed.

The slice evaluations and the pointwise univariate products are mutually
independent; all functions are pure.
"""

from __future__ import annotations

from functools import lru_cache

from .densepoly import TransposedInterpContext, _mul_trunc, _strip, _transposed_eval
from .modular import FieldElement, PrimeField, element_order
from .sparse import KroneckerMap, SparsePoly, _eval_points_raw


def _compositions(total: int, nvars: int):
    if nvars == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, nvars - 1):
            yield (first,) + rest


class InitialSegment:
    """All exponent vectors of total degree below d, in graded-lex order.

    offsets[k] is the number of vectors of total degree below k, so
    offsets[d] equals the segment size binomial(n + d - 1, n).
    """

    __slots__ = ("nvars", "degree", "exponents", "index", "degrees", "offsets", "_enc")

    def __init__(self, nvars: int, degree: int):
        if nvars < 0 or degree < 1:
            raise ValueError("expected nvars >= 0 and degree >= 1")
        exps = []
        offsets = [0]
        if nvars == 0:
            exps.append(())
            offsets.extend([1] * degree)
        else:
            for total in range(degree):
                exps.extend(_compositions(total, nvars))
                offsets.append(len(exps))
        self.nvars = nvars
        self.degree = degree
        self.exponents = tuple(exps)
        self.index = {e: i for i, e in enumerate(exps)}
        self.degrees = tuple(sum(e) for e in exps)
        self.offsets = tuple(offsets)
        self._enc = None

    @property
    def size(self) -> int:
        return len(self.exponents)

    def __contains__(self, exp) -> bool:
        return tuple(exp) in self.index

    def __len__(self) -> int:
        return len(self.exponents)

    def encodings(self) -> tuple:
        """Exponents packed into integers base 2d; sums of two segment
        members encode without carries."""
        if self._enc is None:
            base = 2 * self.degree
            enc = []
            for exp in self.exponents:
                acc = 0
                for e in reversed(exp):
                    acc = acc * base + e
                enc.append(acc)
            self._enc = tuple(enc)
        return self._enc

    def __repr__(self) -> str:
        return f"InitialSegment(n={self.nvars}, d={self.degree}, size={self.size})"


@lru_cache(maxsize=256)
def initial_segment(nvars: int, degree: int) -> InitialSegment:
    """The (cached) initial segment for nvars variables truncated at degree."""
    if nvars < 1:
        raise ValueError("at least one variable is required")
    return InitialSegment(nvars, degree)


@lru_cache(maxsize=256)
def _segment_any(nvars: int, degree: int) -> InitialSegment:
    # Internal variant allowing nvars = 0 (the slice support of univariate
    # series collapses to the single empty exponent).
    return InitialSegment(nvars, degree)


class TruncatedSeries:
    """Coefficients over an initial segment, densely indexed in graded-lex
    order."""

    __slots__ = ("field", "nvars", "degree", "coeffs")

    def __init__(self, field: PrimeField, nvars: int, degree: int, coeffs):
        seg = initial_segment(nvars, degree)
        p = field.p
        vec = [int(c) % p for c in coeffs]
        if len(vec) != seg.size:
            raise ValueError(
                f"expected {seg.size} coefficients for n={nvars}, d={degree}, "
                f"got {len(vec)}"
            )
        self.field = field
        self.nvars = nvars
        self.degree = degree
        self.coeffs = tuple(vec)

    @classmethod
    def from_terms(cls, field: PrimeField, nvars: int, degree: int, terms) -> "TruncatedSeries":
        seg = initial_segment(nvars, degree)
        vec = [0] * seg.size
        p = field.p
        for exp, c in terms:
            exp = tuple(int(e) for e in exp)
            idx = seg.index.get(exp)
            if idx is None:
                raise ValueError(
                    f"exponent {exp} has total degree >= the truncation order {degree}"
                )
            vec[idx] = (vec[idx] + int(c)) % p
        return cls(field, nvars, degree, vec)

    @classmethod
    def zero(cls, field: PrimeField, nvars: int, degree: int) -> "TruncatedSeries":
        return cls(field, nvars, degree, [0] * initial_segment(nvars, degree).size)

    def segment(self) -> InitialSegment:
        return initial_segment(self.nvars, self.degree)

    def coefficient(self, exp) -> int:
        idx = self.segment().index.get(tuple(exp))
        if idx is None:
            raise KeyError(f"{exp} lies outside the segment")
        return self.coeffs[idx]

    def to_sparse(self) -> SparsePoly:
        seg = self.segment()
        return SparsePoly(
            self.nvars,
            [(e, c) for e, c in zip(seg.exponents, self.coeffs) if c],
            self.field,
        )

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and other.field.p == self.field.p
            and other.nvars == self.nvars
            and other.degree == self.degree
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, self.nvars, self.degree, self.coeffs))

    def __repr__(self) -> str:
        return (
            f"TruncatedSeries(F_{self.field.p}, n={self.nvars}, d={self.degree}, "
            f"{sum(1 for c in self.coeffs if c)} nonzero)"
        )


class SliceStack:
    """A polynomial split into slices by the degree of the last variable.

    slices[j] holds coefficients over the (n-1)-variable simplex support in
    graded-lex position order.  The projective transform produces slices
    that stop at the first binomial(n-1+j, n-1) positions (partial-degree
    sum at most j); arbitrary X-supported slices are representable, and the
    inverse transform rejects entries outside the transform's image.
    """

    __slots__ = ("field", "nvars", "degree", "slices")

    def __init__(self, field: PrimeField, nvars: int, degree: int, slices):
        if nvars < 1:
            raise ValueError("at least one variable is required")
        if len(slices) != degree:
            raise ValueError(f"expected {degree} slices, got {len(slices)}")
        xseg = _segment_any(nvars - 1, degree)
        p = field.p
        stored = []
        for j, sl in enumerate(slices):
            vec = [int(c) % p for c in sl]
            if len(vec) > xseg.size:
                raise ValueError(
                    f"slice {j} holds {len(vec)} coefficients but the "
                    f"simplex support only has {xseg.size}"
                )
            stored.append(tuple(vec))
        self.field = field
        self.nvars = nvars
        self.degree = degree
        self.slices = tuple(stored)

    def slice_support(self) -> InitialSegment:
        return _segment_any(self.nvars - 1, self.degree)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SliceStack):
            return NotImplemented
        if (other.field.p, other.nvars, other.degree) != (self.field.p, self.nvars, self.degree):
            return False
        for a, b in zip(self.slices, other.slices):
            la, lb = _strip(list(a)), _strip(list(b))
            if la != lb:
                return False
        return True

    def __repr__(self) -> str:
        return f"SliceStack(F_{self.field.p}, n={self.nvars}, d={self.degree})"


def projective_transform(P: TruncatedSeries) -> SliceStack:
    """Substitute z_j -> z_j * z_n for j < n and split by the last degree.

    The exponent (i_1, ..., i_n) moves to (i_1, ..., i_{n-1}, |i|), so the
    slice index is the total degree and the slice position drops the last
    coordinate.
    """
    n, d = P.nvars, P.degree
    seg = P.segment()
    xseg = _segment_any(n - 1, d)
    slices = [[0] * xseg.offsets[j + 1] for j in range(d)]
    for idx, c in enumerate(P.coeffs):
        if c:
            exp = seg.exponents[idx]
            j = seg.degrees[idx]
            slices[j][xseg.index[exp[:-1]]] = c
    return SliceStack(P.field, n, d, slices)


def inverse_projective_transform(S: SliceStack) -> TruncatedSeries:
    """Undo the projective substitution; errors on slices outside its image."""
    n, d = S.nvars, S.degree
    seg = initial_segment(n, d)
    xseg = S.slice_support()
    vec = [0] * seg.size
    for j, sl in enumerate(S.slices):
        for pos, c in enumerate(sl):
            if c:
                x = xseg.exponents[pos]
                partial = sum(x)
                if partial > j:
                    raise ValueError(
                        f"slice {j} holds exponent {x} with partial-degree sum "
                        f"{partial} > {j}: not in the transform's image"
                    )
                vec[seg.index[x + (j - partial,)]] = c
    return TruncatedSeries(S.field, n, d, vec)


def naive_series_mul(P: TruncatedSeries, Q: TruncatedSeries) -> TruncatedSeries:
    """Truncated product by all pairwise monomial products below the order.

    Works on packed exponent encodings so the inner loop is a dictionary
    accumulation; coefficients reduce once at the end.
    """
    if (P.nvars, P.degree) != (Q.nvars, Q.degree):
        raise ValueError("shape mismatch")
    if P.field.p != Q.field.p:
        raise ValueError("field mismatch")
    n, d = P.nvars, P.degree
    field = P.field
    p = field.p
    seg = P.segment()
    enc = seg.encodings()
    degs = seg.degrees
    offsets = seg.offsets
    qpairs = list(zip(enc, Q.coeffs))
    acc: dict = {}
    get = acc.get
    for i, ca in enumerate(P.coeffs):
        if not ca:
            continue
        ei = enc[i]
        for ej, cb in qpairs[: offsets[d - degs[i]]]:
            if cb:
                k = ei + ej
                acc[k] = get(k, 0) + ca * cb
    out = [acc.get(e, 0) % p for e in enc]
    return TruncatedSeries(field, n, d, out)


def series_mul(P: TruncatedSeries, Q: TruncatedSeries, w: FieldElement) -> TruncatedSeries:
    """Fast truncated product; w must have order at least d**(n-1).

    Pipeline: projectively transform both factors, evaluate every slice at
    the shared points w**kappa(i) over the (n-1)-variable simplex with
    radices (d, ..., d), multiply the point-indexed polynomials in the
    last variable truncated at d, interpolate each result slice back, and
    untransform.
    """
    if (P.nvars, P.degree) != (Q.nvars, Q.degree):
        raise ValueError("shape mismatch")
    if P.field.p != Q.field.p or w.field.p != P.field.p:
        raise ValueError("field mismatch")
    n, d = P.nvars, P.degree
    field = P.field
    p = field.p
    needed = d ** (n - 1)
    if element_order(w) < needed:
        raise ValueError(
            f"element order {element_order(w)} is below d**(n-1) = {needed}"
        )
    xseg = _segment_any(n - 1, d)
    s = xseg.size
    km = KroneckerMap((d,) * (n - 1))
    pts = _eval_points_raw(xseg.exponents, km, field, w.residue)

    sp = projective_transform(P)
    sq = projective_transform(Q)
    dcache: dict = {}
    ep = [
        _transposed_eval(_strip(list(sl)), pts, s, field, dcache) for sl in sp.slices
    ]
    eq = [
        _transposed_eval(_strip(list(sl)), pts, s, field, dcache) for sl in sq.slices
    ]

    er_cols = []
    for colp, colq in zip(zip(*ep), zip(*eq)):
        prod = _mul_trunc(_strip(list(colp)), _strip(list(colq)), d, field)
        prod.extend([0] * (d - len(prod)))
        er_cols.append(prod)
    er_rows = [list(row) for row in zip(*er_cols)]

    ctx = TransposedInterpContext(field, pts)
    recovered = ctx.apply_many(er_rows)
    slices = [vec[: xseg.offsets[j + 1]] for j, vec in enumerate(recovered)]
    return inverse_projective_transform(SliceStack(field, n, d, slices))
