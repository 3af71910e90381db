"""Dense univariate polynomial arithmetic over a prime field.

Coefficient vectors are plain lists of canonical residues with the field
carried alongside; the zero polynomial is the empty list.  Three
multiplication kernels back every product:

  - schoolbook for short operands,
  - packed-integer multiplication (Kronecker substitution of the whole
    polynomial into one big integer product via gmpy2) as the general
    workhorse for any modulus below 2**62,
  - an iterative radix-2 NTT over numpy uint64 lanes for moduli p < 2**32
    with enough 2-adic headroom in p - 1.

The packed route is the default above the schoolbook cutoff: the bignum
layer already multiplies asymptotically fast in compiled code and measures
faster than the vectorized NTT at every size on CPython.  Use
set_multiplication_strategy to force a specific kernel.

On top of the kernels sit subproduct trees, multi-point evaluation,
interpolation, and the transposed variants of both: the forward map reads
off the first s coefficients of sum_i a_i / (1 - x_i u), and its inverse
evaluates the truncated product S = B*D together with -u*D' at the
inverted points.  Subproduct trees derive per-node Newton inverses top
down (the inverse of a reversed child is the parent's inverse times the
reversed sibling) and, for word-size moduli, evaluate all leaves in one
batched uint64 Horner pass.

Everything here is a pure function over immutable inputs; trees are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import gmpy2
import numpy as np

from .modular import PrimeField

# Products with at most this many coefficient pairs run schoolbook.
_SCHOOL_MAX_OPS = 72

# Tree nodes of degree at or below this use schoolbook remainders.
_REM_SCHOOL_MAX = 16

# Packed-segment batching of many remainders is worthwhile up to this
# node degree; beyond it the list churn outweighs the per-call savings.
_BATCH_REM_MAX = 2048

# Leaf widths: batched-uint64 trees stop subdividing much earlier because
# the remaining work runs as one vectorized Horner pass.
_LEAF_NP = 256
_LEAF_PY = 8

_RATSUM_LEAF = 8

_STRATEGIES = ("auto", "pack", "ntt", "school")
_strategy = "auto"


def set_multiplication_strategy(name: str) -> None:
    """Select the dense multiplication kernel: auto, pack, ntt or school."""
    global _strategy
    if name not in _STRATEGIES:
        raise ValueError(f"unknown strategy {name!r}; pick one of {_STRATEGIES}")
    _strategy = name


def get_multiplication_strategy() -> str:
    return _strategy


# ---------------------------------------------------------------------------
# raw kernels on (list of residues, field)
# ---------------------------------------------------------------------------


def _mul_school(a: list, b: list, p: int) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return [c % p for c in out]


def _mul_pack(a: list, b: list, p: int, trunc: int | None = None) -> list:
    # Each convolution coefficient is < min(la, lb) * (p-1)**2, so this limb
    # width keeps neighbours from overlapping.
    la, lb = len(a), len(b)
    width = 2 * (p - 1).bit_length() + min(la, lb).bit_length()
    z = gmpy2.pack(a, width) * gmpy2.pack(b, width)
    limbs = gmpy2.unpack(z, width)
    n = la + lb - 1
    if trunc is not None and trunc < n:
        n = trunc
    out = [c % p for c in limbs[:n]]
    if len(out) < n:
        out.extend([0] * (n - len(out)))
    return out


def _ntt_tables(field: PrimeField, n: int):
    tables = field._ntt_tables
    got = tables.get(n)
    if got is not None:
        return got
    p = field.p
    g = field.primitive_root()
    w = pow(g, (p - 1) // n, p)
    winv = pow(w, p - 2, p)
    half = max(n // 2, 1)
    fwd = np.empty(half, dtype=np.uint64)
    bwd = np.empty(half, dtype=np.uint64)
    x = y = 1
    for i in range(half):
        fwd[i] = x
        bwd[i] = y
        x = x * w % p
        y = y * winv % p
    bits = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.intp)
    for i in range(1, n):
        rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (bits - 1))
    ninv = pow(n, p - 2, p)
    got = (fwd, bwd, rev, ninv)
    tables[n] = got
    return got


def _ntt_transform(vec: np.ndarray, table: np.ndarray, rev: np.ndarray, p: int) -> np.ndarray:
    n = len(vec)
    a = vec[rev]
    pp = np.uint64(p)
    length = 2
    while length <= n:
        half = length // 2
        a = a.reshape(n // length, length)
        w = table[:: n // length][:half]
        t = (a[:, half:] * w) % pp
        lo = a[:, :half].copy()
        a[:, :half] = (lo + t) % pp
        a[:, half:] = (lo + pp - t) % pp
        a = a.reshape(n)
        length *= 2
    return a


def _mul_ntt(a: list, b: list, field: PrimeField) -> list:
    p = field.p
    out_len = len(a) + len(b) - 1
    n = 1
    while n < out_len:
        n <<= 1
    fwd, bwd, rev, ninv = _ntt_tables(field, n)
    fa = np.zeros(n, dtype=np.uint64)
    fa[: len(a)] = a
    fb = np.zeros(n, dtype=np.uint64)
    fb[: len(b)] = b
    fa = _ntt_transform(fa, fwd, rev, p)
    fb = _ntt_transform(fb, fwd, rev, p)
    fc = (fa * fb) % np.uint64(p)
    fc = _ntt_transform(fc, bwd, rev, p)
    fc = (fc * np.uint64(ninv)) % np.uint64(p)
    return fc[:out_len].tolist()


def _mul(a: list, b: list, field: PrimeField, trunc: int | None = None) -> list:
    la, lb = len(a), len(b)
    if not la or not lb:
        return []
    strat = _strategy
    if strat == "school" or la * lb <= _SCHOOL_MAX_OPS:
        out = _mul_school(a, b, field.p)
        return out if trunc is None else out[:trunc]
    if strat == "ntt":
        limit = field.ntt_size_limit()
        n = 1
        while n < la + lb - 1:
            n <<= 1
        if n <= limit:
            out = _mul_ntt(a, b, field)
            return out if trunc is None else out[:trunc]
    return _mul_pack(a, b, field.p, trunc)


def _mul_trunc(a: list, b: list, n: int, field: PrimeField) -> list:
    """Low n coefficients of a*b (unpadded)."""
    if n <= 0:
        return []
    if len(a) > n:
        a = a[:n]
    if len(b) > n:
        b = b[:n]
    return _mul(a, b, field, trunc=n)


def _pad(vec: list, n: int) -> list:
    if len(vec) < n:
        return vec + [0] * (n - len(vec))
    return vec


def _strip(vec: list) -> list:
    n = len(vec)
    while n and not vec[n - 1]:
        n -= 1
    return vec[:n]


def _series_inv(f: list, n: int, field: PrimeField) -> list:
    """Inverse of f modulo u**n by Newton iteration (f[0] invertible)."""
    p = field.p
    g = [int(gmpy2.invert(f[0], p))]
    k = 1
    while k < n:
        k2 = min(2 * k, n)
        e = _pad(_mul_trunc(f, g, k2, field), k2)
        # 1 - f*g vanishes below u**k, so only its high part matters.
        h = [(-c) % p for c in e[k:k2]]
        g = _pad(g, k) + _pad(_mul_trunc(g, h, k2 - k, field), k2 - k)
        k = k2
    return g[:n]


def _divmod(a: list, b: list, field: PrimeField, binv_rev: list | None = None):
    """Quotient and remainder of a by b; b's leading coefficient must be a
    unit.  binv_rev, when given, is a series inverse of reversed(b) to at
    least the quotient length.
    """
    a = _strip(a)
    b = _strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return [], a
    p = field.p
    m = da - db + 1
    ra = a[: len(a) - m - 1 : -1] if m < len(a) else a[::-1]
    if binv_rev is None or len(binv_rev) < m:
        binv_rev = _series_inv(b[::-1], m, field)
    q = _pad(_mul_trunc(ra, binv_rev, m, field), m)[::-1]
    if db == 0:
        return q, []
    qb = _pad(_mul_trunc(q, b, db, field), db)
    r = [(a[i] - qb[i]) % p for i in range(db)]
    return q, _strip(r)


def _rem_school(a: list, b: list, p: int) -> list:
    """Remainder of a modulo monic b by synthetic division."""
    db = len(b) - 1
    if len(a) - 1 < db:
        return list(a)
    r = list(a)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c:
            base = k - db
            for j in range(db):
                r[base + j] = (r[base + j] - c * b[j]) % p
    return _strip(r[:db])


def _batch_inv(vals: list, p: int) -> list:
    """Inverses of many nonzero residues with a single extended gcd."""
    n = len(vals)
    pref = [1] * (n + 1)
    for i, v in enumerate(vals):
        pref[i + 1] = pref[i] * v % p
    if pref[n] == 0:
        raise ZeroDivisionError("batch inversion hit a zero value")
    acc = int(gmpy2.invert(pref[n], p))
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = pref[i] * acc % p
        acc = acc * vals[i] % p
    return out


def _mul_monic_linear(poly: list, x: int, p: int) -> list:
    """poly * (u - x)."""
    out = [0] * (len(poly) + 1)
    for i, c in enumerate(poly):
        if c:
            out[i] = (out[i] - x * c) % p
            out[i + 1] = (out[i + 1] + c) % p
    return out


def _mul_one_minus_xu(poly: list, x: int, p: int) -> list:
    """poly * (1 - x*u)."""
    out = [poly[0]]
    for i in range(1, len(poly)):
        out.append((poly[i] - x * poly[i - 1]) % p)
    out.append((-x * poly[-1]) % p)
    return out


# ---------------------------------------------------------------------------
# public value types
# ---------------------------------------------------------------------------


class DensePoly:
    """Univariate polynomial; coeffs[i] is the canonical residue of u**i.

    The trailing coefficient is always nonzero; the zero polynomial has an
    empty coefficient tuple.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PrimeField, coeffs=()):
        p = field.p
        vec = [int(c) % p for c in coeffs]
        while vec and not vec[-1]:
            vec.pop()
        self.field = field
        self.coeffs = tuple(vec)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x) -> int:
        """Horner evaluation at a residue; returns a canonical residue."""
        p = self.field.p
        x = int(x) % p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return acc

    def _check(self, other: "DensePoly"):
        if not isinstance(other, DensePoly):
            raise TypeError("expected a DensePoly")
        if other.field.p != self.field.p:
            raise ValueError(f"field mismatch: {self.field.p} vs {other.field.p}")

    def __add__(self, other):
        self._check(other)
        p = self.field.p
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return DensePoly(self.field, out)

    def __sub__(self, other):
        self._check(other)
        p = self.field.p
        out = list(self.coeffs) + [0] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] = (out[i] - c) % p
        return DensePoly(self.field, out)

    def __mul__(self, other):
        self._check(other)
        return DensePoly(self.field, _mul(list(self.coeffs), list(other.coeffs), self.field))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DensePoly)
            and other.field.p == self.field.p
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.coeffs))

    def __repr__(self) -> str:
        return f"DensePoly(F_{self.field.p}, {list(self.coeffs)})"


class PointSet:
    """Pairwise distinct evaluation points in a prime field."""

    __slots__ = ("field", "points")

    def __init__(self, field: PrimeField, points, require_nonzero: bool = False):
        p = field.p
        pts = [int(x) % p for x in points]
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        if require_nonzero and any(x == 0 for x in pts):
            raise ValueError("points must be nonzero")
        self.field = field
        self.points = tuple(pts)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self) -> str:
        return f"PointSet(F_{self.field.p}, {list(self.points)})"


class SubproductTree:
    """Binary product tree over the monic linear factors (u - x_i).

    levels[0] holds one monic polynomial per chunk of at most leaf_size
    points; every higher level stores products of adjacent pairs, with an
    odd tail passed through unchanged, so levels[-1][0] is the full root
    prod_i (u - x_i).

    Evaluation cascades run on scaled remainders: a polynomial r of degree
    below a node M travels as the prefix S of the power series
    rev(r)/rev(M), and descending to a child costs a single product with
    the reversed sibling followed by a coefficient window.  Only the root
    needs a Newton inverse; chunk prefixes convert back to plain
    remainders with one short product each and, for word-size moduli, all
    chunks finish in one batched uint64 Horner pass.  Immutable once
    built.
    """

    __slots__ = ("field", "points", "leaf_size", "levels", "_rev", "_root_inv", "_pts_mat")

    def __init__(self, field: PrimeField, points, leaf_size: int | None = None):
        p = field.p
        np_mode = p < 1 << 32
        if leaf_size is None:
            leaf_size = _LEAF_NP if np_mode else _LEAF_PY
        pts = [int(x) % p for x in points]
        self.field = field
        self.points = tuple(pts)
        self.leaf_size = leaf_size
        level = self._build_leaves(pts, leaf_size, np_mode)
        levels = [level]
        while len(levels[-1]) > 1:
            prev = levels[-1]
            nxt = []
            for i in range(0, len(prev), 2):
                if i + 1 < len(prev):
                    nxt.append(_mul(prev[i], prev[i + 1], field))
                else:
                    nxt.append(prev[i])
            levels.append(nxt)
        self.levels = levels
        self._rev = [[node[::-1] for node in lv] for lv in levels]
        droot = len(self.root) - 1
        self._root_inv = (
            _series_inv(self._rev[-1][0], droot, field) if droot > _REM_SCHOOL_MAX else None
        )
        self._pts_mat = None

    def _build_leaves(self, pts: list, leaf_size: int, np_mode: bool) -> list:
        p = self.field.p
        if not pts:
            return [[1]]
        sub = min(leaf_size, 64)
        chunks = []
        full = len(pts) // sub if np_mode else 0
        if full:
            # All full sub-chunks at once: one vectorized multiply per factor.
            pp = np.uint64(p)
            mat = np.asarray(pts[: full * sub], dtype=np.uint64).reshape(full, sub)
            polys = np.zeros((full, sub + 1), dtype=np.uint64)
            polys[:, 0] = 1
            for k in range(sub):
                neg = (pp - mat[:, k : k + 1]) % pp
                shifted = np.zeros_like(polys)
                shifted[:, 1 : k + 2] = polys[:, : k + 1]
                polys = (shifted + neg * polys % pp) % pp
            chunks = [row.tolist() for row in polys]
        for lo in range(full * sub, len(pts), sub):
            poly = [1]
            for x in pts[lo : lo + sub]:
                poly = _mul_monic_linear(poly, x, p)
            chunks.append(poly)
        while sub < leaf_size and len(chunks) > 1:
            merged = []
            for i in range(0, len(chunks), 2):
                if i + 1 < len(chunks):
                    merged.append(_mul(chunks[i], chunks[i + 1], self.field))
                else:
                    merged.append(chunks[i])
            chunks = merged
            sub *= 2
        return chunks

    @property
    def root(self) -> list:
        return self.levels[-1][0]

    def _scaled_window(self, sers: list, shared: list, lo: int, hi: int) -> list:
        """Coefficients [lo, hi) of ser * shared for every scaled prefix.

        Small nodes with several prefixes share one packed product (the
        shared factor is multiplied against all segments at once).
        """
        field = self.field
        p = field.p
        want = hi - lo
        if len(sers) < 3 or hi > _BATCH_REM_MAX:
            out = []
            for ser in sers:
                full = _mul(ser, shared, field, trunc=hi)
                out.append(_pad(full[lo:hi], want))
            return out
        length = max(len(s) for s in sers)
        ls = len(shared)
        stride = length + ls
        width = 2 * (p - 1).bit_length() + min(length, ls).bit_length()
        concat = []
        for ser in sers:
            concat.extend(ser)
            concat.extend([0] * (stride - len(ser)))
        limbs = gmpy2.unpack(gmpy2.pack(concat, width) * gmpy2.pack(shared, width), width)
        limbs.extend([0] * (len(sers) * stride - len(limbs)))
        return [
            [c % p for c in limbs[i * stride + lo : i * stride + hi]]
            for i in range(len(sers))
        ]

    def eval_many(self, polys) -> list:
        """Values of each polynomial at every tree point, in one walk."""
        t = len(self.points)
        outs = [[0] * t for _ in polys]
        if t == 0:
            return outs
        field = self.field
        p = field.p
        top = len(self.levels) - 1
        root = self.root
        rems = []
        for poly in polys:
            r = _strip(list(poly))
            if len(r) - 1 >= t:
                if self._root_inv is not None:
                    _, r = _divmod(r, root, field, binv_rev=self._root_inv)
                else:
                    r = _rem_school(r, root, p)
            rems.append(r)
        if t <= _REM_SCHOOL_MAX:
            for k, r in enumerate(rems):
                out = outs[k]
                for j, x in enumerate(self.points):
                    acc = 0
                    for c in reversed(r):
                        acc = (acc * x + c) % p
                    out[j] = acc
            return outs
        if len(self.levels[0]) == 1:
            # Single chunk: the reduced inputs are already leaf remainders.
            if p < 1 << 32:
                self._eval_leaves_np({0: rems}, outs)
            else:
                self._eval_leaves_py({0: rems}, outs)
            return outs
        # Scaled prefixes: S = rev(r) / rev(root) mod u**t.
        start = []
        for r in rems:
            revr = [0] * (t - len(r)) + r[::-1]
            start.append(_pad(_mul_trunc(revr, self._root_inv, t, field), t))
        leaf_rems: dict = {}
        stack = [(top, 0, start)]
        while stack:
            level, idx, sers = stack.pop()
            node_deg = len(self.levels[level][idx]) - 1
            if level == 0:
                # One short product per prefix turns it back into the
                # plain remainder modulo the chunk.
                revs = self._scaled_window(sers, self._rev[0][idx], 0, node_deg)
                leaf_rems[idx] = [rv[::-1] for rv in revs]
                continue
            left, right = 2 * idx, 2 * idx + 1
            below = self.levels[level - 1]
            if right >= len(below):
                stack.append((level - 1, left, sers))
                continue
            ml = len(below[left]) - 1
            mr = len(below[right]) - 1
            lsers = self._scaled_window(sers, self._rev[level - 1][right], mr, mr + ml)
            rsers = self._scaled_window(sers, self._rev[level - 1][left], ml, ml + mr)
            stack.append((level - 1, right, rsers))
            stack.append((level - 1, left, lsers))
        if p < 1 << 32:
            self._eval_leaves_np(leaf_rems, outs)
        else:
            self._eval_leaves_py(leaf_rems, outs)
        return outs

    def _eval_leaves_py(self, leaf_rems: dict, outs: list) -> None:
        p = self.field.p
        leaf = self.leaf_size
        for idx, rems in leaf_rems.items():
            lo = idx * leaf
            chunk = self.points[lo : lo + leaf]
            for k, r in enumerate(rems):
                out = outs[k]
                for j, x in enumerate(chunk):
                    acc = 0
                    for c in reversed(r):
                        acc = (acc * x + c) % p
                    out[lo + j] = acc

    def _eval_leaves_np(self, leaf_rems: dict, outs: list) -> None:
        # Every remainder reaching a leaf has degree below the leaf degree,
        # so a fixed-width batched Horner covers all chunks at once.
        p = self.field.p
        pp = np.uint64(p)
        leaf = self.leaf_size
        nodes = len(self.levels[0])
        npolys = len(outs)
        if self._pts_mat is None:
            mat = np.zeros((nodes, leaf), dtype=np.uint64)
            for idx in range(nodes):
                chunk = self.points[idx * leaf : (idx + 1) * leaf]
                mat[idx, : len(chunk)] = chunk
            self._pts_mat = mat
        coeff = np.zeros((nodes, npolys, leaf), dtype=np.uint64)
        for idx, rems in leaf_rems.items():
            for k, r in enumerate(rems):
                if r:
                    coeff[idx, k, : len(r)] = [int(c) for c in r]
        x = self._pts_mat[:, None, :]
        acc = np.zeros((nodes, npolys, leaf), dtype=np.uint64)
        for k in range(leaf - 1, -1, -1):
            acc = (acc * x + coeff[:, :, k : k + 1]) % pp
        for idx in range(nodes):
            lo = idx * leaf
            cnt = min(leaf, len(self.points) - lo)
            block = acc[idx]
            for k in range(npolys):
                outs[k][lo : lo + cnt] = block[k, :cnt].tolist()

    def interpolate(self, vals) -> list:
        """The unique polynomial of degree < t with poly(x_i) = vals[i]."""
        t = len(self.points)
        if len(vals) != t:
            raise ValueError("one value per point is required")
        if t == 0:
            return []
        p = self.field.p
        root = self.root
        droot = [(i * c) % p for i, c in enumerate(root)][1:]
        dvals = self.eval_many([droot])[0]
        cs = [v * iv % p for v, iv in zip(vals, _batch_inv(dvals, p))]
        leaf = self.leaf_size
        partials = []
        for li, node in enumerate(self.levels[0]):
            lo = li * leaf
            chunk = self.points[lo : lo + leaf]
            acc = [0] * (len(node) - 1)
            for j, x in enumerate(chunk):
                c = cs[lo + j]
                if not c:
                    continue
                # node / (u - x) by synthetic division, scaled by c.
                carry = 0
                for k in range(len(node) - 2, -1, -1):
                    carry = (node[k + 1] + x * carry) % p
                    acc[k] = (acc[k] + c * carry) % p
            partials.append(acc)
        for level in range(1, len(self.levels)):
            below = self.levels[level - 1]
            combined = []
            for i in range(0, len(partials), 2):
                if i + 1 >= len(partials):
                    combined.append(partials[i])
                    continue
                lp = _mul(partials[i], below[i + 1], self.field)
                rp = _mul(partials[i + 1], below[i], self.field)
                out = [0] * max(len(lp), len(rp))
                for k, c in enumerate(lp):
                    out[k] = c
                for k, c in enumerate(rp):
                    out[k] = (out[k] + c) % p
                combined.append(out)
            partials = combined
        return _strip(partials[0])


# ---------------------------------------------------------------------------
# transposed evaluation and interpolation kernels
# ---------------------------------------------------------------------------


def _ratsum(vals, pts, lo: int, hi: int, field: PrimeField, dcache):
    """Numerator and denominator of sum over [lo, hi) of vals[i]/(1 - pts[i] u).

    The split point is the largest power of two below the range size, so
    subranges line up across calls and the value-independent denominators
    can be reused through dcache.
    """
    p = field.p
    size = hi - lo
    if size <= _RATSUM_LEAF:
        num = [vals[lo]]
        den = [1, (-pts[lo]) % p]
        for i in range(lo + 1, hi):
            x = pts[i]
            num = _mul_one_minus_xu(num, x, p)
            v = vals[i]
            if v:
                for j, c in enumerate(den):
                    num[j] = (num[j] + v * c) % p
            den = _mul_one_minus_xu(den, x, p)
        return num, den
    mid = lo + (1 << ((size - 1).bit_length() - 1))
    nl, dl = _ratsum(vals, pts, lo, mid, field, dcache)
    nr, dr = _ratsum(vals, pts, mid, hi, field, dcache)
    a = _mul(nl, dr, field)
    b = _mul(nr, dl, field)
    if len(a) < len(b):
        a, b = b, a
    num = list(a)
    for j, c in enumerate(b):
        num[j] = (num[j] + c) % p
    if dcache is None:
        den = _mul(dl, dr, field)
    else:
        den = dcache.get((lo, hi))
        if den is None:
            den = _mul(dl, dr, field)
            dcache[(lo, hi)] = den
    return num, den


def _transposed_eval(vals: list, pts: list, s: int, field: PrimeField, dcache=None) -> list:
    """First s coefficients of sum_i vals[i]/(1 - pts[i] u).

    Equivalently the product of the s-row transposed Vandermonde at pts by
    vals.  Sums longer than s are cut into ceil(t/s) blocks of at most s
    points each.
    """
    if s <= 0:
        return []
    p = field.p
    t = len(vals)
    out = None
    for lo in range(0, t, s):
        hi = min(lo + s, t)
        if not any(vals[lo:hi]):
            continue
        cache = dcache if lo == 0 else None
        num, den = _ratsum(vals, pts, lo, hi, field, cache)
        inv = None if cache is None else cache.get(("inv", lo, hi))
        if inv is None:
            inv = _series_inv(den, s, field)
            if cache is not None:
                cache[("inv", lo, hi)] = inv
        blk = _pad(_mul_trunc(num, inv, s, field), s)
        if out is None:
            out = blk
        else:
            out = [(x + y) % p for x, y in zip(out, blk)]
    return out if out is not None else [0] * s


class TransposedInterpContext:
    """Shared precomputation for repeated transposed interpolation at one
    set of nonzero pairwise-distinct points.

    Holds the subproduct tree over the inverted points and the master
    denominator D = prod (1 - x_i u); the division weights -u*D' at the
    inverted points are evaluated inside the first application so a
    one-shot use pays for a single cascade.
    """

    __slots__ = ("field", "points", "tau", "tree", "denominator", "_dden", "_weights")

    def __init__(self, field: PrimeField, points):
        p = field.p
        pts = [int(x) % p for x in points]
        self.field = field
        self.points = tuple(pts)
        self._weights = None
        if not pts:
            self.tau = ()
            self.tree = None
            self.denominator = [1]
            self._dden = []
            return
        self.tau = _batch_inv(pts, p)
        self.tree = SubproductTree(field, self.tau)
        root = self.tree.root
        c0inv = int(gmpy2.invert(root[0], p))
        self.denominator = [c * c0inv % p for c in root]
        self._dden = [(i * c) % p for i, c in enumerate(self.denominator)][1:]

    def apply_many(self, bvecs) -> list:
        """Recover the coefficient vectors a with V^T a = b for each b."""
        s = len(self.points)
        if s == 0:
            return [[] for _ in bvecs]
        field = self.field
        p = field.p
        shifted = [_mul_trunc(list(b), self.denominator, s, field) for b in bvecs]
        if self._weights is None:
            valss = self.tree.eval_many([self._dden] + shifted)
            below = [(-ti * dv) % p for ti, dv in zip(self.tau, valss[0])]
            self._weights = _batch_inv(below, p)
            valss = valss[1:]
        else:
            valss = self.tree.eval_many(shifted)
        weights = self._weights
        return [[sv * w % p for sv, w in zip(vals, weights)] for vals in valss]

    def apply(self, bvec) -> list:
        return self.apply_many([bvec])[0]


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def poly_mul(a: DensePoly, b: DensePoly) -> DensePoly:
    """Exact product of two dense polynomials over the same field."""
    if not isinstance(a, DensePoly) or not isinstance(b, DensePoly):
        raise TypeError("poly_mul expects DensePoly operands")
    if a.field.p != b.field.p:
        raise ValueError(f"field mismatch: {a.field.p} vs {b.field.p}")
    return DensePoly(a.field, _mul(list(a.coeffs), list(b.coeffs), a.field))


def multipoint_eval(a: DensePoly, pts: PointSet) -> list:
    """Values a(x) at every point, as canonical residues.

    The empty point set yields the empty list; the zero polynomial
    evaluates to zeros.
    """
    if a.field.p != pts.field.p:
        raise ValueError("field mismatch between polynomial and points")
    n = len(pts.points)
    if n == 0:
        return []
    if a.is_zero():
        return [0] * n
    tree = SubproductTree(a.field, pts.points)
    return [int(v) for v in tree.eval_many([list(a.coeffs)])[0]]


def interpolate(pts: PointSet, vals) -> DensePoly:
    """The unique polynomial of degree < len(pts) through the given values."""
    vals = [int(v) % pts.field.p for v in vals]
    if len(vals) != len(pts.points):
        raise ValueError("one value per point is required")
    tree = SubproductTree(pts.field, pts.points)
    return DensePoly(pts.field, tree.interpolate(vals))


def transposed_eval(vals, pts: PointSet, s: int) -> list:
    """b with b_j = sum_i vals[i] * pts[i]**j for j < s."""
    p = pts.field.p
    vec = [int(v) % p for v in vals]
    if len(vec) != len(pts.points):
        raise ValueError("one value per point is required")
    return [int(v) for v in _transposed_eval(vec, list(pts.points), s, pts.field)]


def transposed_interp(bvec, pts: PointSet) -> list:
    """The unique a with transposed_eval(a, pts, s) = b, for s = len(pts).

    Points must be nonzero and pairwise distinct.
    """
    p = pts.field.p
    if any(x == 0 for x in pts.points):
        raise ValueError("points must be nonzero for transposed interpolation")
    vec = [int(v) % p for v in bvec]
    if len(vec) != len(pts.points):
        raise ValueError("one value per point is required")
    ctx = TransposedInterpContext(pts.field, pts.points)
    return [int(v) for v in ctx.apply(vec)]


def subproduct_tree(pts: PointSet) -> SubproductTree:
    """Build the subproduct tree for a point set."""
    return SubproductTree(pts.field, pts.points)
