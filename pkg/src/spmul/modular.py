"""Prime-field arithmetic and multiplicative-order machinery.

The field Z/pZ is represented by PrimeField, which carries the prime
factorization of p - 1 so that exact element orders are computable.
Elements are canonical residues in [0, p).  Fields and elements are
immutable after construction and every operation is a pure function, so
values can be shared freely between threads (internal lookup tables are
memoized pure values).
"""

from __future__ import annotations

import math

import gmpy2

# Moduli are capped so that a product of two residues always fits in a
# double machine word, keeping the bignum kernels on their fast paths.
MAX_MODULUS = 1 << 62

# Witness set making Miller-Rabin deterministic for all n < 3.3 * 10**24,
# which covers the supported range n < 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 1 << 20


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**64."""
    if n >= 1 << 64:
        raise ValueError("deterministic primality test supports n < 2**64 only")
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of an odd composite n (deterministic sweep)."""
    for c in range(1, 1000):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed to split {n}")


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n as ascending (prime, multiplicity) pairs.

    Trial division removes small factors; Pollard's rho splits whatever
    composite cofactor remains.
    """
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    fac: dict[int, int] = {}
    for q in (2, 3, 5):
        while n % q == 0:
            fac[q] = fac.get(q, 0) + 1
            n //= q
    q = 7
    while q * q <= n and q < _TRIAL_LIMIT:
        while n % q == 0:
            fac[q] = fac.get(q, 0) + 1
            n //= q
        q += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            fac[m] = fac.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return sorted(fac.items())


class PrimeField:
    """The prime field F_p for an odd prime 2 < p < 2**62."""

    __slots__ = ("p", "factorization", "_proot", "_ntt_tables")

    def __init__(self, p: int):
        p = int(p)
        if not 2 < p < MAX_MODULUS:
            raise ValueError(f"modulus must satisfy 2 < p < 2**62, got {p}")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.factorization = tuple(factorize(p - 1))
        self._proot: int | None = None
        self._ntt_tables: dict = {}

    def element(self, value) -> "FieldElement":
        return FieldElement(value, self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def primitive_root(self) -> int:
        """Smallest generator of the multiplicative group.

        Candidates 2, 3, 4, ... are tried in increasing order; g passes if
        g**((p-1)/q) != 1 for every prime divisor q of p - 1.
        """
        if self._proot is None:
            p = self.p
            checks = [(p - 1) // q for q, _ in self.factorization]
            g = 2
            while True:
                if all(pow(g, e, p) != 1 for e in checks):
                    self._proot = g
                    break
                g += 1
        return self._proot

    def ntt_size_limit(self) -> int:
        """Largest power-of-two transform length this modulus supports.

        Nonzero only for p < 2**32, where vectorized 64-bit butterflies
        cannot overflow.
        """
        if self.p >= 1 << 32:
            return 0
        two_adic = (self.p - 1) & -(self.p - 1)
        return two_adic

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"


class FieldElement:
    """A canonical residue in [0, p) tied to its PrimeField."""

    __slots__ = ("residue", "field")

    def __init__(self, value, field: PrimeField):
        object.__setattr__(self, "residue", int(value) % field.p)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field.p != self.field.p:
                raise ValueError(
                    f"mismatched moduli: {self.field.p} vs {other.field.p}"
                )
            return other
        if isinstance(other, int):
            return FieldElement(other, self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.residue + o.residue, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.residue - o.residue, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(o.residue - self.residue, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.residue * o.residue, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inv()

    def __neg__(self):
        return FieldElement(-self.residue, self.field)

    def __pow__(self, exponent: int):
        # Binary powering; a negative exponent inverts first.
        if exponent < 0:
            return self.inv() ** (-exponent)
        return FieldElement(pow(self.residue, exponent, self.field.p), self.field)

    def inv(self) -> "FieldElement":
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.residue == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.field.p}")
        return FieldElement(int(gmpy2.invert(self.residue, self.field.p)), self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field.p == other.field.p and self.residue == other.residue
        if isinstance(other, int):
            return self.residue == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.residue))

    def __int__(self) -> int:
        return self.residue

    def __bool__(self) -> bool:
        return self.residue != 0

    def __repr__(self) -> str:
        return f"{self.residue} (mod {self.field.p})"


def find_order_element(field: PrimeField, min_order: int) -> FieldElement:
    """An element of multiplicative order at least min_order.

    Returns the smallest primitive root, whose order is exactly p - 1; the
    order is certified by checking g**((p-1)/q) != 1 for every prime q
    dividing p - 1.  Raises when the group is too small to contain any
    element of the requested order.
    """
    if min_order > field.p - 1:
        raise ValueError(
            f"field too small: requested order {min_order} exceeds group size "
            f"{field.p - 1}; pick a larger modulus"
        )
    return field.element(field.primitive_root())


def element_order(w: FieldElement) -> int:
    """Exact multiplicative order of a nonzero element."""
    if w.residue == 0:
        raise ValueError("0 has no multiplicative order")
    field = w.field
    p = field.p
    order = p - 1
    for q, _ in field.factorization:
        while order % q == 0 and pow(w.residue, order // q, p) == 1:
            order //= q
    return order
