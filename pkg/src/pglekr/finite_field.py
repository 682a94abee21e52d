"""Finite fields GF(p^k) and their quadratic extensions.

Elements are stored as integers in ``[0, q)``: the coefficient vector
``(c_0, ..., c_{k-1})`` of the residue modulo the defining polynomial is
encoded as ``sum(c_i * p**i)``.  That integer order is the *fixed
enumeration order* used by every other module (point indices, group
element ordering, report listings).

Multiplication in GF(q) goes through a dense ``q x q`` table.  GF(q^2) uses
exp/log tables only, since a ``q^2 x q^2`` table is wasteful past q ~ 30.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import DivisionByZero, NonPrime, NotPrimePower, SizeLimitExceeded, ZeroInput

MAX_FIELD_ORDER = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, k


# -- polynomial helpers over GF(p), coefficient lists low-degree-first --------

def _poly_mulmod(a, b, modulus, p):
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # modulus is monic: t^k = -(m_0 + ... + m_{k-1} t^{k-1})
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for i in range(k):
                prod[d - k + i] = (prod[d - k + i] - c * modulus[i]) % p
    return prod[:k]


def _poly_divides(f, g, p):
    """True if monic ``f`` divides ``g`` over GF(p)."""
    g = list(g)
    df = len(f) - 1
    for d in range(len(g) - 1, df - 1, -1):
        c = g[d]
        if c:
            for i in range(df + 1):
                g[d - df + i] = (g[d - df + i] - c * f[i]) % p
    return not any(g[:df])


def is_irreducible(poly, p: int) -> bool:
    """Exhaustive check: no monic factor of degree 1..deg/2 divides ``poly``."""
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if _poly_divides(list(low) + [1], poly, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    # low-degree-first lexicographic order: c_0 varies slowest
    for low in itertools.product(range(p), repeat=k):
        poly = tuple(low) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("an irreducible polynomial of every degree exists")


def _smallest_generator(mul_by, order: int, candidates) -> tuple[int, np.ndarray]:
    for g in candidates:
        exp = np.empty(order, dtype=np.int64)
        x = 1
        for e in range(order):
            exp[e] = x
            x = mul_by(x, g)
            if x == 1 and e + 1 < order:
                break
        else:
            return g, exp
    raise AssertionError("multiplicative group of a finite field is cyclic")


class GF:
    """The field GF(p^k) with a deterministic model.

    The defining polynomial is the lexicographically smallest monic
    irreducible of degree ``k`` and the generator is the smallest element
    that generates ``GF(q)*``, so every table built on top is reproducible.
    """

    def __init__(self, p: int, k: int = 1, max_order: int = MAX_FIELD_ORDER):
        if not is_prime(p):
            raise NonPrime(f"{p} is not prime")
        if k < 1:
            raise ValueError("k must be positive")
        q = p**k
        if q > max_order:
            raise SizeLimitExceeded(f"GF({p}^{k}) has order {q} > limit {max_order}")
        self.p, self.k, self.q = p, k, q
        if k == 1:
            self.modulus = (0, 1)
            r = np.arange(q, dtype=np.int64)
            self.add_table = (r[:, None] + r[None, :]) % p
            self.mul_table = (r[:, None] * r[None, :]) % p
        else:
            self.modulus = smallest_irreducible(p, k)
            self._build_tables()
        self.neg_table = np.argmin(self.add_table, axis=1).astype(np.int64)
        self.sub_table = self.add_table[:, self.neg_table]
        mt = self.mul_table
        self.gen, self.exp = _smallest_generator(lambda x, g: int(mt[x, g]), q - 1, range(1, q))
        self.log = np.full(q, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(q - 1)
        self.inv_table = np.zeros(q, dtype=np.int64)
        self.inv_table[1:] = self.exp[(-self.log[1:]) % (q - 1)]

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        vecs = [self.coeffs(x) for x in range(q)]
        weights = p ** np.arange(k)
        arr = np.array(vecs, dtype=np.int64)
        self.add_table = (((arr[:, None, :] + arr[None, :, :]) % p) * weights).sum(-1)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(1, q):
            for b in range(a, q):
                c = _poly_mulmod(vecs[a], vecs[b], self.modulus, p)
                mul[a, b] = mul[b, a] = int(np.dot(c, weights))
        self.mul_table = mul

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            x, c = divmod(x, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        if len(coeffs) != self.k or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"need {self.k} coefficients in [0, {self.p})")
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def __call__(self, value: int) -> FieldElement:
        if not 0 <= value < self.q:
            raise ValueError(f"{value} outside [0, {self.q})")
        return FieldElement(self, int(value))

    def elements(self):
        return [FieldElement(self, x) for x in range(self.q)]

    # integer-level arithmetic, used by the hot paths
    def add(self, a, b):
        return int(self.add_table[a, b])

    def sub(self, a, b):
        return int(self.sub_table[a, b])

    def mul(self, a, b):
        return int(self.mul_table[a, b])

    def neg(self, a):
        return int(self.neg_table[a])

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return int(self.inv_table[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if a == 0:
            if n < 0:
                raise DivisionByZero("negative power of zero")
            return 1 if n == 0 else 0
        return int(self.exp[(self.log[a] * n) % (self.q - 1)])

    def is_square(self, x: int) -> bool:
        if x == 0:
            raise ZeroInput("square test is defined on nonzero elements")
        if self.p == 2:
            return True
        return bool(self.log[x] % 2 == 0)

    @cached_property
    def square_mask(self) -> np.ndarray:
        """Boolean mask over nonzero elements; index 0 is False."""
        mask = np.zeros(self.q, dtype=bool)
        mask[1:] = True if self.p == 2 else (self.log[1:] % 2 == 0)
        return mask

    @cached_property
    def ext(self) -> QuadraticExtension:
        return QuadraticExtension(self)


@dataclass(frozen=True)
class FieldElement:
    field: GF
    value: int

    @property
    def coeffs(self):
        return self.field.coeffs(self.value)

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return int(other) % self.field.p if self.field.k == 1 else self.field(int(other)).value

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.value, n))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def is_square(self) -> bool:
        return self.field.is_square(self.value)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.field!r}({self.value})"


def arith(a: FieldElement, b: FieldElement | None, op: str):
    """Dispatch a field operation by name (add, sub, mul, div, neg, inv, pow).

    For ``pow`` the second argument is an integer exponent.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown operation {op!r}")


def field_new(p: int, k: int = 1, max_order: int = MAX_FIELD_ORDER) -> GF:
    return _field_cached(p, k, max_order)


@lru_cache(maxsize=None)
def _field_cached(p, k, max_order):
    return GF(p, k, max_order)


def field_of_order(q: int, max_order: int = MAX_FIELD_ORDER) -> GF:
    p, k = prime_power(q)
    return field_new(p, k, max_order)


class QuadraticExtension:
    """GF(q^2) = GF(q)[t] / (t^2 + c1 t + c0), elements encoded ``lo + q*hi``.

    ``theta`` (encoded as ``q``) is the class of ``t``.  The modulus is the
    smallest monic irreducible quadratic, comparing ``(c0, c1)``.
    """

    def __init__(self, base: GF):
        self.base = F = base
        q = F.q
        self.q = q
        self.order = q * q
        for c0, c1 in itertools.product(range(q), repeat=2):
            # t^2 + c1 t + c0 has a root x iff x^2 + c1 x + c0 == 0
            x = np.arange(q)
            vals = F.add_table[F.add_table[F.mul_table[x, x], F.mul_table[c1, x]], c0]
            if not np.any(vals == 0):
                self.modulus = (c0, c1, 1)
                break
        c0, c1 = self.modulus[:2]
        # theta^2 = -c1 theta - c0
        self._t2_lo, self._t2_hi = F.neg(c0), F.neg(c1)
        self.gen, self.exp = _smallest_generator(self._mul_slow, self.order - 1, range(1, self.order))
        self.log = np.full(self.order, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(self.order - 1)

    def _mul_slow(self, x, y):
        F, q = self.base, self.q
        a, b = x % q, x // q
        c, d = y % q, y // q
        ac, bd = F.mul(a, c), F.mul(b, d)
        lo = F.add(ac, F.mul(bd, self._t2_lo))
        hi = F.add(F.add(F.mul(a, d), F.mul(b, c)), F.mul(bd, self._t2_hi))
        return lo + q * hi

    def __repr__(self):
        return f"{self.base!r}^2"

    def element(self, lo: int, hi: int = 0) -> ExtFieldElement:
        return ExtFieldElement(self, lo, hi)

    def encode(self, lo, hi):
        return lo + self.q * hi

    def embed(self, x: int) -> int:
        return x

    def add(self, x, y):
        F, q = self.base, self.q
        return F.add(x % q, y % q) + q * F.add(x // q, y // q)

    def sub(self, x, y):
        F, q = self.base, self.q
        return F.sub(x % q, y % q) + q * F.sub(x // q, y // q)

    def mul(self, x, y):
        if x == 0 or y == 0:
            return 0
        return int(self.exp[(self.log[x] + self.log[y]) % (self.order - 1)])

    def inv(self, x):
        if x == 0:
            raise DivisionByZero("inverse of zero")
        return int(self.exp[(-self.log[x]) % (self.order - 1)])

    def pow(self, x, n):
        if x == 0:
            return 1 if n == 0 else 0
        return int(self.exp[(self.log[x] * n) % (self.order - 1)])

    def coset_log(self, r: int) -> int:
        """Exponent of ``r * GF(q)*`` in the cyclic quotient ``GF(q^2)* / GF(q)*``.

        GF(q)* is the subgroup generated by ``gen**(q+1)``, so the class of
        ``r`` is ``log(r) mod (q+1)``.
        """
        if r == 0:
            raise ZeroInput("coset_log of zero")
        return int(self.log[r] % (self.q + 1))

    def frobenius(self, x):
        return self.pow(x, self.q)

    @cached_property
    def root_by_trace_norm(self) -> dict[tuple[int, int], int]:
        """Map ``(r + r^q, r^(q+1))`` to one such ``r`` outside GF(q).

        This locates an eigenvalue of a matrix whose characteristic
        polynomial ``t^2 - tr t + det`` is irreducible over GF(q).
        """
        out = {}
        for r in range(self.q, self.order):
            rq = self.frobenius(r)
            key = (self.add(r, rq), self.mul(r, rq))
            assert key[0] < self.q and key[1] < self.q
            out.setdefault(key, r)
        return out


@dataclass(frozen=True)
class ExtFieldElement:
    ext: QuadraticExtension
    lo: int
    hi: int

    @property
    def value(self) -> int:
        return self.ext.encode(self.lo, self.hi)

    @classmethod
    def decode(cls, ext, x):
        return cls(ext, x % ext.q, x // ext.q)

    def __add__(self, other):
        return ExtFieldElement.decode(self.ext, self.ext.add(self.value, other.value))

    def __sub__(self, other):
        return ExtFieldElement.decode(self.ext, self.ext.sub(self.value, other.value))

    def __mul__(self, other):
        return ExtFieldElement.decode(self.ext, self.ext.mul(self.value, other.value))

    def __pow__(self, n):
        return ExtFieldElement.decode(self.ext, self.ext.pow(self.value, n))

    def coset_log(self) -> int:
        return self.ext.coset_log(self.value)
