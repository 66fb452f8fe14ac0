"""Finite fields GF(p^k) and polynomial arithmetic over GF(p).

Elements of GF(p^k) = GF(p)[x]/(m(x)) are encoded as integers sum c_i p^i
(c_i the coefficient of x^i), so GF(p) sits inside as 0..p-1. The modulus m is
the smallest monic irreducible of degree k in the order of these encodings.
Multiplication goes through discrete log / antilog tables, which also give
element orders and square roots; the ``v*`` methods act on numpy arrays.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .arith import factorize, is_prime
from .errors import DomainError, ResourceLimitError

TABLE_LIMIT = 10**7


# -- polynomials over GF(p), coefficient lists with the constant term first ---------


def fp_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def fp_sub(a, b, p):
    n = max(len(a), len(b))
    return fp_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return fp_trim([c % p for c in out])


def fp_divmod(a, b, p):
    b = fp_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [c % p for c in fp_trim(a)]
    inv_lead = pow(b[-1], -1, p)
    db = len(b) - 1
    quot = [0] * max(len(rem) - db, 0)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] * inv_lead % p
        if c:
            quot[k - db] = c
            for i, y in enumerate(b):
                rem[k - db + i] = (rem[k - db + i] - c * y) % p
    return fp_trim(quot), fp_trim(rem[:db])


def fp_mod(a, m, p):
    return fp_divmod(a, m, p)[1]


def fp_powmod(a, e, m, p):
    out = [1]
    base = fp_mod(a, m, p)
    while e:
        if e & 1:
            out = fp_mod(fp_mul(out, base, p), m, p)
        e >>= 1
        if e:
            base = fp_mod(fp_mul(base, base, p), m, p)
    return out


def fp_gcd(a, b, p):
    a, b = fp_trim(a), fp_trim(b)
    while b:
        a, b = b, fp_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def fp_monic(a, p):
    a = fp_trim(a)
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def is_irreducible(f, p) -> bool:
    """Rabin's test for a polynomial of degree >= 1 over GF(p)."""
    f = fp_monic(f, p)
    k = len(f) - 1
    if k < 1:
        return False
    x = [0, 1]
    if fp_sub(fp_powmod(x, p**k, f, p), x, p):
        return False
    for r in factorize(k).primes:
        h = fp_sub(fp_powmod(x, p ** (k // r), f, p), x, p)
        if len(fp_gcd(f, h, p)) != 1:
            return False
    return True


def distinct_degree_factorization(f, p) -> list[tuple[int, int]]:
    """(degree, count) pairs for the irreducible factors of a squarefree f over GF(p)."""
    f = fp_monic(f, p)
    x = [0, 1]
    out = []
    h = x
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = fp_powmod(h, p, f, p)
        g = fp_gcd(f, fp_sub(h, x, p), p)
        if len(g) > 1:
            out.append((d, (len(g) - 1) // d))
            f = fp_divmod(f, g, p)[0]
            h = fp_mod(h, f, p)
    if len(f) > 1:
        out.append((len(f) - 1, 1))
    return out


def smallest_irreducible(p: int, k: int) -> list[int]:
    """Monic irreducible of degree k with the smallest encoding sum c_i p^i of its lower terms."""
    if k == 1:
        return [0, 1]
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        f = low + [1]
        if low[0] and is_irreducible(f, p):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


# -- the field ---------------------------------------------------------------------


class GF:
    """GF(p^k) with the deterministic modulus from ``smallest_irreducible``."""

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        if k < 1:
            raise DomainError("extension degree must be >= 1")
        q = p**k
        if q > TABLE_LIMIT:
            raise ResourceLimitError(f"GF({p}^{k}) exceeds the table budget {TABLE_LIMIT}")
        self.p, self.k, self.q = p, k, q
        self.modulus = tuple(smallest_irreducible(p, k))
        self._weights = np.array([p**i for i in range(k)], dtype=np.int64)
        self.generator = self._find_generator()
        self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    # encoding ------------------------------------------------------------------
    def to_poly(self, a: int) -> list[int]:
        return fp_trim([(a // self.p**i) % self.p for i in range(self.k)])

    def from_poly(self, f) -> int:
        f = fp_mod(f, list(self.modulus), self.p) if len(f) > self.k else f
        return sum((c % self.p) * self.p**i for i, c in enumerate(f))

    def _digits(self, a: np.ndarray) -> np.ndarray:
        return (a[None, :] // self._weights[:, None]) % self.p

    def _undigits(self, d: np.ndarray) -> np.ndarray:
        return (d * self._weights[:, None]).sum(axis=0)

    # table construction ---------------------------------------------------------
    def _poly_mul(self, a: int, b: int) -> int:
        m = list(self.modulus)
        return self.from_poly(fp_mod(fp_mul(self.to_poly(a), self.to_poly(b), self.p), m, self.p))

    def _poly_pow(self, a: int, e: int) -> int:
        return self.from_poly(fp_powmod(self.to_poly(a), e, list(self.modulus), self.p))

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        qs = factorize(self.q - 1).primes
        for g in range(2, self.q):
            if all(self._poly_pow(g, (self.q - 1) // r) != 1 for r in qs):
                return g
        raise AssertionError("multiplicative group has no generator")

    def _mult_matrix(self, c: int) -> np.ndarray:
        # columns: digits of c * x^i; multiplication by c is GF(p)-linear
        cols = [self.to_poly(self._poly_mul(c, self.p**i)) for i in range(self.k)]
        mat = np.zeros((self.k, self.k), dtype=np.int64)
        for i, col in enumerate(cols):
            mat[: len(col), i] = col
        return mat

    def _build_tables(self):
        order = self.q - 1
        exp = np.empty(order, dtype=np.int64)
        exp[0] = 1
        filled = 1
        while filled < order:
            step = min(filled, order - filled)
            mat = self._mult_matrix(self._poly_pow(self.generator, filled))
            digits = self._digits(exp[:step])
            exp[filled : filled + step] = self._undigits((mat @ digits) % self.p)
            filled += step
        log = np.full(self.q, -1, dtype=np.int64)
        log[exp] = np.arange(order, dtype=np.int64)
        if (log[1:] < 0).any():
            raise AssertionError(f"{self.generator} does not generate GF({self.q})^x")
        self.exp = exp
        self.log = log
        # Doubled (plus padding for the log -1 of zero) so that sums of two logs index
        # them without reduction; int32 keeps the gathers cache-friendly.
        self._exp2 = np.concatenate([exp, exp, exp[:2]]).astype(np.int32)
        self._log32 = log.astype(np.int32)
        if self.k > 1:
            # Zech table: encoding of 1 + g^m, so a + b = a * (1 + g^(log b - log a))
            one_plus = self._digit_add(exp, np.ones_like(exp))
            self._one_plus2 = np.concatenate([one_plus, one_plus, one_plus[:2]]).astype(np.int32)
            self._minus_one_log = 0 if self.p == 2 else order // 2

    # scalar arithmetic -------------------------------------------------------------
    def embed(self, c: int) -> int:
        """Image of the integer c under Z -> GF(p) -> GF(q)."""
        return c % self.p

    def add(self, a: int, b: int) -> int:
        return int(self.vadd(np.array([a]), np.array([b]))[0])

    def neg(self, a: int) -> int:
        return int(self.vneg(np.array([a]))[0])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.exp[(-self.log[a]) % (self.q - 1)])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        return (self.q - 1) // math.gcd(int(self.log[a]), self.q - 1)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # vectorized arithmetic -----------------------------------------------------------
    def _digit_add(self, a, b):
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._weights:
            out += (((a // w) + (b // w)) % self.p) * w
        return out

    def vadd(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        a, b = np.broadcast_arrays(a, b)
        log = self._log32
        la, lb = log[a], log[b]
        zech = self._one_plus2[lb - la + (self.q - 1)]
        out = np.where(zech == 0, 0, self._exp2[la + log[zech]])
        return np.where(a == 0, b, np.where(b == 0, a, out))

    def vneg(self, a):
        if self.k == 1:
            return (-a) % self.p
        return np.where(a == 0, 0, self._exp2[self._log32[a] + self._minus_one_log])

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a, b = np.broadcast_arrays(a, b)
        log = self._log32
        return np.where((a == 0) | (b == 0), 0, self._exp2[log[a] + log[b]])

    def vinv(self, a):
        """Inverse of each nonzero entry; zero entries map to zero."""
        return np.where(a == 0, 0, self._exp2[(self.q - 1) - self._log32[a]])

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        out = self.exp[(self.log[a] * e) % (self.q - 1)]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def vorder(self, a):
        """Multiplicative order of each nonzero entry."""
        return (self.q - 1) // np.gcd(self.log[np.asarray(a)], self.q - 1)

    def vsqrt(self, a):
        """(is_square, root) for each entry; zero counts as a square with root 0."""
        a = np.asarray(a, dtype=np.int64)
        lg = self.log[a]
        if self.p == 2:
            # squaring is a bijection in characteristic 2
            root = np.where(a == 0, 0, self.exp[(lg * (self.q // 2)) % (self.q - 1)])
            return np.ones(a.shape, dtype=bool), root
        square = (a == 0) | (lg % 2 == 0)
        root = np.where(a == 0, 0, self.exp[(lg // 2) % (self.q - 1)])
        return square, np.where(square, root, 0)


@functools.lru_cache(maxsize=8)
def field(p: int, k: int = 1) -> GF:
    """Cached field instance; instances are never mutated after construction."""
    return GF(p, k)
