"""Independent reference implementations for the tests.

Nothing here imports hzeta: finite fields are plain tuples of coefficients,
elliptic-curve groups are listed point by point, and number-theoretic
functions come from sympy.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import sympy
from sympy.abc import T


# -- number theory ---------------------------------------------------------------------


def phi(n):
    return int(sympy.totient(n))


def mu(n):
    return int(sympy.mobius(n))


def order_mod(a, n):
    if n == 1:
        return 1
    return int(sympy.n_order(a, n))


def cyclotomic(n):
    """Coefficients of Phi_n, constant term first."""
    return tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(n, T), T).all_coeffs()))


def cyclotomic_factor_degrees(n, p):
    _, factors = sympy.Poly(sympy.cyclotomic_poly(n, T), T, modulus=p).factor_list()
    return sorted(f.degree() for f, e in factors for _ in range(e))


def series_coefficients(expr, degree):
    s = sympy.series(expr, T, 0, degree + 1).removeO()
    return [int(s.coeff(T, k)) for k in range(degree + 1)]


def one_minus_t_power_expansion(f, g):
    return [int(c) for c in reversed(sympy.Poly(sympy.expand((1 - T**f) ** g), T).all_coeffs())]


# -- finite fields as coefficient tuples --------------------------------------------------


class SlowField:
    """GF(p^k) as tuples of k coefficients modulo some irreducible polynomial."""

    def __init__(self, p, k=1):
        self.p, self.k, self.q = p, k, p**k
        self.modulus = self._irreducible()
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)

    def _irreducible(self):
        if self.k == 1:
            return None
        for low in itertools.product(range(self.p), repeat=self.k):
            coeffs = [1] + list(reversed(low))  # leading coefficient first
            if sympy.Poly(coeffs, T, modulus=self.p).is_irreducible:
                return list(low)  # x^k = -sum low_i x^i
        raise AssertionError("no irreducible polynomial")

    def elements(self):
        return list(itertools.product(range(self.p), repeat=self.k))

    def from_int(self, c):
        return (c % self.p,) + (0,) * (self.k - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        for d in range(len(prod) - 1, self.k - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for i, m in enumerate(self.modulus):
                    prod[d - self.k + i] -= c * m
        return tuple(c % self.p for c in prod[: self.k])

    def pow(self, a, e):
        out = self.one
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError
        out, base, e = self.one, a, self.q - 2
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def order(self, a):
        k, x = 1, a
        while x != self.one:
            x = self.mul(x, a)
            k += 1
        return k


# -- elliptic curves by listing the group ------------------------------------------------------


class SlowCurve:
    INF = None

    def __init__(self, a, b, p, k=1):
        self.F = F = SlowField(p, k)
        self.a, self.b = F.from_int(a), F.from_int(b)
        self.points = [self.INF]
        for x in F.elements():
            rhs = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(self.a, x)), self.b)
            for y in F.elements():
                if F.mul(y, y) == rhs:
                    self.points.append((x, y))

    def add(self, P, Q):
        F = self.F
        if P is None:
            return Q
        if Q is None:
            return P
        (x1, y1), (x2, y2) = P, Q
        if x1 == x2 and F.add(y1, y2) == F.zero:
            return None
        if P == Q:
            num = F.add(F.mul(F.from_int(3), F.mul(x1, x1)), self.a)
            lam = F.mul(num, F.inv(F.mul(F.from_int(2), y1)))
        else:
            lam = F.mul(F.sub(y2, y1), F.inv(F.sub(x2, x1)))
        x3 = F.sub(F.sub(F.mul(lam, lam), x1), x2)
        return x3, F.sub(F.mul(lam, F.sub(x1, x3)), y1)

    def point_order(self, P):
        k, Q = 1, P
        while Q is not None:
            Q = self.add(Q, P)
            k += 1
        return k

    def orders(self):
        return [self.point_order(P) for P in self.points]

    def invariants(self):
        """(d1, d2) with the group Z/d1 x Z/d2, d1 | d2."""
        d2 = math.lcm(*self.orders())
        return len(self.points) // d2, d2


@lru_cache(maxsize=None)
def slow_curve(a, b, p, k=1):
    return SlowCurve(a, b, p, k)


def exact_order_pairs(d1, d2, n):
    """Elements of exact order n in Z/d1 x Z/d2 by listing them."""
    return sum(
        1
        for x in range(d1)
        for y in range(d2)
        if math.lcm(d1 // math.gcd(x, d1), d2 // math.gcd(y, d2)) == n
    )


# -- projective point counts ---------------------------------------------------------------------


def projective_points(F: SlowField, N: int):
    for lead in range(N + 1):
        for rest in itertools.product(F.elements(), repeat=N - lead):
            yield (F.zero,) * lead + (F.one,) + rest


def eval_poly(F: SlowField, terms, point):
    """terms: list of (coefficient, exponent tuple)."""
    total = F.zero
    for c, e in terms:
        val = F.from_int(c)
        for x, k in zip(point, e):
            val = F.mul(val, F.pow(x, k))
        total = F.add(total, val)
    return total
