"""Dirichlet characters modulo n and their Euler factors.

A character is an exponent vector against the generators of ``unit_group(n)``:
chi(g_i) = exp(2 pi i e_i / ord(g_i)).
"""

from __future__ import annotations

import cmath
import itertools
import math

import mpmath
from dataclasses import dataclass
from fractions import Fraction

from . import poly
from .arith import euler_phi, lcm, multiplicative_order, primes_up_to, unit_group
from .certificate import Certificate
from .errors import DomainError

EQ7_TOLERANCE = 1e-9
# Coefficients of (1 - T^f)^g reach binomial(g, g/2) ~ 1e9 for moduli near 100,
# beyond what doubles resolve at 1e-9, so the character product runs in fixed-point
# complex arithmetic with this many fractional bits.
FIXED_POINT_BITS = 128


def root_of_unity(angle: Fraction) -> complex:
    """exp(2 pi i * angle); exact for angles that are multiples of 1/4."""
    angle = angle % 1
    if (4 * angle).denominator == 1:
        return (1, 1j, -1, -1j)[int(4 * angle)]
    return cmath.exp(2j * math.pi * float(angle))


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        orders = unit_group(self.modulus).orders
        if len(self.exponents) != len(orders) or not all(
            0 <= e < o for e, o in zip(self.exponents, orders)
        ):
            raise DomainError(f"exponents {self.exponents} invalid for generator orders {orders}")

    def angle(self, a: int) -> Fraction | None:
        """chi(a) = exp(2 pi i * angle), or None when a is not a unit."""
        if math.gcd(a, self.modulus) != 1:
            return None
        group = unit_group(self.modulus)
        logs = group.dlog(a)
        return sum(
            (Fraction(e * l, o) for e, l, o in zip(self.exponents, logs, group.orders)), Fraction(0)
        ) % 1

    def __call__(self, a: int) -> complex:
        return chi_value(self, a)

    @property
    def order(self) -> int:
        orders = unit_group(self.modulus).orders
        return lcm(*(o // math.gcd(o, e) for e, o in zip(self.exponents, orders)))

    @property
    def is_trivial(self) -> bool:
        return not any(self.exponents)


def characters(n: int) -> list[DirichletCharacter]:
    """All phi(n) characters mod n, lexicographic in the exponent vector."""
    if n < 1:
        raise DomainError("modulus must be positive")
    orders = unit_group(n).orders
    return [DirichletCharacter(n, e) for e in itertools.product(*(range(o) for o in orders))]


def chi_value(chi: DirichletCharacter, a: int) -> complex:
    angle = chi.angle(a)
    if angle is None:
        return 0j
    return complex(root_of_unity(angle))


@dataclass(frozen=True)
class ComplexLocalFactor:
    """(1 - c T)^-1 for a complex constant c."""

    p: int
    c: complex

    def value(self, t: float) -> complex:
        return 1 / (1 - self.c * t)


def dirichlet_local_factor(chi: DirichletCharacter, p: int) -> ComplexLocalFactor:
    return ComplexLocalFactor(p, chi_value(chi, p))


def dirichlet_L(chi: DirichletCharacter, s: float, prime_bound: int) -> complex:
    """Euler product of L(chi, s) over primes p <= prime_bound not dividing the modulus."""
    if not s > 1:
        raise DomainError(f"L(chi, s) is only evaluated for real s > 1, got {s}")
    out = 1 + 0j
    for p in primes_up_to(prime_bound):
        if chi.modulus % p:
            out *= dirichlet_local_factor(chi, p).value(p ** (-s))
    return out


def character_sum(n: int, a: int) -> complex:
    return sum((chi_value(chi, a) for chi in characters(n)), 0j)


def _fixed_polymul(a, b):
    # a, b: lists of (re, im) integers scaled by 2**FIXED_POINT_BITS
    out = [[0, 0] for _ in range(len(a) + len(b) - 1)]
    for i, (xr, xi) in enumerate(a):
        for j, (yr, yi) in enumerate(b):
            acc = out[i + j]
            acc[0] += xr * yr - xi * yi
            acc[1] += xr * yi + xi * yr
    return [(re >> FIXED_POINT_BITS, im >> FIXED_POINT_BITS) for re, im in out]


def _fixed_root(angle: Fraction) -> tuple[int, int]:
    one = 1 << FIXED_POINT_BITS
    if (4 * angle).denominator == 1:
        return ((one, 0), (0, one), (-one, 0), (0, -one))[int(4 * angle)]
    with mpmath.workprec(FIXED_POINT_BITS + 32):
        z = mpmath.expjpi(2 * mpmath.mpf(angle.numerator) / angle.denominator)
        return int(mpmath.nint(z.real * one)), int(mpmath.nint(z.imag * one))


def _linear_product(angles) -> list[complex]:
    """Coefficients of prod (1 - exp(2 pi i a) T) over the given angles.

    Product tree over the angles sorted and split by even/odd position, so each
    subtree holds nearly equally spaced roots of unity with a small product.
    """
    angles = sorted(a % 1 for a in angles)
    one = 1 << FIXED_POINT_BITS
    roots = {a: _fixed_root(a) for a in set(angles)}

    def build(vals):
        if len(vals) == 1:
            re, im = roots[vals[0]]
            return [(one, 0), (-re, -im)]
        return _fixed_polymul(build(vals[0::2]), build(vals[1::2]))

    coeffs = build(angles) if angles else [(one, 0)]
    return [complex(float(Fraction(re, one)), float(Fraction(im, one))) for re, im in coeffs]


def verify_eq7_local(n: int, p: int) -> Certificate:
    """Check prod_chi (1 - chi(p) T) == (1 - T^f)^(phi(n)/f), f = ord_n(p), coefficientwise."""
    if n % p == 0:
        raise DomainError(f"p={p} divides n={n}")
    f = multiplicative_order(p, n)
    g = euler_phi(n) // f
    exact = poly.power(poly.one_minus_t_power(f), g)
    lhs = _linear_product([chi.angle(p) for chi in characters(n)])
    cert = Certificate("eq7", {"n": n, "p": p}, info={"f": f, "g": g})
    for k, c in enumerate(lhs):
        expected = exact[k] if k < len(exact) else 0
        cert.add({"coefficient": k}, expected, c, tolerance=EQ7_TOLERANCE)
    return cert
