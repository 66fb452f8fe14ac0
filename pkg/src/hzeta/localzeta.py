"""Euler factors as exact rational functions in T = p**-s.

The formal side (power-series expansion, point counts <-> zeta coefficients,
closed-point counts) is exact integer arithmetic. Only ``evaluate`` drops to
double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import poly
from .arith import divisors, euler_phi, is_prime, moebius, multiplicative_order
from .errors import DomainError, InconsistencyError, PoleError


@dataclass(frozen=True)
class PowerSeries:
    """Truncated power series c_0 + c_1 T + ... + c_D T^D."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not self.coefficients:
            raise DomainError("a power series needs at least the constant coefficient")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k):
        return self.coefficients[k]

    def __len__(self):
        return len(self.coefficients)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        d = min(self.degree, other.degree)
        prod = poly.mul(self.coefficients, other.coefficients, d)
        return PowerSeries(prod + (0,) * (d + 1 - len(prod)))

    def truncate(self, degree: int) -> "PowerSeries":
        if degree > self.degree:
            raise DomainError(f"cannot extend a degree-{self.degree} series to degree {degree}")
        return PowerSeries(self.coefficients[: degree + 1])

    @classmethod
    def one(cls, degree: int) -> "PowerSeries":
        return cls((1,) + (0,) * degree)


@dataclass(frozen=True)
class LocalFactor:
    """numerator(T) / denominator(T) at the prime p, both with constant term 1."""

    p: int
    numerator: tuple[int, ...] = (1,)
    denominator: tuple[int, ...] = (1,)

    def __post_init__(self):
        num = poly.trim(self.numerator)
        den = poly.trim(self.denominator)
        if not den:
            raise DomainError("denominator is the zero polynomial")
        if not num or num[0] != 1 or den[0] != 1:
            raise DomainError("numerator and denominator must have constant term 1")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    def __mul__(self, other: "LocalFactor") -> "LocalFactor":
        if other.p != self.p:
            raise DomainError(f"cannot multiply factors at {self.p} and {other.p}")
        return LocalFactor(
            self.p,
            poly.mul(self.numerator, other.numerator),
            poly.mul(self.denominator, other.denominator),
        )

    def expand(self, degree: int) -> PowerSeries:
        return expand(self, degree)

    def point_counts(self, degree: int) -> list[int]:
        """N_1..N_degree with this factor = exp(sum N_v T^v / v)."""
        return point_counts_from_series(self.expand(degree))

    def value(self, t: float) -> float:
        den = poly.evaluate(self.denominator, t)
        if den == 0:
            raise PoleError(f"factor at p={self.p} has a pole at T={t}")
        return poly.evaluate(self.numerator, t) / den

    def __str__(self):
        return f"({poly.to_string(self.numerator)})/({poly.to_string(self.denominator)})"

    def to_dict(self):
        return {"p": self.p, "numerator": list(self.numerator), "denominator": list(self.denominator)}


def expand(f: LocalFactor, degree: int) -> PowerSeries:
    """Exact power-series expansion of f through T**degree (long division)."""
    if degree < 0:
        raise DomainError("degree must be nonnegative")
    num, den = f.numerator, f.denominator
    out = []
    for k in range(degree + 1):
        c = num[k] if k < len(num) else 0
        for i in range(1, min(k, len(den) - 1) + 1):
            c -= den[i] * out[k - i]
        out.append(c)  # den[0] == 1
    return PowerSeries(out)


def from_point_counts(p: int, counts: Sequence[int]) -> PowerSeries:
    """Coefficients of exp(sum_v N_v T^v / v) through degree len(counts).

    Uses k c_k = sum_{v=1..k} N_v c_{k-v}; a remainder in that division means the
    counts cannot come from a variety over F_p.
    """
    counts = list(counts)
    if any(int(c) != c or c < 0 for c in counts):
        raise DomainError("point counts must be nonnegative integers")
    coeffs = [1]
    for k in range(1, len(counts) + 1):
        acc = sum(counts[v - 1] * coeffs[k - v] for v in range(1, k + 1))
        q, r = divmod(acc, k)
        if r:
            raise InconsistencyError(
                f"p={p}: coefficient of T^{k} is {Fraction(acc, k)}, not an integer"
            )
        coeffs.append(q)
    return PowerSeries(coeffs)


def point_counts_from_series(series: PowerSeries) -> list[int]:
    """Inverse of from_point_counts: N_k = k c_k - sum_{v<k} N_v c_{k-v} (needs c_0 = 1)."""
    c = series.coefficients
    if c[0] != 1:
        raise DomainError("series must have constant term 1")
    counts: list[int] = []
    for k in range(1, len(c)):
        counts.append(k * c[k] - sum(counts[v - 1] * c[k - v] for v in range(1, k)))
    return counts


def closed_point_counts(p: int, counts: Sequence[int]) -> list[int]:
    """Closed points of each degree: b_d = (1/d) sum_{e | d} mu(d/e) N_e."""
    out = []
    for d in range(1, len(counts) + 1):
        acc = sum(moebius(d // e) * counts[e - 1] for e in divisors(d))
        if acc % d or acc < 0:
            raise InconsistencyError(
                f"p={p}: {Fraction(acc, d)} closed points of degree {d} from counts {list(counts)}"
            )
        out.append(acc // d)
    return out


def counts_from_closed_points(closed: Sequence[int]) -> list[int]:
    """N_v = sum_{d | v} d b_d."""
    return [sum(d * closed[d - 1] for d in divisors(v)) for v in range(1, len(closed) + 1)]


def cyclotomic_local_factor(n: int, p: int) -> LocalFactor:
    """Euler factor at p (p not dividing n) of the Dedekind zeta function of Q(zeta_n).

    p splits into g = phi(n)/f primes of residue degree f = ord_n(p).
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if n % p == 0:
        raise DomainError(f"p={p} divides n={n}; that Euler factor is removed, not computed here")
    f = multiplicative_order(p, n)
    g = euler_phi(n) // f
    return LocalFactor(p, (1,), poly.power(poly.one_minus_t_power(f), g))


@dataclass
class EulerProduct:
    """A finite collection of Euler factors with a claimed half-plane of convergence."""

    label: str
    factors: Mapping[int, LocalFactor] = field(default_factory=dict)
    abscissa: Fraction = Fraction(1)

    def __post_init__(self):
        self.abscissa = Fraction(self.abscissa)
        for p, f in self.factors.items():
            if f.p != p:
                raise DomainError(f"factor for prime {f.p} stored under key {p}")


def evaluate(product: EulerProduct, s: float, prime_bound: int) -> float:
    """prod_{p <= prime_bound} factor_p(p**-s) in double precision.

    Primes without a stored factor contribute 1.
    """
    if not s > product.abscissa:
        raise DomainError(f"s={s} is not to the right of the abscissa {product.abscissa}")
    log_total = 0.0
    sign = 1.0
    for p in sorted(product.factors):
        if p > prime_bound:
            break
        v = product.factors[p].value(p ** (-s))
        if v == 0:
            return 0.0
        if v < 0:
            sign = -sign
        log_total += math.log(abs(v))
    return sign * math.exp(log_total)
