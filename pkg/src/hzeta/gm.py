"""The multiplicative group G_m over Z and its splitting into cyclotomic pieces.

Exact-order-n points of G_m are the primitive n-th roots of unity, so the
closed points of G_m over F_p group by the fields Q(zeta_n). The local checks
here are exact; ``verify_eq8_global`` compares truncated Euler products with
zeta values summed directly from the Dirichlet series.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import poly
from .arith import divisors, euler_phi, factorize, is_prime, multiplicative_order, primes_up_to
from .certificate import Certificate
from .characters import characters, dirichlet_L
from .errors import DomainError, InternalInconsistency
from .ffield import distinct_degree_factorization
from .localzeta import (
    EulerProduct,
    LocalFactor,
    PowerSeries,
    closed_point_counts,
    cyclotomic_local_factor,
    evaluate,
)

ZETA_TERMS = 10**6
# the complete per-prime regrouping must land this close to zeta(s-1)/zeta(s),
# or within the proven prime-tail bound when that is larger
REGROUPING_TOLERANCE = 1e-3
# literal product of L(chi, s) over characters, compared against the regrouped sum
LITERAL_N_MAX = 12
LITERAL_PRIME_BOUND = 500


@dataclass(frozen=True)
class SystemProfile:
    """Rank d, weight w and exceptional primes S of a compatible system."""

    name: str
    d: int
    w: int
    bad_primes: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.d < 1 or self.w < 0:
            raise DomainError(f"need d >= 1 and w >= 0, got d={self.d}, w={self.w}")


GM_PROFILE = SystemProfile("G_m", d=1, w=2)


@dataclass(frozen=True)
class HorizontalComponent:
    """The closure of the exact-order-n points: spec Z[1/n, zeta_n] over Q."""

    n: int
    field_degree: int
    removed_primes: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if euler_phi(self.n) % self.field_degree:
            raise DomainError(f"field degree {self.field_degree} does not divide phi({self.n})")


def horizontal_component(n: int) -> HorizontalComponent:
    # over Q the primitive n-th roots form a single Galois orbit
    return HorizontalComponent(n, euler_phi(n), factorize(n).primes)


def psi_gm(n: int, p: int, nu: int = 1) -> int:
    """Elements of exact order n in F_{p^nu}^x."""
    if n < 1 or nu < 1:
        raise DomainError("n and nu must be positive")
    return euler_phi(n) if (p**nu - 1) % n == 0 else 0


def verify_gm_local_partition(p: int, D: int) -> Certificate:
    """Closed points of G_m over F_p of degree d, grouped by the exact order n of their roots."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if not 1 <= D <= 8:
        raise DomainError(f"degree bound must be in 1..8, got {D}")
    cert = Certificate("gm_partition", {"p": p, "D": D})
    counts = [p**nu - 1 for nu in range(1, D + 1)]
    for nu, n_points in enumerate(counts, 1):
        total = sum(psi_gm(n, p, nu) for n in divisors(n_points))
        cert.add({"p": p, "nu": nu, "check": "sum_n psi_n"}, n_points, total)
    closed = closed_point_counts(p, counts)
    by_order = {}
    for d in range(1, D + 1):
        orders = [n for n in divisors(p**d - 1) if multiplicative_order(p, n) == d]
        share = sum((Fraction(euler_phi(n), d) for n in orders), Fraction(0))
        by_order[d] = {n: euler_phi(n) // d for n in orders}
        cert.add({"p": p, "d": d, "check": "closed points"}, closed[d - 1], share)
    cert.info["closed_points"] = closed
    cert.info["orbits_by_order"] = by_order
    return cert


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Phi_n as an integer coefficient tuple, constant term first."""
    if n < 1:
        raise DomainError("n must be positive")
    num = (-1,) + (0,) * (n - 1) + (1,)
    den: tuple[int, ...] = (1,)
    for d in divisors(n)[:-1]:
        den = poly.mul(den, cyclotomic_poly(d))
    quot, rem = poly.divmod_monic(num, den)
    if rem or poly.mul(quot, den) != num:
        raise InternalInconsistency(f"T^{n} - 1 is not divisible by the lower cyclotomic factors")
    if len(quot) - 1 != euler_phi(n) or quot[-1] != 1:
        raise InternalInconsistency(f"Phi_{n} is not monic of degree phi({n})")
    return quot


def phi_n_degrees_mod_p(n: int, p: int) -> list[int]:
    """Degrees of the irreducible factors of Phi_n over F_p, p not dividing n."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if n % p == 0:
        raise DomainError(f"p={p} divides n={n}")
    reduced = [c % p for c in cyclotomic_poly(n)]
    degrees = [d for d, count in distinct_degree_factorization(reduced, p) for _ in range(count)]
    f = multiplicative_order(p, n)
    if set(degrees) != {f} or sum(degrees) != euler_phi(n):
        raise InternalInconsistency(f"Phi_{n} mod {p} splits as {degrees}, expected degree {f} factors")
    return degrees


# -- global numerics ------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesValue:
    """A value known to lie in [lower, upper]; ``value`` is the midpoint."""

    lower: float
    upper: float

    @property
    def value(self) -> float:
        return (self.lower + self.upper) / 2

    @property
    def error(self) -> float:
        return (self.upper - self.lower) / 2


def zeta_series(sigma: float, terms: int = ZETA_TERMS) -> SeriesValue:
    """zeta(sigma) for sigma > 1 from sum_{k <= M} k^-sigma plus the integral tail bounds
    (M+1)^(1-sigma)/(sigma-1) <= tail <= M^(1-sigma)/(sigma-1)."""
    if not sigma > 1:
        raise DomainError(f"series diverges at sigma={sigma}")
    k = np.arange(terms, 0, -1, dtype=np.float64)  # smallest terms first
    partial = float(np.sum(k ** (-sigma)))
    lo = (terms + 1) ** (1 - sigma) / (sigma - 1)
    hi = terms ** (1 - sigma) / (sigma - 1)
    # rounding in the pairwise sum plus the power evaluations
    slack = (math.log2(terms) + 2) * 2.0**-52 * partial
    return SeriesValue(partial + lo - slack, partial + hi + slack)


def _regrouped_log(s: float, n_max: int, prime_bound: int) -> float:
    # log prod_{n <= n_max} prod_chi L_{<= P}(chi, s): for p not dividing n the characters
    # mod n collapse to (1 - p^-fs)^-(phi(n)/f), f = ord_n(p)
    phis = [0] + [euler_phi(n) for n in range(1, n_max + 1)]
    total = 0.0
    for p in primes_up_to(prime_bound):
        for n in range(1, n_max + 1):
            if n % p == 0:
                continue
            f = multiplicative_order(p, n)
            total -= phis[n] / f * math.log1p(-(p ** (-f * s)))
    return total


def character_product(s: float, n_max: int, prime_bound: int) -> float:
    """prod_{n <= n_max} prod_{chi mod n} L(chi, s), each L truncated to p <= prime_bound,
    multiplied out character by character."""
    out = 1 + 0j
    for n in range(1, n_max + 1):
        for chi in characters(n):
            out *= dirichlet_L(chi, s, prime_bound)
    return out.real


def verify_eq8_global(s: float, n_max: int, P: int) -> Certificate:
    """zeta(s-1)/zeta(s) against the doubly truncated product over n and p."""
    if not s > 2:
        raise DomainError(f"the product converges only for s > 2, got s={s}")
    if n_max < 1 or P < 2:
        raise DomainError("need n_max >= 1 and a prime bound >= 2")
    num, den = zeta_series(s - 1), zeta_series(s)
    target = num.value / den.value
    target_error = target * (num.error / num.value + den.error / den.value)
    rhs = math.exp(_regrouped_log(s, n_max, P))
    gap = abs(rhs - target)
    cert = Certificate("eq8", {"s": s, "n_max": n_max, "P": P},
                       info={"target": target, "target_error": target_error, "rhs": rhs, "gap": gap})
    if n_max >= 2:
        half = math.exp(_regrouped_log(s, n_max // 2, P))
        gap_half = abs(half - target)
        cert.info.update({"n_half": n_max // 2, "rhs_half": half, "gap_half": gap_half})
        cert.add({"check": "gap shrinks", "n_max": n_max, "n_half": n_max // 2},
                 gap_half, gap, passed=gap < gap_half)
    else:
        # only the trivial character: the product is zeta(s) cut at P
        cut = evaluate_zeta(s, P)
        cert.add({"check": "n_max=1 is truncated zeta(s)"}, cut, rhs, tolerance=1e-12 * cut)
    complete = 1.0
    for p in primes_up_to(P):
        complete *= (1 - p ** (-s)) / (1 - p ** (1 - s))
    # primes above P are missing from the product: their log contribution is at most
    # sum_{k > P} -log(1 - k^(1-s)) <= P^(2-s) / ((s-2)(1 - P^(1-s)))
    tail = P ** (2 - s) / ((s - 2) * (1 - P ** (1 - s)))
    tolerance = max(REGROUPING_TOLERANCE, target * math.expm1(tail))
    cert.info.update({"complete_regrouping": complete, "prime_tail_bound": tail})
    cert.add({"check": "complete regrouping", "P": P}, target, complete, tolerance=tolerance)
    small_n, small_p = min(n_max, LITERAL_N_MAX), min(P, LITERAL_PRIME_BOUND)
    literal = character_product(s, small_n, small_p)
    regrouped = math.exp(_regrouped_log(s, small_n, small_p))
    cert.add({"check": "character product = regrouped", "n_max": small_n, "P": small_p},
             literal, regrouped, tolerance=1e-12 * literal)
    return cert


# -- local exactness ----------------------------------------------------------------------


def gm_local_factor(p: int) -> LocalFactor:
    """Euler factor (1 - T)/(1 - pT) of G_m over Z at p."""
    return LocalFactor(p, (1, -1), (1, -p))


def verify_eq25_local(p: int, D: int, n_max: int) -> Certificate:
    """(1 - T)/(1 - pT) == prod_{n <= n_max} (factor of Q(zeta_n) at p) through T^D.

    Factors with p | n are removed (the exact-order-n locus has empty fibre at p);
    a factor whose residue degree exceeds D is 1 through T^D.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if D < 0:
        raise DomainError("degree must be nonnegative")
    if n_max < p**D - 1:
        raise DomainError(f"n_max={n_max} misses orders up to {p}^{D} - 1")
    lhs = gm_local_factor(p).expand(D)
    rhs = PowerSeries.one(D)
    used = {}
    for n in range(1, n_max + 1):
        if n % p == 0 or not any((p**f - 1) % n == 0 for f in range(1, D + 1)):
            continue
        factor = cyclotomic_local_factor(n, p)
        rhs = rhs * factor.expand(D)
        used[n] = multiplicative_order(p, n)
    cert = Certificate("eq25", {"p": p, "D": D, "n_max": n_max}, info={"residue_degrees": used})
    for k in range(D + 1):
        cert.add({"p": p, "coefficient": k}, lhs[k], rhs[k])
    return cert


def zeta_euler_product(prime_bound: int) -> EulerProduct:
    return EulerProduct("zeta", {p: LocalFactor(p, (1,), (1, -1)) for p in primes_up_to(prime_bound)}, 1)


def gm_euler_product(prime_bound: int) -> EulerProduct:
    return EulerProduct("G_m", {p: gm_local_factor(p) for p in primes_up_to(prime_bound)}, 2)


def cyclotomic_euler_product(n: int, prime_bound: int) -> EulerProduct:
    """Dedekind zeta of Q(zeta_n) with the factors at p | n removed."""
    return EulerProduct(
        f"Q(zeta_{n})",
        {p: cyclotomic_local_factor(n, p) for p in primes_up_to(prime_bound) if n % p},
        1,
    )


def evaluate_zeta(s: float, prime_bound: int) -> float:
    return evaluate(zeta_euler_product(prime_bound), s, prime_bound)
