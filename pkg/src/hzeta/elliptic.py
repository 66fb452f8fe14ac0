"""Elliptic curves y^2 = x^3 + a x + b over finite fields.

Point counts by enumeration, Frobenius traces, group structure, exact-order
torsion counts psi_n, Frobenius orbits on torsion, and the per-prime checks of
the torsion factorization of the curve's zeta function.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import poly
from .arith import count_exact_order, divisors, factorize, moebius, p_part
from .certificate import Certificate
from .errors import DomainError, InternalInconsistency, ResourceLimitError
from .ffield import GF, field as gf
from .localzeta import LocalFactor, closed_point_counts, from_point_counts

ENUMERATION_BUDGET = 10**6
ORBIT_DEGREE_CAP = 24


@dataclass(frozen=True)
class Curve:
    a: int
    b: int
    extra_bad_primes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.discriminant == 0:
            raise DomainError(f"y^2 = x^3 + {self.a}x + {self.b} is singular")

    @property
    def discriminant(self) -> int:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @functools.cached_property
    def bad_primes(self) -> frozenset[int]:
        # 2 and 3 always: the short Weierstrass model is not reliable there
        return frozenset({2, 3, *factorize(abs(self.discriminant)).primes, *self.extra_bad_primes})

    def is_good(self, p: int) -> bool:
        return p not in self.bad_primes

    def __str__(self):
        return f"y^2 = x^3 {self.a:+d}x {self.b:+d}"


def _check_good(curve: Curve, p: int, nu: int = 1) -> None:
    if not curve.is_good(p):
        raise DomainError(f"p={p} is a bad prime for {curve}")
    if nu < 1:
        raise DomainError("extension degree must be >= 1")
    if p**nu > ENUMERATION_BUDGET:
        raise ResourceLimitError(f"{p}^{nu} exceeds the enumeration budget {ENUMERATION_BUDGET}")


# -- enumeration -------------------------------------------------------------------


def _rhs(F: GF, curve: Curve, x: np.ndarray) -> np.ndarray:
    x3 = F.vpow(x, 3)
    ax = F.vmul(x, F.embed(curve.a))
    return F.vadd(F.vadd(x3, ax), F.embed(curve.b))


def count_points_enum(curve: Curve, p: int, nu: int = 1) -> int:
    """|E(F_{p^nu})| including the point at infinity, by running over every x."""
    _check_good(curve, p, nu)
    F = gf(p, nu)
    xs = F.elements()
    ys = F.elements()
    # number of y with y^2 = c, for every c
    root_counts = np.bincount(F.vmul(ys, ys), minlength=F.q)
    return 1 + int(root_counts[_rhs(F, curve, xs)].sum())


def _half_points(curve: Curve, p: int, nu: int) -> tuple[np.ndarray, np.ndarray]:
    # one point (x, y) per x-coordinate on the curve
    F = gf(p, nu)
    xs = F.elements()
    square, root = F.vsqrt(_rhs(F, curve, xs))
    return xs[square], root[square]


def affine_points(curve: Curve, p: int, nu: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """All affine points of E(F_{p^nu}) as coordinate arrays."""
    _check_good(curve, p, nu)
    x0, r0 = _half_points(curve, p, nu)
    nonzero = r0 != 0
    x = np.concatenate([x0, x0[nonzero]])
    y = np.concatenate([r0, gf(p, nu).vneg(r0[nonzero])])
    return x, y


# -- vectorized group law ------------------------------------------------------------


def _ec_add(F: GF, a: int, P, Q):
    x1, y1, i1 = P
    x2, y2, i2 = Q
    same_x = x1 == x2
    doubling = same_x & (y1 == y2) & (y1 != 0)
    generic = ~same_x
    num = np.where(generic, F.vsub(y2, y1), F.vadd(F.vmul(3 % F.p, F.vmul(x1, x1)), a))
    den = np.where(generic, F.vsub(x2, x1), F.vmul(2, y1))
    lam = F.vmul(num, F.vinv(den))
    x3 = F.vsub(F.vsub(F.vmul(lam, lam), x1), x2)
    y3 = F.vsub(F.vmul(lam, F.vsub(x1, x3)), y1)
    inf3 = same_x & ~doubling
    # infinity operands
    x3 = np.where(i1, x2, np.where(i2, x1, x3))
    y3 = np.where(i1, y2, np.where(i2, y1, y3))
    inf3 = np.where(i1, i2, np.where(i2, i1, inf3))
    return x3, y3, inf3


def _ec_scalar(F: GF, a: int, P, k: int):
    x, y, inf = P
    result = (np.zeros_like(x), np.zeros_like(y), np.ones_like(inf))
    base = P
    while k:
        if k & 1:
            result = _ec_add(F, a, result, base)
        k >>= 1
        if k:
            base = _ec_add(F, a, base, base)
    return result


# -- Frobenius data ------------------------------------------------------------------


@dataclass(frozen=True)
class FrobeniusData:
    """Trace a_p of Frobenius; everything else follows from the recurrence
    s_v = a_p s_{v-1} - p s_{v-2}, s_0 = 2, s_1 = a_p, N_v = p^v + 1 - s_v."""

    p: int
    a_p: int

    def __post_init__(self):
        if self.a_p**2 > 4 * self.p:
            raise InternalInconsistency(f"Hasse bound violated: a_p={self.a_p}, p={self.p}")

    def power_sum(self, nu: int) -> int:
        s_prev, s = 2, self.a_p
        if nu == 0:
            return 2
        for _ in range(nu - 1):
            s_prev, s = s, self.a_p * s - self.p * s_prev
        return s

    def count(self, nu: int) -> int:
        n = self.p**nu + 1 - self.power_sum(nu)
        if n < 1:
            raise InternalInconsistency(f"N_{nu} = {n} is not positive at p={self.p}")
        return n

    def counts(self, degree: int) -> list[int]:
        return [self.count(nu) for nu in range(1, degree + 1)]

    @property
    def is_ordinary(self) -> bool:
        return self.a_p % self.p != 0

    def eigenvalues(self) -> tuple[complex, complex]:
        """Roots of T^2 - a_p T + p, both of absolute value sqrt(p)."""
        disc = cmath.sqrt(self.a_p**2 - 4 * self.p)
        return (self.a_p + disc) / 2, (self.a_p - disc) / 2

    def characteristic_polynomial(self) -> tuple[int, ...]:
        """1 - a_p T + p T^2."""
        return (1, -self.a_p, self.p)

    def local_factor(self) -> LocalFactor:
        """(1 - a_p T + p T^2) / ((1 - T)(1 - p T)), the zeta factor of E at p."""
        return LocalFactor(self.p, self.characteristic_polynomial(), (1, -(self.p + 1), self.p))


def frobenius_data(curve: Curve, p: int) -> FrobeniusData:
    return FrobeniusData(p, p + 1 - count_points_enum(curve, p, 1))


# -- group structure -----------------------------------------------------------------


@dataclass(frozen=True)
class GroupStructure:
    """E(F_q) = Z/d1 x Z/d2 with d1 | d2."""

    q: int
    d1: int
    d2: int

    def __post_init__(self):
        if self.d2 % self.d1 or (self.q - 1) % self.d1:
            raise InternalInconsistency(f"impossible group structure {self}")

    @property
    def order(self) -> int:
        return self.d1 * self.d2

    def exact_order_count(self, n: int) -> int:
        return count_exact_order(self.d1, self.d2, n)


@functools.lru_cache(maxsize=4096)
def group_structure(curve: Curve, p: int, nu: int = 1, method: str = "torsion") -> GroupStructure:
    """Invariants d1 | d2 of E(F_{p^nu}).

    ``method="exponent"`` takes d2 as the lcm of all point orders, found by pushing
    every point into each l-primary part and multiplying by l until it dies.
    ``method="torsion"`` (default) uses that d1 divides q - 1 and d1^2 divides N,
    and for each prime l allowed by that finds the largest k with all l^k-torsion
    rational, by counting the points killed by l^k.
    """
    _check_good(curve, p, nu)
    F = gf(p, nu)
    q = F.q
    n_points = count_points_enum(curve, p, nu)
    x, y = _half_points(curve, p, nu)
    # P and -P share their order: act on one of each pair, weight 2 unless y = 0
    weight = np.where(y == 0, 1, 2)
    if int(weight.sum()) + 1 != n_points:
        raise InternalInconsistency("point listing disagrees with the point count")
    a = F.embed(curve.a)
    pts = (x, y, np.zeros(len(x), dtype=bool))
    if method == "exponent":
        d2 = 1
        for l, e in factorize(n_points).parts:
            cur = _ec_scalar(F, a, pts, n_points // l**e)
            k = 0
            while not cur[2].all():
                cur = _ec_scalar(F, a, cur, l)
                k += 1
                if k > e:
                    raise InternalInconsistency(f"a point has order not dividing N={n_points}")
            d2 *= l**k
        d1 = n_points // d2
    elif method == "torsion":
        d1 = 1
        exponents = factorize(n_points).as_dict()
        for l, _ in factorize(math.gcd(n_points, q - 1)).parts:
            k = 0
            cur = pts
            while 2 * (k + 1) <= exponents[l] and (q - 1) % l ** (k + 1) == 0:
                if l == 2 and k == 0:
                    # rational 2-torsion: the roots of x^3 + ax + b, i.e. the points with y = 0
                    killed = 1 + int((y == 0).sum())
                else:
                    cur = _ec_scalar(F, a, cur, l)
                    killed = 1 + int(weight[cur[2]].sum())
                if killed != l ** (2 * (k + 1)):
                    break
                k += 1
                if l == 2 and k == 1:
                    cur = _ec_scalar(F, a, cur, 2)
            d1 *= l**k
        d2 = n_points // d1
    else:
        raise DomainError(f"unknown method {method!r}")
    return GroupStructure(q, d1, d2)


def psi_E(curve: Curve, n: int, p: int, nu: int = 1) -> int:
    """Number of F_{p^nu}-rational points of exact order n (p | n allowed: these are
    the etale points)."""
    if n < 1:
        raise DomainError("order must be positive")
    return group_structure(curve, p, nu).exact_order_count(n)


# -- point counts, group structure and l-parts ---------------------------------------------------


def verify_eq4_local(curve: Curve, p: int, nu: int = 1) -> Certificate:
    fd = frobenius_data(curve, p)
    gs = group_structure(curve, p, nu)
    n_enum = count_points_enum(curve, p, nu)
    n_rec = fd.count(nu)
    cert = Certificate("eq4", {"a": curve.a, "b": curve.b, "p": p, "nu": nu},
                       info={"a_p": fd.a_p, "d1": gs.d1, "d2": gs.d2, "ordinary": fd.is_ordinary})
    case = {"p": p, "nu": nu}
    cert.add({**case, "check": "hasse"}, True, fd.a_p**2 <= 4 * p)
    cert.add({**case, "check": "enumeration=recurrence"}, n_rec, n_enum)
    lam1, lam2 = fd.eigenvalues()
    cert.add({**case, "check": "|lambda|=sqrt(p)"}, math.sqrt(p),
             max(abs(lam1), abs(lam2)), tolerance=1e-9 * p)
    eig_product = (lam1**nu - 1) * (lam2**nu - 1)
    cert.add({**case, "check": "prod(lambda^nu - 1)"}, n_rec, eig_product.real,
             tolerance=1e-6 * max(1, n_rec))
    psi = {n: gs.exact_order_count(n) for n in divisors(gs.d2)}
    cert.add({**case, "check": "sum_n psi_n"}, n_rec, sum(psi.values()))
    for l in sorted(set(factorize(n_enum).primes) | {p}):
        l_sum = sum(v for n, v in psi.items() if p_part(n, l) == n)
        cert.add({**case, "check": "l-part", "l": l}, p_part(n_enum, l), l_sum)
    return cert


# -- Frobenius orbits on exact-order-n torsion -------------------------------------------


@dataclass(frozen=True)
class TorsionOrbitSet:
    """c_d = number of Frobenius orbits of size d on the exact-order-n points of E over
    the algebraic closure of F_p (etale points only when p | n)."""

    n: int
    p: int
    orbit_counts: dict[int, int]
    closure_total: int
    levels: int
    complete: bool = True

    @property
    def counted(self) -> int:
        return sum(d * c for d, c in self.orbit_counts.items())

    def count(self, d: int) -> int:
        return self.orbit_counts.get(d, 0)


def closure_total(curve: Curve, n: int, p: int) -> int:
    """Exact-order-n points over the algebraic closure.

    Prime to p this is n-torsion (Z/n)^2; the p-primary etale part is Z/p^k when
    the reduction is ordinary and trivial when supersingular.
    """
    k = 0
    m = n
    while m % p == 0:
        m //= p
        k += 1
    if k and not frobenius_data(curve, p).is_ordinary:
        return 0
    return count_exact_order(m, m * p**k, n)


def torsion_orbits(curve: Curve, n: int, p: int, d_cap: int = ORBIT_DEGREE_CAP,
                   *, strict: bool = True) -> TorsionOrbitSet:
    """Frobenius orbit sizes on exact-order-n torsion by Moebius inversion of psi_n(p^v).

    Stops once the orbits account for every point over the closure. If d_cap or the
    enumeration budget is reached first, raises ResourceLimitError carrying the
    incomplete result, or returns it (complete=False) when strict is False.
    """
    _check_good(curve, p)
    total = closure_total(curve, n, p)
    m: dict[int, int] = {}
    counts: dict[int, int] = {}
    counted = 0
    nu = 0
    while counted < total:
        if nu + 1 > d_cap or p ** (nu + 1) > ENUMERATION_BUDGET:
            partial = TorsionOrbitSet(n, p, counts, total, nu, complete=False)
            if strict:
                raise ResourceLimitError(
                    f"orbits on order-{n} points at p={p} not exhausted by degree {nu}", partial
                )
            return partial
        nu += 1
        m[nu] = psi_E(curve, n, p, nu)
        acc = sum(moebius(nu // e) * m[e] for e in divisors(nu))
        if acc % nu or acc < 0:
            raise InternalInconsistency(f"{acc}/{nu} orbits of size {nu} on order-{n} points at p={p}")
        if acc:
            counts[nu] = acc // nu
            counted += acc
    if counted != total:
        raise InternalInconsistency(f"orbits cover {counted} points, closure has {total}")
    return TorsionOrbitSet(n, p, counts, total, nu)


# -- local factor as a product of torsion-orbit factors -------------------------------------------


def verify_eq13_local(curve: Curve, p: int, degree: int) -> Certificate:
    """Local zeta factor of E at p == prod over n of the orbit factors prod_d (1 - T^d)^-c_d(n),
    as power series through T^degree; equivalently b_d(E) = sum_n c_d(n)."""
    _check_good(curve, p, max(degree, 1))
    fd = frobenius_data(curve, p)
    cert = Certificate("eq13", {"a": curve.a, "b": curve.b, "p": p, "degree": degree})
    lhs = fd.local_factor().expand(degree)
    enum_counts = [count_points_enum(curve, p, nu) for nu in range(1, degree + 1)]
    cert.add({"check": "zeta factor from enumerated counts"}, lhs.coefficients,
             from_point_counts(p, enum_counts).coefficients)
    orders = sorted({n for nu in range(1, degree + 1) for n in divisors(group_structure(curve, p, nu).d2)})
    orders = orders or [1]
    denominator: tuple[int, ...] = (1,)
    per_degree = [0] * (degree + 1)
    factors = {}
    for n in orders:
        orbits = torsion_orbits(curve, n, p, d_cap=degree, strict=False)
        for d, c in orbits.orbit_counts.items():
            denominator = poly.mul(denominator, poly.power(poly.one_minus_t_power(d), c), degree)
            per_degree[d] += c
        factors[n] = dict(orbits.orbit_counts)
    rhs = LocalFactor(p, (1,), denominator).expand(degree)
    for k in range(degree + 1):
        cert.add({"check": "coefficient", "k": k}, lhs[k], rhs[k])
    closed = closed_point_counts(p, fd.counts(degree))
    for d in range(1, degree + 1):
        cert.add({"check": "closed points", "d": d}, closed[d - 1], per_degree[d])
    cert.info.update({"a_p": fd.a_p, "orders": orders, "orbit_counts": factors})
    return cert
