"""Open subschemes U of P^N over Z, cut into torus cells and torsion-order strata.

A point of P^N with support I (the set of nonzero coordinates) lies in a torus
G_m^M, M = |I| - 1, after scaling its first nonzero coordinate to 1. Over a
finite field every torus coordinate is a root of unity, so the cell splits
further by the tuple j of coordinate orders. The tuples with lcm(j) = n form
the stratum mu*_{j_1} x ... x mu*_{j_M}, whose points are permuted by the
diagonal action of (Z/n)^x; ``verify_eq30_local`` checks how those orbits
behave under Frobenius at p.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import poly
from .arith import divisors, euler_phi, is_prime, lcm, multiplicative_order
from .certificate import Certificate
from .errors import DomainError, InternalInconsistency, ResourceLimitError
from .ffield import GF, field as gf
from .localzeta import LocalFactor

ENUMERATION_BUDGET = 10**8
MAX_PAREN_DEPTH = 4
CHUNK = 1 << 20
# frobenius_orbit_degree checks every orbit when there are at most this many unit tuples
ORBIT_CHECK_LIMIT = 10**5


# -- homogeneous polynomials ---------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial in x0..x{nvars-1}; terms are (exponents, coefficient), sorted."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_dict(cls, nvars: int, coeffs: dict) -> "Polynomial":
        return cls(nvars, tuple(sorted((e, c) for e, c in coeffs.items() if c)))

    @property
    def degrees(self) -> set[int]:
        return {sum(e) for e, _ in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    def __call__(self, point: Sequence[int]) -> int:
        return sum(c * math.prod(x**k for x, k in zip(point, e)) for e, c in self.terms)

    def evaluate(self, F: GF, coords: Sequence[np.ndarray]) -> np.ndarray:
        """Values over the field F at points given coordinatewise."""
        out = np.zeros(len(coords[0]), dtype=np.int64)
        for e, c in self.terms:
            c = F.embed(c)
            if c == 0:
                continue
            val = np.full(len(out), c, dtype=np.int64)
            for x, k in zip(coords, e):
                if k:
                    val = F.vmul(val, F.vpow(x, k))
            out = F.vadd(out, val)
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(.))")


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    """Parse integer infix (+ - * ^, parentheses) in the variables x0..x{nvars-1}."""
    tokens = []
    for num, var, op in _TOKEN.findall(text.strip()):
        if num:
            tokens.append(("num", int(num)))
        elif var:
            if int(var) >= nvars:
                raise DomainError(f"x{var} is not among x0..x{nvars - 1}")
            tokens.append(("var", int(var)))
        elif op in "+-*^()":
            tokens.append(("op", op))
        elif op.strip():
            raise DomainError(f"unexpected character {op!r} in {text!r}")
    pos = 0
    zero = (0,) * nvars

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def mul(a, b):
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return out

    def expr(depth):
        out = term(depth)
        while peek() in (("op", "+"), ("op", "-")):
            sign = 1 if take()[1] == "+" else -1
            for e, c in term(depth).items():
                out[e] = out.get(e, 0) + sign * c
        return out

    def term(depth):
        out = unary(depth)
        while peek() == ("op", "*"):
            take()
            out = mul(out, unary(depth))
        return out

    def unary(depth):
        if peek() == ("op", "-"):
            take()
            return {e: -c for e, c in unary(depth).items()}
        return power(depth)

    def power(depth):
        base = atom(depth)
        if peek() == ("op", "^"):
            take()
            kind, k = take() if pos < len(tokens) else (None, None)
            if kind != "num":
                raise DomainError(f"exponent must be a nonnegative integer in {text!r}")
            out = {zero: 1}
            for _ in range(k):
                out = mul(out, base)
            return out
        return base

    def atom(depth):
        kind, val = take() if pos < len(tokens) else (None, None)
        if kind == "num":
            return {zero: val}
        if kind == "var":
            return {tuple(int(i == val) for i in range(nvars)): 1}
        if (kind, val) == ("op", "("):
            if depth + 1 > MAX_PAREN_DEPTH:
                raise DomainError(f"parentheses nested deeper than {MAX_PAREN_DEPTH} in {text!r}")
            out = expr(depth + 1)
            if peek() != ("op", ")"):
                raise DomainError(f"unbalanced parentheses in {text!r}")
            take()
            return out
        raise DomainError(f"cannot parse {text!r}")

    if not tokens:
        raise DomainError("empty polynomial")
    result = expr(0)
    if pos != len(tokens):
        raise DomainError(f"trailing input in {text!r}")
    return Polynomial.from_dict(nvars, result)


@dataclass(frozen=True)
class OpenSubschemeSpec:
    """U = P^N minus the common zeros of the forbidden polynomials.

    A point is in U when some forbidden polynomial is nonzero there, so an empty
    list gives the empty scheme and [1] gives all of P^N.
    """

    N: int
    forbidden: tuple[Polynomial, ...]
    name: str = ""

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("ambient dimension must be at least 1")
        object.__setattr__(self, "forbidden", tuple(self.forbidden))
        for f in self.forbidden:
            if f.nvars != self.N + 1:
                raise DomainError(f"{f} is not a polynomial in x0..x{self.N}")
            if not f.is_homogeneous:
                raise DomainError(f"{f} is not homogeneous")

    @classmethod
    def from_strings(cls, N: int, polys: Sequence[str], name: str = "") -> "OpenSubschemeSpec":
        return cls(N, tuple(parse_polynomial(s, N + 1) for s in polys), name)

    @classmethod
    def from_text(cls, text: str, name: str = "") -> "OpenSubschemeSpec":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise DomainError("subscheme spec needs the ambient dimension on its first line")
        try:
            N = int(lines[0])
        except ValueError:
            raise DomainError(f"first line must be the dimension N, got {lines[0]!r}") from None
        return cls.from_strings(N, lines[1:], name)

    @classmethod
    def load(cls, path) -> "OpenSubschemeSpec":
        path = Path(path)
        return cls.from_text(path.read_text(), path.stem)

    def contains(self, F: GF, coords: Sequence[np.ndarray]) -> np.ndarray:
        inside = np.zeros(len(coords[0]), dtype=bool)
        for f in self.forbidden:
            inside |= f.evaluate(F, coords) != 0
        return inside

    def __str__(self):
        body = ", ".join(str(f) for f in self.forbidden)
        return f"P^{self.N} \\ V({body})"


def projective_space(N: int) -> OpenSubschemeSpec:
    return OpenSubschemeSpec.from_strings(N, ["1"], f"P{N}")


def gm_in_p1() -> OpenSubschemeSpec:
    return OpenSubschemeSpec.from_strings(1, ["x0*x1"], "Gm")


# -- enumeration helpers --------------------------------------------------------------------


def _grid(values: Sequence[np.ndarray]) -> Iterator[list[np.ndarray]]:
    """Chunks of the Cartesian product of the given value lists, coordinatewise."""
    sizes = [len(v) for v in values]
    total = math.prod(sizes)
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        coords = []
        for v, size in zip(reversed(values), reversed(sizes)):
            coords.append(v[idx % size])
            idx //= size
        yield coords[::-1]


def _count_members(U: OpenSubschemeSpec, F: GF, values: Sequence[np.ndarray]) -> int:
    return sum(int(U.contains(F, c).sum()) for c in _grid(values))


def _check_budget(U: OpenSubschemeSpec, p: int, d: int) -> GF:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if d < 1:
        raise DomainError("degree must be positive")
    if (p**d) ** (U.N + 1) > ENUMERATION_BUDGET:
        raise ResourceLimitError(
            f"({p}^{d})^{U.N + 1} exceeds the enumeration budget {ENUMERATION_BUDGET}"
        )
    return gf(p, d)


def count_points(U: OpenSubschemeSpec, p: int, d: int = 1) -> int:
    """|U(F_{p^d})| over representatives whose first nonzero coordinate is 1."""
    F = _check_budget(U, p, d)
    zero, one, every = np.array([0]), np.array([1]), F.elements()
    return sum(
        _count_members(U, F, [zero] * lead + [one] + [every] * (U.N - lead))
        for lead in range(U.N + 1)
    )


def _cone_count(U: OpenSubschemeSpec, F: GF) -> tuple[int, int]:
    # members of the affine cone minus the origin; U is stable under scaling
    every = F.elements()
    members = _count_members(U, F, [every] * (U.N + 1))
    origin = int(U.contains(F, [np.array([0])] * (U.N + 1))[0])
    return divmod(members - origin, F.q - 1)


def supports(N: int) -> list[tuple[int, ...]]:
    """Nonempty subsets of {0..N}, by size then lexicographically."""
    return [s for M in range(N + 1) for s in itertools.combinations(range(N + 1), M + 1)]


def _cell_values(F: GF, N: int, support: Sequence[int], free: Sequence[np.ndarray]):
    # coordinates for points with the given support: first support coordinate 1
    values = [np.array([0])] * (N + 1)
    values[support[0]] = np.array([1])
    for i, v in zip(support[1:], free):
        values[i] = v
    return values


def _order_class(F: GF, m: int) -> np.ndarray:
    """Elements of F^x of exact multiplicative order m (m | q - 1)."""
    step = (F.q - 1) // m
    return F.exp[np.array([k * step for k in range(m) if math.gcd(k, m) == 1], dtype=np.int64)]


# -- order tuples and diagonal orbits -------------------------------------------------------------


@dataclass(frozen=True)
class OrderTuple:
    j: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "j", tuple(self.j))
        if any(x < 1 for x in self.j):
            raise DomainError(f"orders must be positive: {self.j}")
        if lcm(*self.j) != self.n:
            raise DomainError(f"lcm{self.j} != {self.n}")

    @classmethod
    def of(cls, j: Sequence[int]) -> "OrderTuple":
        return cls(tuple(j), lcm(*j))


def enumerate_Jn(n: int, M: int) -> list[OrderTuple]:
    """M-tuples of divisors of n with lcm exactly n, in lexicographic order."""
    if n < 1 or M < 0:
        raise DomainError("need n >= 1 and M >= 0")
    return [OrderTuple(j, n) for j in itertools.product(divisors(n), repeat=M) if lcm(*j) == n]


def _unit_tuples(j: Sequence[int]) -> np.ndarray:
    """All (a_1..a_M) with a_i a unit mod j_i (a_i = 0 when j_i = 1), one row each."""
    units = [[a for a in range(m) if math.gcd(a, m) == 1] for m in j]
    if not j:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.array(list(itertools.product(*units)), dtype=np.int64)
    return grid.reshape(-1, len(j))


def _orbit_labels(tuples: np.ndarray, j: Sequence[int], multipliers: Sequence[int]) -> np.ndarray:
    # label each tuple by the smallest mixed-radix code in its orbit under the multipliers
    mod = np.array(j, dtype=np.int64)
    radix = np.array([math.prod(j[i + 1 :]) for i in range(len(j))], dtype=np.int64)
    labels = None
    for u in multipliers:
        codes = ((tuples * u) % mod) @ radix if len(j) else np.zeros(len(tuples), dtype=np.int64)
        labels = codes if labels is None else np.minimum(labels, codes)
    return labels


@dataclass(frozen=True)
class DiagonalOrbitDecomposition:
    """Orbits of (Z/n)^x acting diagonally on unit tuples mod (j_1..j_M)."""

    j: tuple[int, ...]
    n: int
    orbits: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def global_orbits(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def frobenius_degree(self, p: int) -> int:
        return frobenius_orbit_degree(self.j, p)


def diagonal_orbits(j: Sequence[int] | OrderTuple) -> DiagonalOrbitDecomposition:
    jt = OrderTuple.of(j.j if isinstance(j, OrderTuple) else j)
    tuples = _unit_tuples(jt.j)
    units = [u for u in range(max(jt.n, 1)) if math.gcd(u, jt.n) == 1]
    labels = _orbit_labels(tuples, jt.j, units)
    orbits = []
    for label in np.unique(labels):
        members = tuples[labels == label]
        orbits.append(tuple(tuple(int(x) for x in row) for row in members))
    phi_n = euler_phi(jt.n)
    sizes = [len(o) for o in orbits]
    if sum(sizes) != math.prod(euler_phi(m) for m in jt.j):
        raise InternalInconsistency(f"orbits of {jt.j} do not partition the unit tuples")
    if any(phi_n % s for s in sizes):
        raise InternalInconsistency(f"orbit sizes {sizes} do not divide phi({jt.n})={phi_n}")
    return DiagonalOrbitDecomposition(jt.j, jt.n, tuple(orbits))


def _frobenius_labels(tuples: np.ndarray, j: Sequence[int], p: int, f: int, n: int) -> np.ndarray:
    return _orbit_labels(tuples, j, [pow(p, k, n) for k in range(f)])


def frobenius_orbit_degree(j: Sequence[int] | OrderTuple, p: int) -> int:
    """ord_n(p), n = lcm(j); checks that every <p>-orbit on the unit tuples has that size."""
    jt = OrderTuple.of(j.j if isinstance(j, OrderTuple) else j)
    if jt.n % p == 0:
        raise DomainError(f"p={p} divides n={jt.n}")
    f = multiplicative_order(p, jt.n)
    if math.prod(euler_phi(m) for m in jt.j) <= ORBIT_CHECK_LIMIT:
        labels = _frobenius_labels(_unit_tuples(jt.j), jt.j, p, f, jt.n)
        sizes = set(np.unique(labels, return_counts=True)[1].tolist())
        if sizes != {f}:
            raise InternalInconsistency(f"<{p}>-orbits on units of {jt.j} have sizes {sizes}, not {f}")
    return f


# -- cells and order tuples ------------------------------------------------------------------------


def verify_stratification(U: OpenSubschemeSpec, p: int, d: int = 1) -> Certificate:
    """|U(F_q)| three ways: normalized representatives (also against the affine cone),
    the sum over torus cells, and the sum over coordinate order tuples."""
    F = _check_budget(U, p, d)
    q = F.q
    cert = Certificate("eq27-29", {"spec": str(U), "p": p, "d": d})
    direct = count_points(U, p, d)
    cone, remainder = _cone_count(U, F)
    cert.add({"check": "representatives = affine cone / (q-1)"}, direct, cone if not remainder else None)
    units = F.exp.astype(np.int64)
    cells = {}
    by_order: dict[int, int] = {}
    for support in supports(U.N):
        M = len(support) - 1
        cells[support] = _count_members(U, F, _cell_values(F, U.N, support, [units] * M))
        strata = 0
        for n in divisors(q - 1):
            for jt in enumerate_Jn(n, M):
                free = [_order_class(F, m) for m in jt.j]
                c = _count_members(U, F, _cell_values(F, U.N, support, free))
                by_order[n] = by_order.get(n, 0) + c
                strata += c
        cert.add({"check": "cell = sum over order tuples", "support": list(support)}, cells[support], strata)
    cert.add({"check": "direct = sum over cells"}, direct, sum(cells.values()))
    cert.add({"check": "direct = sum over n, j in J_n"}, direct, sum(by_order.values()))
    cert.info.update({
        "q": q,
        "count": direct,
        "cells": {",".join(map(str, s)): c for s, c in cells.items()},
        "by_order": by_order,
    })
    return cert


# -- diagonal orbits and their Frobenius splitting -----------------------------------------------------


@functools.lru_cache(maxsize=16)
def _torus_profile(U: OpenSubschemeSpec, p: int, f: int, cell: tuple[int, ...]):
    # coordinate orders and U-membership for every point of the torus of the cell over F_{p^f}
    F = gf(p, f)
    M = len(cell) - 1
    units = F.exp.astype(np.int64)
    orders, inside = [], []
    for coords in _grid(_cell_values(F, U.N, cell, [units] * M)):
        orders.append(np.stack([F.vorder(coords[i]) for i in cell[1:]]) if M else np.zeros((0, len(coords[0]))))
        inside.append(U.contains(F, coords))
    return np.concatenate(orders, axis=1), np.concatenate(inside)


def stratum_count(U: OpenSubschemeSpec, j: Sequence[int], p: int, f: int, cell: Sequence[int]) -> tuple[int, int]:
    """(points, U-members) of the cell's torus over F_{p^f} whose coordinate orders are j."""
    orders, inside = _torus_profile(U, p, f, tuple(cell))
    match = np.all(orders == np.array(j, dtype=np.int64)[:, None], axis=0)
    return int(match.sum()), int((match & inside).sum())


def verify_eq30_local(U: OpenSubschemeSpec, j: Sequence[int], p: int,
                      cell: Sequence[int] | None = None) -> Certificate:
    """Split the stratum of order tuple j into diagonal orbits alpha and check the
    Frobenius behaviour of each at p; the Euler factor of U_alpha is (1 - T^f)^(-m/f)
    with m the number of members of U in alpha."""
    cell = tuple(range(U.N + 1)) if cell is None else tuple(cell)
    if len(cell) < 1 or len(set(cell)) != len(cell) or not all(0 <= i <= U.N for i in cell):
        raise DomainError(f"invalid cell support {cell} in P^{U.N}")
    cell = tuple(sorted(cell))
    jt = OrderTuple.of(j)
    if len(jt.j) != len(cell) - 1:
        raise DomainError(f"cell {cell} has {len(cell) - 1} torus coordinates, got j={jt.j}")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if jt.n % p == 0:
        raise DomainError(f"p={p} divides n={jt.n}")
    f = multiplicative_order(p, jt.n)
    q = p**f
    if (q - 1) ** (len(cell) - 1) > ENUMERATION_BUDGET:
        raise ResourceLimitError(f"torus over F_{p}^{f} exceeds the enumeration budget")
    F = gf(p, f)
    decomposition = diagonal_orbits(jt)
    cert = Certificate("eq30", {"spec": str(U), "j": list(jt.j), "p": p, "cell": list(cell)},
                       info={"n": jt.n, "f": f})
    members_total = 0
    factors = []
    records = []
    violations = []
    for index, orbit in enumerate(decomposition.orbits):
        tuples = np.array(orbit, dtype=np.int64).reshape(len(orbit), len(jt.j))
        # a_i -> zeta^(a_i n / j_i), zeta of order n in F_{p^f}; equivalently g^(a_i (q-1)/j_i)
        free = [F.exp[(tuples[:, i] * ((q - 1) // m)) % (q - 1)] for i, m in enumerate(jt.j)]
        values = _cell_values(F, U.N, cell, free)
        coords = [np.broadcast_to(v, (len(orbit),)) for v in values]
        inside = U.contains(F, coords)
        labels = _frobenius_labels(tuples, jt.j, p, f, jt.n)
        keys, inverse, sizes = np.unique(labels, return_inverse=True, return_counts=True)
        lo = np.ones(len(keys), dtype=bool)
        hi = np.zeros(len(keys), dtype=bool)
        np.logical_and.at(lo, inverse, inside)
        np.logical_or.at(hi, inverse, inside)
        uniform = bool(np.all(sizes == f))
        constant = bool(np.all(lo == hi))
        cert.add({"alpha": index, "check": "frobenius orbits have size f"}, True, uniform)
        cert.add({"alpha": index, "check": "membership constant on frobenius orbits"}, True, constant)
        if not (uniform and constant):
            violations.append(index)
        m = int(inside.sum())
        members_total += m
        factor = LocalFactor(p, (1,), poly.power(poly.one_minus_t_power(f), m // f))
        factors.append(factor)
        records.append({"size": len(orbit), "members": m, "factor": factor})
    points, members = stratum_count(U, jt.j, p, f, cell)
    cert.add({"check": "stratum size = sum of orbit sizes"}, points, sum(decomposition.global_orbits))
    cert.add({"check": "U-members by enumeration = sum over orbits"}, members, members_total)
    product = LocalFactor(p)
    for factor in factors:
        product = product * factor
    cert.info.update({"orbits": records, "local_factor": product})
    if violations:
        raise InternalInconsistency(
            f"Frobenius orbits on the stratum {jt.j} at p={p} break Galois equivariance "
            f"in orbits {violations}"
        )
    return cert


def stratum_local_factor(U: OpenSubschemeSpec, j: Sequence[int], p: int,
                         cell: Sequence[int] | None = None) -> LocalFactor:
    return verify_eq30_local(U, j, p, cell).info["local_factor"]


def torus_strata(U: OpenSubschemeSpec, p: int, d: int) -> list[tuple[tuple[int, ...], OrderTuple]]:
    """(cell, j) for every order tuple with a point over F_{p^d}, over cells of dimension >= 1."""
    q = p**d
    return [
        (cell, jt)
        for cell in supports(U.N)
        if len(cell) > 1
        for n in divisors(q - 1)
        for jt in enumerate_Jn(n, len(cell) - 1)
    ]
