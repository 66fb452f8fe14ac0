"""Exact elementary number theory.

Factorization, the multiplicative functions phi and mu, multiplicative orders,
the structure of the unit group (Z/n)^x, and counts of elements of exact order
in finite abelian groups Z/d1 x Z/d2.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

from .errors import DomainError

MAX_INPUT = 2**63 - 1

# Deterministic Miller-Rabin witnesses, valid for every n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_TRIAL_LIMIT = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(bound: int) -> list[int]:
    """All primes p <= bound (sieve of Eratosthenes)."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, bound + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


@dataclass(frozen=True)
class Factorization:
    value: int
    parts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.parts:
            if p <= last or e < 1 or not is_prime(p):
                raise DomainError(f"malformed factorization part {(p, e)}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise DomainError(f"parts multiply to {prod}, not {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.parts)

    def as_dict(self) -> dict[int, int]:
        return dict(self.parts)

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.parts:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


def _pollard_brent(n: int) -> int:
    # deterministic sequence of polynomial constants; n is odd, composite, not a prime power
    for c in itertools.count(1):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        m = 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise AssertionError("unreachable")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    root = math.isqrt(n)
    if root * root == n:
        _split(root, out)
        _split(root, out)
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


@functools.lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    """Prime factorization of 1 <= n <= 2**63 - 1.

    Trial division by small primes; any cofactor left over is certified prime by
    deterministic Miller-Rabin or split by Brent's variant of Pollard rho.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"factorize expects an int, got {type(n).__name__}")
    if n < 1 or n > MAX_INPUT:
        raise DomainError(f"factorize: {n} outside [1, 2**63 - 1]")
    found: dict[int, int] = {}
    m = n
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    _split(m, found)
    return Factorization(n, tuple(sorted(found.items())))


@functools.lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    return tuple(primes_up_to(_TRIAL_LIMIT))


def divisors(n: int) -> list[int]:
    return factorize(n).divisors()


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n).parts:
        result = result // p * (p - 1)
    return result


def moebius(n: int) -> int:
    parts = factorize(n).parts
    if any(e > 1 for _, e in parts):
        return 0
    return -1 if len(parts) % 2 else 1


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def multiplicative_order(a: int, n: int) -> int:
    """Smallest k >= 1 with a**k == 1 (mod n)."""
    if n < 1:
        raise DomainError("modulus must be positive")
    if math.gcd(a, n) != 1:
        raise DomainError(f"{a} is not a unit modulo {n}")
    if n == 1:
        return 1
    order = euler_phi(n)
    a %= n
    for q, _ in factorize(order).parts:
        while order % q == 0 and pow(a, order // q, n) == 1:
            order //= q
    return order


def _primitive_root_prime_power(p: int, k: int) -> int:
    # smallest primitive root mod p, lifted to p**k (p odd)
    phi_p = p - 1
    qs = factorize(phi_p).primes
    g = next(g for g in range(2, p + 1) if all(pow(g, phi_p // q, p) != 1 for q in qs)) if p > 2 else 1
    if k > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class UnitGroupStructure:
    """(Z/n)^x as an internal direct product of cyclic subgroups.

    ``generators`` lists (residue, order) pairs; every unit is uniquely
    prod(g_i ** e_i) with 0 <= e_i < order_i.
    """

    modulus: int
    generators: tuple[tuple[int, int], ...]

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(o for _, o in self.generators)

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    def element(self, exponents) -> int:
        n = self.modulus
        out = 1 % n
        for (g, _), e in zip(self.generators, exponents):
            out = out * pow(g, e, n) % n
        return out

    def dlog(self, a: int) -> tuple[int, ...]:
        """Exponent vector of the unit a (exhaustive table lookup)."""
        try:
            return _dlog_table(self)[a % self.modulus]
        except KeyError:
            raise DomainError(f"{a} is not a unit modulo {self.modulus}") from None


@functools.lru_cache(maxsize=256)
def _dlog_table(group: UnitGroupStructure) -> dict[int, tuple[int, ...]]:
    table = {}
    for exps in itertools.product(*(range(o) for o in group.orders)):
        table[group.element(exps)] = exps
    if len(table) != euler_phi(group.modulus):
        raise AssertionError(f"generators of (Z/{group.modulus})^x are not independent")
    return table


def _crt_lift(residue: int, modulus: int, full: int) -> int:
    # x = residue mod `modulus`, x = 1 mod full/modulus
    other = full // modulus
    if other == 1:
        return residue % full
    inv = pow(other, -1, modulus)
    return (1 + other * ((residue - 1) * inv % modulus)) % full


@functools.lru_cache(maxsize=1024)
def unit_group(n: int) -> UnitGroupStructure:
    """Generators of (Z/n)^x built prime power by prime power and glued by CRT."""
    if n < 1:
        raise DomainError("modulus must be positive")
    gens: list[tuple[int, int]] = []
    for p, k in factorize(n).parts:
        q = p**k
        if p == 2:
            if k == 2:
                gens.append((_crt_lift(3, q, n), 2))
            elif k >= 3:
                gens.append((_crt_lift(q - 1, q, n), 2))
                gens.append((_crt_lift(5, q, n), 2 ** (k - 2)))
        else:
            gens.append((_crt_lift(_primitive_root_prime_power(p, k), q, n), q - q // p))
    return UnitGroupStructure(n, tuple(gens))


def count_exact_order(d1: int, d2: int, n: int) -> int:
    """Number of elements of exact order n in Z/d1 x Z/d2 (requires d1 | d2)."""
    if d1 < 1 or d2 < 1 or n < 1:
        raise DomainError("group invariants and order must be positive")
    if d2 % d1:
        raise DomainError(f"{d1} does not divide {d2}")
    return sum(moebius(n // m) * math.gcd(m, d1) * math.gcd(m, d2) for m in divisors(n))


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out
