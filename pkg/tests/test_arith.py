import itertools
import math

import pytest
import sympy
from hypothesis import given, strategies as st

from hzeta.arith import (
    MAX_INPUT,
    count_exact_order,
    divisors,
    euler_phi,
    factorize,
    is_prime,
    lcm,
    moebius,
    multiplicative_order,
    p_part,
    primes_up_to,
    unit_group,
)
from hzeta.errors import DomainError

import oracles


def test_small_values():
    assert factorize(1).parts == ()
    assert factorize(360).as_dict() == {2: 3, 3: 2, 5: 1}
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert [euler_phi(n) for n in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
    assert [moebius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(5, 12) == 2


def test_primes_up_to_matches_sympy():
    assert primes_up_to(1000) == list(sympy.primerange(2, 1001))
    assert primes_up_to(1) == []


def test_large_factorization():
    assert factorize(2**61 - 1).parts == ((2**61 - 1, 1),)
    big = 1_000_000_007 * 998_244_353
    assert factorize(big).as_dict() == {998_244_353: 1, 1_000_000_007: 1}
    assert factorize(MAX_INPUT).value == MAX_INPUT


@pytest.mark.parametrize("bad", [0, -3, MAX_INPUT + 1])
def test_factorize_domain(bad):
    with pytest.raises(DomainError):
        factorize(bad)


def test_order_needs_unit():
    with pytest.raises(DomainError):
        multiplicative_order(2, 8)


@given(st.integers(1, 10**12))
def test_factorization_reassembles(n):
    f = factorize(n)
    assert math.prod(q**e for q, e in f.parts) == n
    assert all(is_prime(q) for q in f.primes)
    assert f.as_dict() == {int(q): e for q, e in sympy.factorint(n).items()}


@given(st.integers(1, 5000))
def test_phi_and_mu_against_oracle(n):
    assert euler_phi(n) == oracles.phi(n)
    assert moebius(n) == oracles.mu(n)
    assert sum(euler_phi(d) for d in divisors(n)) == n
    assert sum(moebius(d) for d in divisors(n)) == (n == 1)


@given(st.integers(1, 400), st.integers(1, 400))
def test_phi_multiplicative(a, b):
    if math.gcd(a, b) == 1:
        assert euler_phi(a * b) == euler_phi(a) * euler_phi(b)


@given(st.integers(2, 3000), st.integers(1, 10**6))
def test_order_against_oracle(n, a):
    if math.gcd(a, n) == 1:
        assert multiplicative_order(a, n) == oracles.order_mod(a, n)


@given(st.integers(1, 600))
def test_unit_group(n):
    g = unit_group(n)
    assert g.size == euler_phi(n)
    units = sorted(g.element(e) for e in itertools.product(*(range(o) for o in g.orders)))
    assert units == [a for a in range(n) if math.gcd(a, n) == 1] or n == 1
    for a in units[:20]:
        assert g.element(g.dlog(a)) == a
    for residue, order in g.generators:
        assert multiplicative_order(residue, n) == order


@given(st.integers(1, 30), st.integers(1, 6), st.integers(1, 60))
def test_count_exact_order(d1, k, n):
    d2 = d1 * k
    assert count_exact_order(d1, d2, n) == oracles.exact_order_pairs(d1, d2, n)


def test_count_exact_order_needs_divisibility():
    with pytest.raises(DomainError):
        count_exact_order(2, 3, 1)


def test_lcm_and_p_part():
    assert lcm() == 1
    assert lcm(4, 6) == 12
    assert p_part(360, 2) == 8
    assert p_part(7, 2) == 1
