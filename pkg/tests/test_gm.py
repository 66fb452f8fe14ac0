import json
import math
from pathlib import Path

import mpmath
import pytest
from hypothesis import given, strategies as st

from hzeta.arith import divisors, euler_phi, primes_up_to
from hzeta.characters import character_sum
from hzeta.errors import DomainError
from hzeta.gm import (
    GM_PROFILE,
    HorizontalComponent,
    SystemProfile,
    character_product,
    cyclotomic_poly,
    gm_euler_product,
    gm_local_factor,
    horizontal_component,
    phi_n_degrees_mod_p,
    psi_gm,
    verify_eq8_global,
    verify_eq25_local,
    verify_gm_local_partition,
    zeta_series,
)
from hzeta.localzeta import closed_point_counts, evaluate

import oracles

GOLDEN = Path(__file__).parent / "golden"


def test_profile_and_components():
    assert (GM_PROFILE.d, GM_PROFILE.w, GM_PROFILE.bad_primes) == (1, 2, frozenset())
    with pytest.raises(DomainError):
        SystemProfile("bad", 0, 1)
    c = horizontal_component(12)
    assert (c.field_degree, c.removed_primes) == (4, (2, 3))
    with pytest.raises(DomainError):
        HorizontalComponent(7, 4)


def test_psi_examples():
    assert psi_gm(1, 3, 1) == 1
    assert psi_gm(8, 3, 2) == 4
    assert psi_gm(3, 3, 5) == 0


def _orders_in_extension(p, d):
    # multiplicative orders of all elements of GF(p^d)^x, by listing them
    F = oracles.SlowField(p, d)
    return [F.order(x) for x in F.elements() if x != F.zero]


@pytest.mark.parametrize("p,D", [(3, 2), (2, 1), (5, 4), (2, 6), (7, 3)])
def test_partition_against_enumerated_orders(p, D):
    cert = verify_gm_local_partition(p, D)
    assert cert.passed
    for d in range(1, D + 1):
        orders = _orders_in_extension(p, d) if p**d <= 700 else None
        if orders is None:
            continue
        # elements of GF(p^d) of degree exactly d, grouped into Frobenius orbits of size d
        new = [n for n in orders if oracles.order_mod(p, n) == d]
        assert cert.info["closed_points"][d - 1] == len(new) // d


def test_partition_examples():
    cert = verify_gm_local_partition(3, 2)
    assert cert.info["closed_points"] == [2, 3]
    assert cert.info["orbits_by_order"][2] == {4: 1, 8: 2}
    assert verify_gm_local_partition(2, 1).info["closed_points"] == [1]


def test_partition_domain():
    with pytest.raises(DomainError):
        verify_gm_local_partition(4, 2)
    with pytest.raises(DomainError):
        verify_gm_local_partition(3, 9)


@pytest.mark.parametrize("n", range(1, 80))
def test_cyclotomic_poly_against_sympy(n):
    assert cyclotomic_poly(n) == oracles.cyclotomic(n)


def test_cyclotomic_examples():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_phi_n_degrees_examples():
    assert phi_n_degrees_mod_p(12, 5) == [2, 2]
    assert phi_n_degrees_mod_p(1, 2) == [1]
    assert phi_n_degrees_mod_p(7, 2) == [3, 3]
    with pytest.raises(DomainError):
        phi_n_degrees_mod_p(6, 2)


@given(st.integers(1, 90), st.sampled_from(primes_up_to(40)))
def test_phi_n_degrees_property(n, p):
    if n % p == 0:
        return
    degrees = phi_n_degrees_mod_p(n, p)
    assert len(set(degrees)) == 1 and sum(degrees) == euler_phi(n)
    assert degrees == oracles.cyclotomic_factor_degrees(n, p)


@given(st.sampled_from(primes_up_to(50)), st.integers(1, 6))
def test_psi_partition(p, nu):
    assert sum(psi_gm(n, p, nu) for n in divisors(p**nu - 1)) == p**nu - 1


@given(st.integers(1, 200), st.integers(1, 200), st.sampled_from(primes_up_to(30)), st.integers(1, 4))
def test_psi_multiplicative(n, m, p, nu):
    if math.gcd(n, m) == 1:
        assert psi_gm(n * m, p, nu) == psi_gm(n, p, nu) * psi_gm(m, p, nu)


@given(st.integers(1, 60), st.sampled_from(primes_up_to(30)), st.integers(1, 3))
def test_psi_is_character_sum(n, p, nu):
    if n % p:
        assert abs(psi_gm(n, p, nu) - character_sum(n, p**nu)) < 1e-6


def test_zeta_series_against_mpmath():
    for sigma in (2.0, 3.0, 4.5):
        z = zeta_series(sigma)
        assert z.lower <= float(mpmath.zeta(sigma)) <= z.upper
        assert z.error < 1e-6


def test_eq8_target_at_three():
    cert = verify_eq8_global(3, 4, 100)
    assert cert.info["target"] == pytest.approx(1.368432, abs=1e-6)
    assert cert.info["target"] == pytest.approx(float(mpmath.zeta(2) / mpmath.zeta(3)), abs=1e-11)


def test_eq8_with_only_trivial_character():
    cert = verify_eq8_global(3, 1, 100)
    assert cert.passed
    expected = math.prod(1 / (1 - p**-3.0) for p in primes_up_to(100))
    assert cert.info["rhs"] == pytest.approx(expected, rel=1e-13)


def test_eq8_golden_s4():
    golden = json.loads((GOLDEN / "eq8.json").read_text())
    cert = verify_eq8_global(golden["s"], golden["n_max"], golden["P"])
    assert cert.passed
    assert cert.info["gap"] < cert.info["gap_half"]
    for key in ("rhs", "rhs_half", "complete_regrouping"):
        assert cert.info[key] == pytest.approx(golden[key], rel=1e-12)
    assert cert.info["target"] == pytest.approx(golden["target_mpmath"], rel=1e-12)


def test_eq8_literal_character_product():
    # the regrouped fast path equals the character-by-character product
    lit = character_product(3.5, 10, 200)
    cert = verify_eq8_global(3.5, 10, 200)
    assert cert.info["rhs"] == pytest.approx(lit, rel=1e-12)


def test_eq8_domain():
    with pytest.raises(DomainError):
        verify_eq8_global(2, 10, 100)


def test_eq25_examples():
    cert = verify_eq25_local(2, 3, 7)
    assert cert.passed and cert.info["residue_degrees"] == {1: 1, 3: 2, 7: 3}
    cert = verify_eq25_local(3, 2, 8)
    assert cert.passed and sorted(cert.info["residue_degrees"]) == [1, 2, 4, 8]
    assert verify_eq25_local(2, 0, 0).passed
    with pytest.raises(DomainError):
        verify_eq25_local(3, 2, 7)


@pytest.mark.parametrize("p", primes_up_to(13))
def test_eq25_small_primes(p):
    for D in range(5):
        cert = verify_eq25_local(p, D, p**D - 1)
        assert cert.passed
        expected = oracles.series_coefficients((1 - oracles.T) / (1 - p * oracles.T), D) if D else [1]
        assert [c.expected for c in cert.checks] == expected


def test_gm_local_factor_counts():
    assert gm_local_factor(5).point_counts(4) == [4, 24, 124, 624]
    assert closed_point_counts(5, gm_local_factor(5).point_counts(3)) == [4, 10, 40]


def test_gm_euler_product_value():
    # zeta(s-1)/zeta(s) at s = 4, truncated at 1000
    value = evaluate(gm_euler_product(1000), 4.0, 1000)
    assert value == pytest.approx(float(mpmath.zeta(3) / mpmath.zeta(4)), rel=1e-6)
