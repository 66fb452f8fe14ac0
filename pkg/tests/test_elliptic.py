import math

import pytest
from hypothesis import given, strategies as st

from hzeta.arith import divisors, factorize, primes_up_to
from hzeta.elliptic import (
    Curve,
    FrobeniusData,
    affine_points,
    closure_total,
    count_points_enum,
    frobenius_data,
    group_structure,
    psi_E,
    torsion_orbits,
    verify_eq4_local,
    verify_eq13_local,
)
from hzeta.errors import DomainError, InternalInconsistency, ResourceLimitError
from hzeta.ffield import field

import oracles

E11 = Curve(1, 1)
E10 = Curve(-1, 0)
SMALL_CURVES = [(1, 1), (-1, 0), (0, 1), (2, 3), (-2, 1), (3, 5)]


def test_curve_basics():
    assert E11.discriminant == -16 * 31
    assert E11.bad_primes == {2, 3, 31}
    assert not E10.is_good(2) and E10.is_good(5)
    with pytest.raises(DomainError):
        Curve(0, 0)
    with pytest.raises(DomainError):
        count_points_enum(E11, 31)


def test_count_examples():
    assert count_points_enum(E11, 5, 1) == 9
    assert count_points_enum(E11, 5, 2) == 27
    assert frobenius_data(E11, 5).a_p == -3
    assert frobenius_data(E10, 5).a_p == -2
    assert frobenius_data(E10, 7).a_p == 0
    assert not frobenius_data(E10, 7).is_ordinary


def test_group_examples():
    assert group_structure(E11, 5) == group_structure(E11, 5, 1, "exponent")
    g = group_structure(E11, 5)
    assert (g.d1, g.d2) == (1, 9)
    g = group_structure(E10, 5)
    assert (g.d1, g.d2) == (2, 4)
    assert psi_E(E11, 3, 5) == 2
    assert psi_E(E11, 9, 5) == 6
    assert psi_E(E10, 1, 13, 2) == 1


def test_prime_order_group_is_cyclic():
    for p in primes_up_to(50):
        if E11.is_good(p):
            n = count_points_enum(E11, p)
            if factorize(n).parts == ((n, 1),):
                assert group_structure(E11, p).d1 == 1


@pytest.mark.parametrize("a,b", SMALL_CURVES)
@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23])
def test_group_against_listing(a, b, p):
    curve = Curve(a, b)
    if not curve.is_good(p):
        return
    slow = oracles.slow_curve(a, b, p)
    assert count_points_enum(curve, p) == len(slow.points)
    g = group_structure(curve, p)
    assert (g.d1, g.d2) == slow.invariants()
    orders = slow.orders()
    for n in divisors(g.d2):
        assert psi_E(curve, n, p) == orders.count(n)


@pytest.mark.parametrize("a,b,p", [(1, 1, 5), (-1, 0, 5), (-1, 0, 7), (0, 1, 5), (2, 3, 7), (-2, 1, 7)])
def test_group_over_quadratic_extension_against_listing(a, b, p):
    curve = Curve(a, b)
    slow = oracles.slow_curve(a, b, p, 2)
    g = group_structure(curve, p, 2)
    assert count_points_enum(curve, p, 2) == len(slow.points)
    assert (g.d1, g.d2) == slow.invariants()


@pytest.mark.parametrize("a,b,p,nu", [(1, 1, 5, 8), (-1, 0, 7, 5), (-1, 0, 13, 5), (0, 1, 11, 5), (-1, 0, 31, 4), (2, 3, 47, 3)])
def test_torsion_method_matches_exhaustive_exponent(a, b, p, nu):
    curve = Curve(a, b)
    assert group_structure(curve, p, nu) == group_structure(curve, p, nu, "exponent")


def test_affine_points_lie_on_curve():
    F = field(7, 2)
    x, y = affine_points(E10, 7, 2)
    lhs = F.vmul(y, y)
    rhs = F.vadd(F.vmul(F.vmul(x, x), x), F.vneg(x))
    assert (lhs == rhs).all()
    assert len(x) + 1 == count_points_enum(E10, 7, 2)


def test_frobenius_data_invariants():
    with pytest.raises(InternalInconsistency):
        FrobeniusData(5, 5)
    fd = frobenius_data(E11, 5)
    assert fd.counts(3) == [9, 27, 108]
    assert fd.local_factor().expand(2).coefficients == (1, 9, 54)


@given(st.sampled_from(SMALL_CURVES), st.sampled_from(primes_up_to(50)), st.integers(1, 4))
def test_enumeration_matches_recurrence(ab, p, nu):
    curve = Curve(*ab)
    if not curve.is_good(p) or p**nu > 10**6:
        return
    fd = frobenius_data(curve, p)
    assert fd.a_p**2 <= 4 * p
    assert count_points_enum(curve, p, nu) == fd.count(nu) > 0


@given(st.sampled_from(SMALL_CURVES), st.sampled_from(primes_up_to(30)), st.integers(1, 3),
       st.integers(1, 40), st.integers(1, 40))
def test_psi_multiplicative(ab, p, nu, n, m):
    curve = Curve(*ab)
    if not curve.is_good(p) or math.gcd(n, m) != 1:
        return
    assert psi_E(curve, n * m, p, nu) == psi_E(curve, n, p, nu) * psi_E(curve, m, p, nu)


@given(st.sampled_from(SMALL_CURVES), st.sampled_from(primes_up_to(50)), st.integers(1, 3))
def test_eq4_certificates(ab, p, nu):
    curve = Curve(*ab)
    if curve.is_good(p):
        cert = verify_eq4_local(curve, p, nu)
        assert cert.passed, cert.failures()


def test_eq4_example_details():
    cert = verify_eq4_local(E11, 5, 1)
    by_check = {c.case["check"] + str(c.case.get("l", "")): c for c in cert.checks}
    assert by_check["sum_n psi_n"].actual == 9
    assert by_check["l-part3"].actual == 9
    assert verify_eq4_local(E11, 5, 2).info["d1"] * verify_eq4_local(E11, 5, 2).info["d2"] == 27


def test_torsion_orbit_examples():
    assert torsion_orbits(E11, 1, 5).orbit_counts == {1: 1}
    t3 = torsion_orbits(E11, 3, 5)
    assert t3.closure_total == 8 and t3.count(1) == 2 and t3.counted == 8
    t9 = torsion_orbits(E11, 9, 5)
    assert t9.closure_total == 72 and t9.count(1) == 6
    assert t9.orbit_counts == {1: 6, 2: 6, 6: 9}


@given(st.sampled_from(SMALL_CURVES), st.sampled_from([5, 7, 11, 13]), st.integers(1, 12))
def test_closure_totals(ab, p, n):
    curve = Curve(*ab)
    if not curve.is_good(p):
        return
    if n % p:
        assert closure_total(curve, n, p) == sum(oracles.mu(n // m) * m * m for m in divisors(n))
    if n == p:
        assert closure_total(curve, p, p) == (p - 1 if frobenius_data(curve, p).is_ordinary else 0)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8, 10])
def test_torsion_orbits_fixed_points(n):
    # sum_{d | nu} d c_d equals the exact-order-n points over F_{p^nu}
    orbits = torsion_orbits(E10, n, 13, strict=False)
    for nu in range(1, orbits.levels + 1):
        fixed = sum(d * c for d, c in orbits.orbit_counts.items() if nu % d == 0)
        assert fixed == psi_E(E10, n, 13, nu)


def test_torsion_orbits_resource_limit():
    with pytest.raises(ResourceLimitError) as info:
        torsion_orbits(E11, 7, 5, d_cap=2)
    assert info.value.partial is not None and not info.value.partial.complete
    partial = torsion_orbits(E11, 7, 5, d_cap=2, strict=False)
    assert not partial.complete and partial.levels == 2


def test_eq13_examples():
    cert = verify_eq13_local(E11, 5, 1)
    closed = [c for c in cert.checks if c.case["check"] == "closed points"]
    assert closed[0].expected == 9 and cert.passed
    cert = verify_eq13_local(E11, 5, 2)
    assert [c.expected for c in cert.checks if c.case["check"] == "closed points"] == [9, 9]
    assert cert.passed
    assert verify_eq13_local(E11, 5, 0).passed


@pytest.mark.parametrize("a,b,p", [(3, 5, 7), (3, 5, 5), (1, 1, 19), (2, 3, 7)])
def test_eq13_includes_p_torsion_when_ordinary(a, b, p):
    # rational points of order divisible by p appear by degree 3; they are etale points
    curve = Curve(a, b)
    assert frobenius_data(curve, p).is_ordinary
    cert = verify_eq13_local(curve, p, 3)
    assert cert.passed
    p_orders = [n for n in cert.info["orders"] if n % p == 0]
    assert p_orders
    for n in p_orders:
        assert sum(d * c for d, c in cert.info["orbit_counts"][n].items()) <= closure_total(curve, n, p)


def test_supersingular_has_no_p_torsion():
    assert closure_total(E10, 7, 7) == 0
    assert torsion_orbits(E10, 7, 7).orbit_counts == {}


def test_budget():
    with pytest.raises(ResourceLimitError):
        count_points_enum(E11, 1009, 2)
