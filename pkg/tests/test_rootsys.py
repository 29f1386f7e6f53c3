import math

import pytest
from hypothesis import given, settings, strategies as st

from tiltchar.rootsys import (
    UnsupportedType,
    build_root_system,
    digit_decompose,
    dominance_leq,
    dot_normalize,
    dual_weight,
    hat_weight,
    in_gamma_r,
    iter_restricted,
    pairing,
    strongly_linked,
    w_r_map,
    weyl_orbit,
)

WEYL_ORDERS = {("A", 1): 2, ("A", 2): 6, ("A", 3): 24, ("A", 4): 120, ("B", 2): 8,
               ("B", 3): 48, ("C", 3): 48, ("D", 4): 192, ("G", 2): 12}


def test_rank_one_data():
    rs = build_root_system("A", 1)
    assert rs.rho == (1,)
    assert rs.alpha0.weight == (2,)
    assert rs.coxeter_number == 2
    assert rs.weyl_order == 2


def test_a2_and_a4_data():
    a2 = build_root_system("A", 2)
    assert a2.rho == (1, 1) and a2.coxeter_number == 3 and a2.weyl_order == 6
    a4 = build_root_system("A", 4)
    assert a4.coxeter_number == 5
    assert a4.weyl_order == math.factorial(5)
    assert a4.num_positive_roots == 10


@pytest.mark.parametrize("key", sorted(WEYL_ORDERS))
def test_root_system_invariants(key):
    rs = build_root_system(*key)
    assert rs.weyl_order == WEYL_ORDERS[key]
    for i in range(rs.rank):
        assert rs.cartan_matrix[i][i] == 2
    assert rs.coxeter_number == rs.alpha0.pair(rs.rho) + 1
    longest = [i for i, (_, ell) in enumerate(rs.weyl_group) if ell == rs.num_positive_roots]
    assert longest == [rs.longest_element_index]
    assert rs.act(rs.longest_element_index, rs.rho) == tuple(-c for c in rs.rho)


def test_coxeter_numbers_other_types():
    assert build_root_system("B", 3).coxeter_number == 6
    assert build_root_system("D", 4).coxeter_number == 6
    assert build_root_system("G", 2).coxeter_number == 6


def test_unsupported_type():
    with pytest.raises(UnsupportedType):
        build_root_system("Q", 2)


def test_pairing_examples():
    a1, a2, a4 = (build_root_system("A", n) for n in (1, 2, 4))
    top = lambda rs: rs.alpha0.index
    assert pairing(a1, (7,), top(a1)) == 7
    assert pairing(a2, a2.rho, top(a2)) == 2
    assert pairing(a4, (2, 3, 3, 2), top(a4)) == 10
    with pytest.raises((IndexError, ValueError)):
        pairing(a1, (1,), 5)


def test_dominance_examples():
    a1, a2 = build_root_system("A", 1), build_root_system("A", 2)
    assert dominance_leq(a1, (0,), (2,))
    assert not dominance_leq(a1, (0,), (1,))
    assert dominance_leq(a2, (0, 0), (1, 1))
    assert not dominance_leq(a2, (1, 0), (0, 1))


def test_dual_weight_examples():
    a1, a2, b3 = build_root_system("A", 1), build_root_system("A", 2), build_root_system("B", 3)
    assert dual_weight(a1, (3,)) == (3,)
    assert dual_weight(a2, (1, 0)) == (0, 1)
    for rs in (a1, a2, b3):
        assert dual_weight(rs, rs.rho) == rs.rho


def test_weyl_orbit_examples():
    a1, a2 = build_root_system("A", 1), build_root_system("A", 2)
    assert weyl_orbit(a1, (3,)) == {(3,), (-3,)}
    assert len(weyl_orbit(a2, (1, 1))) == 6
    assert weyl_orbit(a2, (0, 0)) == {(0, 0)}


def test_dot_normalize_examples():
    a1 = build_root_system("A", 1)
    assert dot_normalize(a1, (-1,)) is None
    assert dot_normalize(a1, (-3,)) == (-1, (1,))
    assert dot_normalize(a1, (4,)) == (1, (4,))


def test_w_r_examples():
    a1 = build_root_system("A", 1)
    assert w_r_map(a1, (0,), 3, 1) == (2,)
    assert w_r_map(a1, (4,), 3, 1) == (4,)
    assert hat_weight(a1, (0,), 3, 1) == (4,)
    assert digit_decompose(a1, (7,), 3) == ((1,), (2,))
    with pytest.raises(ValueError):
        hat_weight(a1, (3,), 3, 1)


def test_gamma_region():
    a1, a2 = build_root_system("A", 1), build_root_system("A", 2)
    assert [m for m in range(20) if in_gamma_r(a1, (m,), 3, 1)] == list(range(6))
    assert in_gamma_r(a2, (1, 1), 3, 1) and not in_gamma_r(a2, (2, 1), 3, 1)


def test_strong_linkage_rank_one():
    a1 = build_root_system("A", 1)
    # for SL_2, p=3: 0 is linked up to 4 (reflect in the wall at 3), not to 2
    assert strongly_linked(a1, (0,), (4,), 3)
    assert not strongly_linked(a1, (0,), (2,), 3)
    assert strongly_linked(a1, (1,), (1,), 3)
    assert not strongly_linked(a1, (4,), (0,), 3)


dominant_a2 = st.tuples(st.integers(0, 12), st.integers(0, 12))


@given(dominant_a2, st.sampled_from([2, 3, 5]), st.integers(1, 2))
def test_w_r_is_involution(lam, p, r):
    rs = build_root_system("A", 2)
    assert w_r_map(rs, w_r_map(rs, lam, p, r), p, r) == lam


@given(dominant_a2, st.sampled_from([2, 3, 5]))
def test_w_r_preserves_restricted(lam, p):
    rs = build_root_system("A", 2)
    lam = tuple(c % p for c in lam)
    assert w_r_map(rs, lam, p, 1) in set(iter_restricted(rs, p, 1))


@given(st.tuples(st.integers(-15, 15), st.integers(-15, 15)))
def test_dot_normalize_is_dot_invariant(lam):
    rs = build_root_system("A", 2)
    base = dot_normalize(rs, lam)
    for i in range(rs.weyl_order):
        mu = tuple(a - 1 for a in rs.act(i, tuple(c + 1 for c in lam)))
        other = dot_normalize(rs, mu)
        if base is None:
            assert other is None
        else:
            sign = -1 if rs.weyl_group[i][1] % 2 else 1
            assert other == (base[0] * sign, base[1])


@given(dominant_a2, dominant_a2, st.sampled_from([2, 3]))
@settings(max_examples=60)
def test_strong_linkage_implies_dominance(lam, mu, p):
    rs = build_root_system("A", 2)
    if strongly_linked(rs, lam, mu, p):
        assert dominance_leq(rs, lam, mu)


@given(st.tuples(st.integers(0, 20), st.integers(0, 20), st.integers(0, 20)))
def test_orbit_has_one_dominant_member(lam):
    rs = build_root_system("B", 3)
    orbit = weyl_orbit(rs, lam)
    assert rs.weyl_order % len(orbit) == 0
    assert [w for w in orbit if min(w) >= 0] == [lam]
