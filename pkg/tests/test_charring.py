import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from tiltchar.charring import (
    Character,
    NablaExpansion,
    chi,
    chi_virtual,
    dim,
    dual_character,
    frobenius_twist,
    multiply,
    nabla_expand,
    nabla_expand_triangular,
    synthesize,
    tensor_nabla,
    unit,
    weyl_dimension,
)
from tiltchar.modchar import st_char
from tiltchar.rootsys import build_root_system

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)


def convolve(a, b):
    out = {}
    for x, m in a.items():
        for y, n in b.items():
            k = tuple(i + j for i, j in zip(x, y))
            out[k] = out.get(k, 0) + m * n
    return Character(a.rs, out)


def test_chi_small():
    assert dict(chi(A2, (0, 0)).items()) == {(0, 0): 1}
    assert dict(chi(A1, (3,)).items()) == {(3,): 1, (1,): 1, (-1,): 1, (-3,): 1}
    c = chi(A2, (1, 1))
    assert c.dim() == 8 and c[(0, 0)] == 2


def test_chi_rejects_non_dominant():
    with pytest.raises(ValueError):
        chi(A1, (-1,))


@pytest.mark.parametrize("t,n,lam", [("A", 2, (3, 1)), ("B", 2, (2, 3)), ("G", 2, (1, 2)),
                                     ("C", 3, (1, 0, 2)), ("A", 4, (1, 0, 1, 2))])
def test_freudenthal_matches_weyl_dimension(t, n, lam):
    rs = build_root_system(t, n)
    c = chi(rs, lam)
    assert c.dim() == weyl_dimension(rs, lam)
    assert c.is_w_invariant()
    assert c[lam] == 1


def test_multiply_examples():
    one = chi(A1, (1,))
    assert dict(nabla_expand(multiply(one, one)).items()) == {(2,): 1, (0,): 1}
    e = nabla_expand(multiply(chi(A2, (1, 0)), chi(A2, (0, 1))))
    assert dict(e.items()) == {(1, 1): 1, (0, 0): 1}
    c = chi(A2, (2, 1))
    assert multiply(c, unit(A2)) == c


def test_frobenius_twist():
    t = frobenius_twist(chi(A1, (1,)), 3, 1)
    assert dict(t.items()) == {(3,): 1, (-3,): 1}
    assert t.dim() == 2
    with pytest.raises(ValueError):
        frobenius_twist(chi(A1, (1,)), 3, 0)


def test_dual_character():
    assert dual_character(chi(A1, (5,))) == chi(A1, (5,))
    assert dual_character(chi(A2, (1, 0))) == chi(A2, (0, 1))
    c = chi(A2, (2, 0)) * 3 + chi(A2, (1, 2)) * -1
    assert dual_character(dual_character(c)) == c


def test_nabla_expand_examples():
    assert dict(nabla_expand(chi(A2, (2, 1))).items()) == {(2, 1): 1}
    full = Character(A1, {(2,): 1, (0,): 2, (-2,): 1})
    assert dict(nabla_expand(full).items()) == {(2,): 1, (0,): 1}
    virt = chi(A1, (4,)) + chi(A1, (0,)) * -1
    assert dict(nabla_expand(virt).items()) == {(4,): 1, (0,): -1}


def test_chi_virtual():
    assert chi_virtual(A1, (-1,)).dim() == 0
    assert chi_virtual(A1, (-3,)) == chi(A1, (1,)) * -1
    assert chi_virtual(A2, (2, 0)) == chi(A2, (2, 0))


def test_dims():
    assert dim(chi(A2, (1, 1))) == 8
    assert st_char(A2, 2).dim() == 8
    assert dim(chi(A1, (0,))) == 1
    assert all(dim(chi(A1, (m,))) == m + 1 for m in range(10))


def test_json_roundtrip():
    c = chi(A2, (1, 2)) * 2 + chi(A2, (0, 0)) * -1
    data = json.loads(json.dumps(c.to_json()))
    assert Character.from_json(A2, data) == c
    e = nabla_expand(c)
    assert NablaExpansion.from_json(A2, json.loads(json.dumps(e.to_json()))) == e


def test_non_dominant_expansion_rejected():
    with pytest.raises(ValueError):
        NablaExpansion(A1, {(-2,): 1})


def test_big_integers_stay_exact():
    c = st_char(A1, 5, 2)
    power = c
    for _ in range(5):
        power = multiply(power, c)
    assert power.dim() == 25 ** 6


def test_steinberg_factorisation():
    for p in (2, 3):
        assert st_char(A2, p, 2) == multiply(st_char(A2, p, 1), frobenius_twist(st_char(A2, p, 1), p, 1))


@pytest.mark.parametrize("rs,lam,p", [(A1, (2,), 3), (A1, (3,), 5), (A2, (1, 0), 2), (A2, (1, 1), 3)])
def test_andersen_haboush(rs, lam, p):
    top = tuple((p - 1) + p * c for c in lam)
    assert chi(rs, top) == multiply(st_char(rs, p), frobenius_twist(chi(rs, lam), p))


def a2_character(draw_terms):
    out = Character(A2, {})
    for lam, c in draw_terms:
        out = out + chi(A2, lam) * c
    return out


terms = st.lists(st.tuples(st.tuples(st.integers(0, 5), st.integers(0, 5)),
                           st.integers(-3, 3)), min_size=1, max_size=3)


@given(terms)
@settings(max_examples=40, deadline=None)
def test_round_trip_property(ts):
    c = a2_character(ts)
    e = nabla_expand(c)
    assert synthesize(e) == c
    assert e == nabla_expand_triangular(c)


@given(terms, terms)
@settings(max_examples=25, deadline=None)
def test_multiply_matches_convolution(t1, t2):
    a, b = a2_character(t1), a2_character(t2)
    assert multiply(a, b) == convolve(a, b)
    assert multiply(a, b) == multiply(b, a)


@given(st.tuples(st.integers(0, 4), st.integers(0, 4)), st.tuples(st.integers(0, 4), st.integers(0, 4)))
@settings(max_examples=30, deadline=None)
def test_tensor_products_have_good_filtrations(lam, mu):
    e = nabla_expand(multiply(chi(A2, lam), chi(A2, mu)))
    assert e.is_nonnegative()
    assert e[tuple(a + b for a, b in zip(lam, mu))] == 1
    assert tensor_nabla(NablaExpansion.basis(A2, lam), chi(A2, mu)) == e


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
@settings(max_examples=20, deadline=None)
def test_multiply_associative(a, b, c):
    x, y, z = chi(A1, (a,)), chi(A1, (b,)), chi(A1, (c,))
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


def test_random_rank_one_clebsch_gordan():
    rng = random.Random(3)
    for _ in range(30):
        a, b = rng.randint(0, 15), rng.randint(0, 15)
        e = nabla_expand(multiply(chi(A1, (a,)), chi(A1, (b,))))
        assert dict(e.items()) == {(k,): 1 for k in range(abs(a - b), a + b + 1, 2)}
