from hypothesis import given, settings, strategies as st

from tiltchar.charring import Character, chi, dual_character, multiply, nabla_expand
from tiltchar.form import bracket, bracket_nabla, bracket_via_expansion, gf_multiplicity
from tiltchar.modchar import new_tables, require_simple_character, st_char
from tiltchar.rootsys import build_root_system

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)


def test_orthonormal_basis():
    for lam in [(0, 0), (1, 0), (2, 3)]:
        for mu in [(0, 0), (1, 0), (2, 3), (0, 1)]:
            assert bracket(chi(A2, lam), chi(A2, mu)) == (1 if lam == mu else 0)


def test_rank_one_examples():
    t4 = chi(A1, (4,)) + chi(A1, (0,))
    assert bracket(t4, chi(A1, (4,)) + chi(A1, (0,)) * -1) == 0
    table, _ = new_tables(A1, 3)
    assert bracket(t4, require_simple_character(table, (12,))) == -1


def test_gf_multiplicity_examples():
    assert gf_multiplicity(chi(A2, (1, 1)), (1, 1)) == 1
    assert gf_multiplicity(chi(A2, (1, 1)), (0, 0)) == 0
    sq = multiply(chi(A1, (1,)), chi(A1, (1,)))
    assert [gf_multiplicity(sq, (k,)) for k in (2, 0, 1)] == [1, 1, 0]
    assert gf_multiplicity(multiply(st_char(A1, 3), chi(A1, (2,))), (4,)) == 1


def test_bracket_nabla_matches_bracket():
    a, b = chi(A2, (2, 1)) * 2 + chi(A2, (0, 0)), chi(A2, (1, 2)) + chi(A2, (0, 0)) * -3
    assert bracket_nabla(nabla_expand(a), nabla_expand(b)) == bracket(a, b)


def _char(rs, ts):
    out = Character(rs, {})
    for lam, c in ts:
        out = out + chi(rs, lam[: rs.rank]) * c
    return out


weights = st.tuples(st.integers(0, 6), st.integers(0, 6))
chars = st.lists(st.tuples(weights, st.integers(-3, 3)), min_size=1, max_size=3)
small = st.lists(st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-2, 2)),
                 min_size=1, max_size=2)


@given(st.sampled_from([A1, A2]), chars, chars, small)
@settings(max_examples=40, deadline=None)
def test_form_axioms(rs, m, n, v):
    m, n, v = _char(rs, m), _char(rs, n), _char(rs, v)
    assert bracket(m, n) == bracket(n, m)
    assert bracket(multiply(m, v), n) == bracket(m, multiply(n, dual_character(v)))
    assert bracket(m, n) == bracket(dual_character(m), dual_character(n))
    assert bracket(m, n) == bracket_via_expansion(m, n)


@given(chars)
@settings(max_examples=40, deadline=None)
def test_bracket_recovers_expansion(m):
    c = _char(A2, m)
    e = nabla_expand(c)
    for lam, k in e.items():
        assert gf_multiplicity(c, lam) == k
