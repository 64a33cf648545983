import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tangentfit.groebner import (
    ModuleOrder,
    ModuleVector,
    buchberger,
    dot,
    free_resolution,
    is_groebner,
    normal_form,
    schreyer_syzygies,
    syzygies_of_tuple,
)
from tangentfit.linalg import rank
from tangentfit.polycore import GREVLEX, Polynomial, monomials_of_degree

X0, X1, X2 = (Polynomial.var(i, 3) for i in range(3))
x, y = Polynomial.var(0, 2), Polynomial.var(1, 2)
KOSZUL_Q = X0 * X1 * X2 * (X0 + X1 + X2)


def jac(q):
    return [q.diff(i) for i in range(q.nvars)]


def test_normal_form_examples():
    assert normal_form(x**2, [x]).is_zero()
    assert normal_form(y, [x]) == y


def test_normal_form_of_q_mod_jacobian_matches_linear_algebra():
    # Euler: Q = (1/4) sum x_q dQ/dx_q, so Q lies in J(Q)
    G = buchberger(jac(KOSZUL_Q))
    assert normal_form(KOSZUL_Q, G).is_zero()
    # x0^4 is not in J(Q): compare with a degree-4 span computation
    J = jac(KOSZUL_Q)
    mons = monomials_of_degree(3, 4)
    rows = [[(X.mul_term(m)).coefficient(t) for t in mons] for X in J for m in monomials_of_degree(3, 1)]
    target = X0**4
    in_span = rank(rows, len(mons)) == rank(rows + [[target.coefficient(t) for t in mons]], len(mons))
    assert normal_form(target, G).is_zero() == in_span


def test_buchberger_examples():
    G = buchberger([X1, X2, X0])
    assert sorted(G, key=lambda g: g.leading_term()[0]) == sorted([X1, X2, X0], key=lambda g: g.leading_term()[0])
    f = 3 * X1**2 - 6 * X0 * X2
    assert buchberger([f]) == [X1**2 - 2 * X0 * X2]


def test_buchberger_jacobian_of_koszul_q_is_groebner():
    G = buchberger(jac(KOSZUL_Q))
    assert is_groebner(G)
    # reduced and monic
    for i, g in enumerate(G):
        assert g.leading_term()[1] == 1
        others = [h for j, h in enumerate(G) if j != i]
        assert normal_form(g, others) == g or not others
    for f in jac(KOSZUL_Q):
        assert normal_form(f, G).is_zero()
    for g in G:
        assert normal_form(g, buchberger(G)).is_zero()


def test_buchberger_logs_pairs(caplog):
    with caplog.at_level(logging.DEBUG, logger="tangentfit.groebner"):
        buchberger(jac(KOSZUL_Q))
    assert any("pair" in r.message and "lcm=" in r.message for r in caplog.records)


def test_module_buchberger_and_membership():
    v1 = ModuleVector([X1, X2])
    v2 = ModuleVector([X2, X0])
    G = buchberger([v1, v2])
    assert is_groebner(G)
    combo = ModuleVector([X0 * X1 + X2 * X2, 2 * X0 * X2])  # x0 v1 + x2 v2
    assert normal_form(combo, G).is_zero()
    assert not normal_form(ModuleVector([X0, Polynomial.zero(3)]), G).is_zero()


def test_koszul_syzygies():
    S = syzygies_of_tuple([X0, X1, X2])
    for v in S:
        assert dot(v, [X0, X1, X2]).is_zero()
    koszul = [[0, -X2, X1], [X2, 0, -X0], [-X1, X0, 0]]
    # same span in degree one
    coeffs = lambda vecs: [
        [ (e if isinstance(e, Polynomial) else Polynomial.zero(3)).coefficient(m) for e in vec for m in monomials_of_degree(3, 1)]
        for vec in vecs
    ]
    ours = [list(v.entries) for v in S]
    assert rank(coeffs(ours), 9) == rank(coeffs(ours + koszul), 9) == 3


def test_single_element_has_no_syzygies():
    assert syzygies_of_tuple([X0 * X1 + X2**2]) == []


def test_syzygies_of_x_and_xy():
    S = syzygies_of_tuple([x, x * y])
    assert S
    for v in S:
        assert dot(v, [x, x * y]).is_zero()
    assert any(v.entries[0] == y and v.entries[1] == Polynomial.constant(-1, 2) or
               v.entries[0] == -y and v.entries[1] == Polynomial.constant(1, 2) for v in S)


def test_syzygies_reject_zero_entry():
    with pytest.raises(ValueError):
        syzygies_of_tuple([X0, Polynomial.zero(3)])


def test_schreyer_syzygies_dot_to_zero_on_gb():
    G = buchberger(jac(KOSZUL_Q))
    for s in schreyer_syzygies(G):
        assert dot(s, G).is_zero()


def test_koszul_resolution_shape():
    res = free_resolution([X0, X1, X2])
    assert res.length == 3
    assert [res.betti_degrees(p) for p in (1, 2, 3)] == [[1, 1, 1], [2, 2, 2], [3]]
    assert all(res.compose_is_zero(p) for p in range(1, res.length))


def test_principal_resolution():
    res = free_resolution([X0 * X1 + X2**2])
    assert res.length == 1
    assert res.betti_degrees(1) == [2]


def test_resolution_rejects_bad_input():
    with pytest.raises(ValueError):
        free_resolution([X0 + X1**2])
    with pytest.raises(ValueError):
        free_resolution([Polynomial.zero(3)])


def test_jacobian_resolution_is_exact_and_short():
    res = free_resolution(jac(KOSZUL_Q))
    assert res.length <= 3
    for p in range(1, res.length):
        assert res.compose_is_zero(p)
        for col in res.maps[p]:
            assert isinstance(col, ModuleVector)


def test_module_order_strategies_differ():
    top = ModuleOrder(GREVLEX, "top")
    pot = ModuleOrder(GREVLEX, "pot")
    a, b = (0, (2, 0, 0)), (1, (0, 0, 1))
    assert top.key(a) > top.key(b)
    assert pot.key(a) > pot.key(b) or pot.key(a) < pot.key(b)


def small_polys():
    var = st.sampled_from([X0, X1, X2])
    mono = st.lists(var, min_size=1, max_size=3).map(lambda vs: Polynomial.constant(1, 3) if not vs else _prod(vs))
    coef = st.integers(-3, 3).filter(bool)
    term = st.tuples(coef, mono).map(lambda t: t[1] * t[0])
    return st.lists(term, min_size=1, max_size=3).map(lambda ts: sum(ts[1:], ts[0])).filter(lambda p: not p.is_zero())


def _prod(vs):
    out = vs[0]
    for v in vs[1:]:
        out = out * v
    return out


@settings(max_examples=25, deadline=None)
@given(st.lists(small_polys(), min_size=1, max_size=3))
def test_random_ideals_groebner_and_syzygies(F):
    G = buchberger(F)
    assert is_groebner(G)
    for f in F:
        assert normal_form(f, G).is_zero()
    for v in syzygies_of_tuple(F):
        assert dot(v, F).is_zero()
