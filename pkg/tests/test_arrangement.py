import json
import logging
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import pentagon, quadrilateral, triangle, unit_square
from tangentfit.arrangement import (
    DegenerateArrangementError,
    Polytope,
    PolytopeError,
    bounding_box,
    build_cone,
    euler_identity_holds,
    facet_quotient,
    facet_tangency_check,
    is_tangent,
    jacobian,
    linprog_max,
    rationalize,
    validate_polytope,
)
from tangentfit.polycore import Polynomial, mpq, reduce_mod_linear

x1, x2 = Polynomial.var(0, 2), Polynomial.var(1, 2)
X0, X1, X2 = (Polynomial.var(i, 3) for i in range(3))


def test_rationalize_logs_choice(caplog):
    with caplog.at_level(logging.INFO, logger="tangentfit.arrangement"):
        q = rationalize(0.30901699437494745, 10**6)
    assert q == mpq(98209, 317811)
    assert "317811" in caplog.text and "0.309016994" in caplog.text
    assert rationalize("2/3") == mpq(2, 3)
    assert rationalize(0.1, 10) == mpq(1, 10)


def test_json_round_trip():
    P = quadrilateral()
    data = json.loads(json.dumps(P.to_json()))
    assert Polytope.from_json(data) == P
    assert data["halfspaces"][2] == {"normal": ["2", "1"], "offset": "-3"}


def test_json_float_input_uses_max_denominator():
    data = {"d": 1, "halfspaces": [{"normal": [1.0], "offset": -0.333333333}], "max_denominator": 10}
    assert Polytope.from_json(data).offsets == (mpq(-1, 3),)


def test_linprog_examples():
    st_, val, x = linprog_max([1, 1], [[1, 0], [0, 1], [-1, -1]], [1, 2, 0])
    assert st_ == "optimal" and val == 3
    assert linprog_max([1, 0], [[-1, 0]], [0])[0] == "unbounded"
    assert linprog_max([1], [[1], [-1]], [-1, -1])[0] == "infeasible"


def test_validate_accepts_examples():
    for P in (triangle(), unit_square(), quadrilateral(), pentagon()):
        rep = validate_polytope(P)
        assert rep.valid and not rep.redundant


def test_validate_zero_normal():
    P = Polytope.from_halfspaces([((0, 0), -1), ((1, 0), 0)])
    with pytest.raises(PolytopeError, match="zero normal"):
        validate_polytope(P)


def test_validate_proportional():
    P = Polytope.from_halfspaces([((1, 0), 0), ((2, 0), 0), ((0, 1), 0), ((-1, -1), -1)])
    rep = validate_polytope(P, raise_on_error=False)
    assert not rep.valid and any("proportional" in p for p in rep.problems)


def test_validate_empty_interior():
    P = Polytope.from_halfspaces([((1, 0), 0), ((-1, 0), 1), ((0, 1), 0)])
    with pytest.raises(PolytopeError, match="empty interior"):
        validate_polytope(P)


def test_validate_redundant_reports_lp_optimum():
    P = Polytope.from_halfspaces([((1, 0), 0), ((-1, 0), -1), ((2, 0), -1), ((0, 1), 0)])
    rep = validate_polytope(P, raise_on_error=False)
    assert rep.redundant == [2]
    assert rep.lp_optima[2] == -1
    assert "halfspace 3 is redundant" in rep.lines()[0]


def test_unbounded_polytope_accepted():
    P = Polytope.from_halfspaces([((1, 0), 0), ((0, 1), 0)])
    assert validate_polytope(P).valid
    assert bounding_box(P) is None
    assert bounding_box(triangle()) == [(-1, 0), (-1, 0)]


def _vertex_redundant(P, j):
    # j redundant iff every vertex of the polygon without j satisfies h_j <= 0
    rest = [i for i in range(P.m) if i != j]
    verts = []
    for a, b in combinations(rest, 2):
        (p, q), (r, s) = P.normals[a], P.normals[b]
        det = p * s - q * r
        if not det:
            continue
        la, lb = -P.offsets[a], -P.offsets[b]
        v = ((la * s - q * lb) / det, (p * lb - r * la) / det)
        if all(P.values(v)[i] <= 0 for i in rest):
            verts.append(v)
    return all(P.values(v)[j] <= 0 for v in verts)


halfspace = st.tuples(
    st.tuples(st.integers(-4, 4), st.integers(-4, 4)).filter(any),
    st.integers(-6, -1),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(halfspace, min_size=3, max_size=8, unique_by=lambda h: h[0]))
def test_redundancy_matches_vertex_enumeration(hs):
    P = Polytope.from_halfspaces(hs)
    rep = validate_polytope(P, raise_on_error=False)
    assume(not rep.problems)
    for j in range(P.m):
        others = Polytope(2, tuple(n for i, n in enumerate(P.normals) if i != j),
                          tuple(l for i, l in enumerate(P.offsets) if i != j))
        assume(bounding_box(others) is not None)
        assert (j in rep.redundant) == _vertex_redundant(P, j)


def test_cone_of_triangle():
    C = build_cone(triangle())
    assert C.forms[0] == X0
    assert C.Q.degree == 4
    # Q = x0 x1 x2 (x0 + x1 + x2) up to a unit
    assert C.Q == X0 * X1 * X2 * (X0 + X1 + X2) or C.Q == -(X0 * X1 * X2 * (X0 + X1 + X2))
    assert C.is_essential()


def test_cone_degrees():
    assert build_cone(pentagon()).Q.degree == 6
    empty = build_cone(Polytope(2))
    assert empty.Q == X0


def test_q_vanishes_on_each_cone_plane():
    C = build_cone(quadrilateral())
    for f in C.forms:
        q = next(i for i in range(3) if f.coefficient(tuple(int(i == j) for j in range(3))))
        assert reduce_mod_linear(C.Q, f, q).is_zero()


def test_euler_identity_on_cones():
    for P in (triangle(), unit_square(), quadrilateral(), pentagon()):
        assert euler_identity_holds(build_cone(P).Q)
    assert euler_identity_holds(X0 * X1 * X2 * (X0 + X1 + X2))


def test_jacobian_rejects_slab():
    slab = Polytope.from_halfspaces([((1, 0), -1), ((-1, 0), -1)])
    C = build_cone(slab)
    assert not C.is_essential()
    with pytest.raises(DegenerateArrangementError):
        jacobian(C)
    assert len(jacobian(C, allow_degenerate=True)) == 3


def test_tangency_examples(tri):
    xi = (x1 * x2, x2**2 + x2)
    assert all(v.tangent for v in facet_tangency_check(xi, tri))
    bad = facet_tangency_check((Polynomial.zero(2), x2), tri)
    assert [v.tangent for v in bad] == [True, True, False]
    # alpha_3 = (-1, -1), so <xi, alpha_3> = -x2 restricted to h_3 = 0
    assert bad[2].residue == -x2
    zero = (Polynomial.zero(2), Polynomial.zero(2))
    assert is_tangent(zero, tri)


def test_facet_quotient_reconstructs(tri):
    xi = (x1 * x2, x2**2 + x2)
    for i in range(tri.m):
        g = facet_quotient(xi, tri, i)
        alpha = tri.normals[i]
        assert alpha[0] * xi[0] + alpha[1] * xi[1] == tri.h(i) * g
    with pytest.raises(ValueError):
        facet_quotient((Polynomial.zero(2), x2), tri, 2)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(F(1, 5), 5, max_denominator=9), min_size=3, max_size=3))
def test_tangency_scale_invariant(factors):
    tri = triangle()
    scaled = tri.scaled(factors)
    for xi in [(x1 * x2, x2**2 + x2), (Polynomial.zero(2), x2), (x1 + x1**2, x1 * x2)]:
        a = [v.tangent for v in facet_tangency_check(xi, tri)]
        b = [v.tangent for v in facet_tangency_check(xi, scaled)]
        assert a == b
