import json
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ORACLE_CASES, pentagon, quadrilateral, triangle, unit_square
from tangentfit.arrangement import Polytope, facet_tangency_check
from tangentfit.groebner import ModuleVector, dot
from tangentfit.polycore import Polynomial, homogenize, monomials_of_degree, mpq, reduce_mod_linear
from tangentfit.tangentbasis import (
    TangentBasis,
    cone_syzygies,
    dimension_by_resolution,
    euler_field,
    in_span,
    oracle_tangent_basis,
    phi_map,
    psi_map,
    resolution,
    same_span,
    syzygy_degree_component,
    tangent_basis,
)

x1, x2 = Polynomial.var(0, 2), Polynomial.var(1, 2)
KNOWN_TRIANGLE_FIELDS = [
    (x1 * x2, x2 + x2**2),
    (x1 + x1**2, x1 * x2),
    (-(x1 * x2), x1 * x2),
]


def cone_tangent(xi_hat, forms):
    """Every cone plane divides xi_hat[hat h]."""
    for f in forms:
        act = sum((g * f.diff(q) for q, g in enumerate(xi_hat) if g and f.diff(q)), Polynomial.zero(f.nvars))
        piv = next(q for q in range(f.nvars) if f.diff(q))
        if act and not reduce_mod_linear(act, f, piv).is_zero():
            return False
    return True


def test_euler_field_scales_homogeneous_polys():
    xi = euler_field(3)
    rng = random.Random(3)
    for deg in range(1, 5):
        f = sum((Polynomial.monomial(e, rng.randint(-4, 4)) for e in monomials_of_degree(3, deg)), Polynomial.zero(3))
        act = sum((g * f.diff(q) for q, g in enumerate(xi)), Polynomial.zero(3))
        assert act == f * deg


def test_degree_component_triangle():
    data = cone_syzygies(triangle())
    comp = syzygy_degree_component(data.generators, 2, data.degrees)
    assert len(comp) == 3
    for G in comp:
        assert G.is_homogeneous() and G.degree() == 2
        assert dot(G, data.jac).is_zero()
    assert syzygy_degree_component(data.generators, min(data.degrees) - 1, data.degrees) == []


def test_degree_component_pentagon():
    data = cone_syzygies(pentagon())
    assert sorted(data.degrees)[:5] == [4] * 5
    assert len(syzygy_degree_component(data.generators, 4, data.degrees)) == 5


def test_pentagon_resolution_second_module_degrees():
    res = resolution(pentagon())
    assert res.relative_degrees(2).count(4) == 5


def test_psi_on_koszul_syzygy():
    data = cone_syzygies(triangle())
    J = data.jac
    G = ModuleVector([J[1], -J[0], Polynomial.zero(3)])
    assert dot(G, J).is_zero()
    out = psi_map(G)
    assert out[0].is_zero()
    assert cone_tangent(out, data.cone.forms)


def test_psi_leaves_g0_zero_unchanged():
    X1, X2 = Polynomial.var(1, 3), Polynomial.var(2, 3)
    G = (Polynomial.zero(3), X2, -X1)
    assert psi_map(G) == G


def test_psi_rejects_non_divisible_g0():
    X1 = Polynomial.var(1, 3)
    with pytest.raises(ValueError):
        psi_map((X1, X1, X1))


def _random_dbar(rng, k=3):
    # homogenized tangent fields with zero x0 entry, random rational mix
    B = tangent_basis(triangle(), k)
    coeffs = [mpq(rng.randint(-9, 9), rng.randint(1, 5)) for _ in B.fields]
    xi = B.combine(coeffs)
    return (Polynomial.zero(3),) + tuple(homogenize(f, k) for f in xi)


def test_psi_phi_identity_on_random_elements():
    Q = cone_syzygies(triangle()).cone.Q
    rng = random.Random(20)
    for _ in range(20):
        xi = _random_dbar(rng, rng.choice([2, 3, 4]))
        G = phi_map(xi, Q)
        assert sum((g * Q.diff(q) for q, g in enumerate(G)), Polynomial.zero(3)).is_zero()
        assert psi_map(G) == xi


def test_triangle_contains_known_fields(tri):
    B = tangent_basis(tri, 2)
    assert B.dim == 3
    for xi in KNOWN_TRIANGLE_FIELDS:
        assert in_span(xi, B.fields)


def test_bounded_polytope_has_no_constant_fields():
    for P in (triangle(), unit_square(), quadrilateral()):
        assert tangent_basis(P, 0).dim == 0
        assert oracle_tangent_basis(P, 0).dim == 0


@pytest.mark.parametrize("d,k", [(1, 2), (2, 1), (2, 3), (3, 1)])
def test_whole_space_gives_all_fields(d, k):
    P = Polytope(d)
    want = d * comb(d + k, d)
    assert tangent_basis(P, k).dim == want
    assert oracle_tangent_basis(P, k).dim == want
    assert dimension_by_resolution(P, k) == want


def test_unit_square_degree_one_and_two():
    sq = unit_square()
    assert tangent_basis(sq, 1).dim == oracle_tangent_basis(sq, 1).dim == 0
    B = tangent_basis(sq, 2)
    assert same_span(B.fields, [(x1 * (x1 + 1), Polynomial.zero(2)), (Polynomial.zero(2), x2 * (x2 + 1))])


@pytest.mark.parametrize("name", sorted(ORACLE_CASES))
def test_oracle_agreement_up_to_degree_three(name):
    P = ORACLE_CASES[name]()
    for k in range(4):
        B, O = tangent_basis(P, k), oracle_tangent_basis(P, k)
        assert B.dim == O.dim == dimension_by_resolution(P, k)
        assert same_span(B.fields, O.fields)
        assert B.is_independent() and B.is_tangent(P)


def test_resolution_dimension_small_k_is_zero():
    assert dimension_by_resolution(triangle(), 1) == 0


def test_module_closure_and_monotonicity(tri):
    B2, B3, B4 = (tangent_basis(tri, k) for k in (2, 3, 4))
    for xi in B2.fields:
        for p in (x1, x2, x1 + 3, x1 * x2):
            prod = tuple(p * f for f in xi)
            target = B3 if p.degree == 1 else B4
            assert in_span(prod, target.fields)
        assert in_span(xi, B3.fields)
    for xi in B3.fields:
        assert in_span(xi, B4.fields)


def test_scaling_leaves_span_unchanged():
    P = quadrilateral()
    Q = P.scaled([3, mpq(1, 2), 7, mpq(5, 3)])
    assert same_span(tangent_basis(P, 3).fields, tangent_basis(Q, 3).fields)


def test_basis_json_round_trip(tri):
    B = tangent_basis(tri, 3)
    data = json.loads(json.dumps(B.to_json()))
    assert data["dim"] == B.dim and data["k"] == 3
    C = TangentBasis.from_json(data, d=2)
    assert C.fields == B.fields


def test_basis_json_dim_mismatch_rejected(tri):
    data = tangent_basis(tri, 2).to_json()
    data["dim"] = 5
    with pytest.raises(ValueError):
        TangentBasis.from_json(data, d=2)


def test_basis_fields_are_primitive_integer(tri):
    for xi in tangent_basis(tri, 3).fields:
        coefs = [c for f in xi for c in f.terms.values()]
        assert all(c.denominator == 1 for c in coefs)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=8, max_size=8))
def test_any_combination_stays_tangent(coeffs):
    B = tangent_basis(triangle(), 3)
    xi = B.combine(coeffs)
    assert all(v.tangent for v in facet_tangency_check(xi, triangle()))
