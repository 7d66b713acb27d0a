from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from eqhitchin.combinatorics import (
    GeometryInput,
    Point,
    brute_force_components,
    cij,
    component_checks,
    derive_point,
    dij_coefficients,
    enumerate_higgs_components,
    enumerate_weight_tuples,
    fixed_point_data,
    make_weight_tuple,
    quotient_genus,
    seifert,
    valid_signs,
    verify_cij,
)
from eqhitchin.errors import GeometryError, StructureError


def geom(p, g, ns, ls=None, marked=None):
    ls = ls or [0] * len(ns)
    return GeometryInput(p, g, tuple(Point(n, l, f"x{k + 1}") for k, (n, l) in enumerate(zip(ns, ls))), marked)


# derive_point

def test_derive_point_examples():
    d = derive_point(5, Point(2, 0, "x"))
    assert (d.m, d.b, d.k_seif, d.sqrt_exp) == (2, 0, 3, 0)
    d = derive_point(3, Point(1, 0, "x"))
    assert (d.m, d.b, d.k_seif) == (2, 0, 1)
    d = derive_point(5, Point(1, 2, "x"))
    assert (d.b, d.sqrt_exp) == (4, 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_derive_point_congruences(p):
    for n in range(1, p):
        for l in range(p):
            d = derive_point(p, Point(n, l, "x"))
            assert (d.m * n) % p == p - 1
            assert (2 * d.b * n + l) % p == 0
            assert (2 * d.sqrt_exp - l) % p == 0
            assert d.k_seif == (-d.m) % p


def test_derive_point_range_errors():
    with pytest.raises(GeometryError):
        derive_point(3, Point(0, 0, "x"))
    with pytest.raises(GeometryError):
        derive_point(3, Point(1, 3, "x"))


# quotient_genus

def test_quotient_genus_examples():
    assert quotient_genus(3, 2, 4) == 0
    assert quotient_genus(3, 4, 0) == 2
    with pytest.raises(GeometryError, match="Hurwitz"):
        quotient_genus(5, 2, 2)


def test_geometry_gate():
    with pytest.raises(GeometryError):
        geom(5, 2, [1, 2])
    with pytest.raises(GeometryError):
        GeometryInput(3, 2, tuple(Point(1, 0, f"x{k}") for k in range(4)), deg_lambda=2)
    with pytest.raises(GeometryError):
        GeometryInput(3, 2, (Point(1, 0, "a"),) * 4)
    with pytest.raises(GeometryError):
        geom(3, 2, [1], marked="nope")
    with pytest.raises(StructureError):
        GeometryInput(9, 2, ())


def test_geometry_json_round_trip():
    G = geom(3, 2, [1, 1, 2, 2], [0, 1, 2, 0], marked="x1")
    data = G.to_json()
    assert data["points"][0] == {"label": "x1", "n": 1, "alpha_exp": 0}
    assert GeometryInput.from_json(data) == G


# weight tuples

def test_weight_tuple_examples():
    G = geom(3, 2, [1])
    tuples = list(enumerate_weight_tuples(G))
    assert [i.values for i, _ in tuples] == [(0,), (1,)]
    assert not tuples[0][1].Di
    wd = tuples[1][1]
    assert wd.bi["x1"] == 1 and wd.w2["x1"] == Fraction(1, 3) and "x1" in wd.Dsharp
    assert len(list(enumerate_weight_tuples(geom(5, 2, [1, 3, 3])))) == 27
    assert len(list(enumerate_weight_tuples(geom(5, 5, [1, 4])))) == 9


def test_weight_integrality():
    G = geom(5, 2, [1, 3, 3])
    for _i, wd in enumerate_weight_tuples(G):
        for x, w in wd.w2.items():
            assert w * 5 == wd.bi[x]


def test_weight_tuple_range():
    G = geom(3, 2, [1])
    with pytest.raises(StructureError):
        make_weight_tuple(G, [2])


# Higgs components

def test_one_point_components():
    G = geom(3, 2, [1])
    comps = enumerate_higgs_components(G, make_weight_tuple(G, [1]))
    assert len(comps) == 1
    c = comps[0]
    assert (c.c, c.j, c.l_j, c.eps, c.Dij) == (1, (1,), 0, (-1,), frozenset({"x1"}))
    assert enumerate_higgs_components(G, make_weight_tuple(G, [0])) == []


def test_one_point_cij():
    # Hurwitz gives g~ = 1 here, so chi~ = 0 and chi + c = -2 + 1
    G = geom(3, 2, [1])
    assert G.quotient_genus == 1
    i = make_weight_tuple(G, [1])
    comp = enumerate_higgs_components(G, i)[0]
    assert cij(G, i, comp) == -1
    assert verify_cij(G, i, comp)


def test_all_eps_plus_reduces_to_degree_count():
    G = geom(3, 4, [])
    i = make_weight_tuple(G, [])
    comps = enumerate_higgs_components(G, i)
    # no points: p l_j = c forces c = 3 in the odd range 1..5
    assert [(c.c, c.l_j) for c in comps] == [(3, 1)]
    for c in comps:
        assert c.Dij == frozenset()
        assert 3 * c.l_j + c.deg_j == c.c
        assert verify_cij(G, i, c)


def test_eps_unique_when_i_nonzero():
    for p in (3, 5, 7):
        for n in range(1, p):
            for ix in range(1, (p + 1) // 2):
                for jx in range(p):
                    assert len(valid_signs(p, n, ix, jx)) <= 1


@pytest.mark.parametrize("ns", [(1, 1, 1, 1), (1, 1, 2, 2), (2, 2, 2, 2)])
def test_sample_geometry_all_checks(ns):
    G = geom(3, 2, list(ns))
    for i, _wd in enumerate_weight_tuples(G):
        comps = enumerate_higgs_components(G, i)
        assert comps == brute_force_components(G, i)
        for comp in comps:
            assert all(component_checks(G, i, comp).values())
            assert set(dij_coefficients(G, i, comp).values()) <= {0, 3}
            assert verify_cij(G, i, comp)


@st.composite
def geometries(draw):
    p = draw(st.sampled_from([3, 5]))
    gq = draw(st.integers(0, 1))
    r = draw(st.integers(0, 4 if p == 3 else 3))
    while p * (gq - 1) + (p - 1) * r // 2 + 1 < 2:
        r += 1
    g = p * (gq - 1) + (p - 1) * r // 2 + 1
    ns = draw(st.lists(st.integers(1, p - 1), min_size=r, max_size=r))
    ls = draw(st.lists(st.integers(0, p - 1), min_size=r, max_size=r))
    return geom(p, g, ns, ls)


@given(geometries(), st.data())
def test_enumeration_matches_brute_force(G, data):
    vals = [data.draw(st.integers(0, (G.p - 1) // 2)) for _ in range(G.r)]
    i = make_weight_tuple(G, vals)
    comps = enumerate_higgs_components(G, i)
    assert comps == brute_force_components(G, i)
    for comp in comps:
        assert all(component_checks(G, i, comp).values())


@given(geometries())
def test_hurwitz_holds_for_accepted_geometry(G):
    assert 2 - 2 * G.genus == G.p * (2 - 2 * G.quotient_genus) - (G.p - 1) * G.r


# Seifert

def test_seifert_examples():
    S = seifert(geom(3, 2, [1, 1, 1, 1]))
    assert (S.b, S.genus, S.pairs) == (-12, 0, ((1, 3),) * 4)
    # p=5 with one n=2 point and g~=1: 2-2g = 0 - 4 gives g=3
    S = seifert(geom(5, 3, [2]))
    assert S.pairs == ((3, 5),) and S.b == -10


def test_seifert_rational_variant():
    S = seifert(geom(5, 3, [2]), rational=True)
    assert S.b == Fraction(-5, 3)


def test_seifert_permutation_invariant():
    pts = [Point(n, l, f"x{k}") for k, (n, l) in enumerate([(1, 0), (3, 1), (3, 4)])]
    ref = seifert(GeometryInput(5, 2, tuple(pts)))
    for perm in itertools.permutations(pts):
        assert seifert(GeometryInput(5, 2, perm)) == ref


# fixed point data

def test_fixed_point_data_examples():
    F = fixed_point_data(geom(3, 2, [1, 1, 1, 1], marked="x1"))
    assert F.as_dict() == {(2, 0): 4} and F.l0 == 0
    F = fixed_point_data(GeometryInput(3, 4, ()))
    assert F.as_dict() == {}
    # three points with p=3 need g~ = 1, so g = 4
    F = fixed_point_data(geom(3, 4, [1, 1, 2], [0, 0, 1]))
    assert F.as_dict() == {(2, 0): 2, (1, 1): 1}
    assert sum(F.as_dict().values()) == 3


def test_fixed_point_data_requires_marked_when_asked():
    with pytest.raises(GeometryError):
        fixed_point_data(geom(3, 2, [1, 1, 1, 1]), require_marked=True)
