from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from eqhitchin.cyclotomic import LocalizedCyclo
from eqhitchin.errors import DivergenceError, NotInvertibleError, RootNormalizationError, StructureError
from eqhitchin.graded import RingSpec, TSeries, g_inv
from eqhitchin.kclasses import (
    KClass,
    LineTerm,
    big_omega,
    ch,
    decompose,
    det_class,
    equivariant_rank,
    lambda_dual,
    omega,
    pth_root,
    sym_all,
    todd,
    todd_coefficients,
)
from eqhitchin.verification import _ring, random_effective_moving, random_series


def ring(d, gens=("x",), p=3, mode="localized"):
    return RingSpec(p, [(g, 1) for g in gens], d, mode)


def zl(p, k=1):
    return LocalizedCyclo.zeta(p, k)


def line(R, c1=None, twt=0, mwt=0, mult=1):
    return KClass.line(R, c1, twt, mwt, mult)


# decompose

def test_decompose_examples():
    R = ring(1)
    x = R.gen("x")
    W = line(R, x, -1)
    D = decompose(W)
    assert D.minus == W and D.plus.is_zero() and D.tfixed.is_zero()
    L1, L2 = line(R, x, 1), line(R, x, 0, 2)
    D = decompose(L1 + L2)
    assert D.plus == L1 and D.tfixed == L2 and D.tmufixed.is_zero() and D.by_mwt[2] == L2
    D = decompose(W - W)
    assert all(c.is_zero() for c in (D.plus, D.minus, D.tfixed, D.tmufixed, *D.by_mwt.values()))


def test_line_term_needs_degree_one_class():
    R = ring(2)
    with pytest.raises(StructureError):
        LineTerm(R.one(), 0, 0, 1)


def test_canonical_merge():
    R = ring(1)
    x = R.gen("x")
    W = line(R, x, 1, 1) + line(R, x, 1, 4)  # mwt is taken mod p
    assert len(W.terms) == 1 and W.terms[0].mult == 2


# ch

def test_ch_examples():
    R = ring(2)
    x = R.gen("x")
    assert ch(KClass.trivial(R)) == TSeries.one(R)
    want = TSeries(R, {-1: (R.one() + x + (x * x).scale(Fraction(1, 2))).scale(zl(3))})
    assert ch(line(R, x, -1, 1)) == want
    V, W = line(R, x, 2, 1), line(R, -x, 0, 2, 3)
    assert ch(V + W) == ch(V) + ch(W)


# lambda_dual

def test_lambda_examples():
    R = ring(1)
    x = R.gen("x")
    assert lambda_dual(KClass.zero(R)) == TSeries.one(R)
    want = R.const(1 - zl(3, 2)) + x.scale(zl(3, 2))
    assert lambda_dual(line(R, x, 0, 1)).coefficient(0) == want
    assert lambda_dual(KClass.trivial(R)).is_zero()


def test_lambda_negative_mult_needs_invertible_factor():
    R = ring(1)
    with pytest.raises(NotInvertibleError):
        lambda_dual(KClass.trivial(R, -1))


# sym_all

def test_sym_examples():
    R = ring(0, ())
    s = sym_all(line(R, None, -1), depth=3)
    assert all(s.coefficient(-n) == R.one() for n in range(4))
    assert s.prec == -3
    assert sym_all(KClass.zero(R)) == TSeries.one(R)
    with pytest.raises(DivergenceError):
        sym_all(line(R, None, 1))
    with pytest.raises(DivergenceError):
        sym_all(KClass.trivial(R))


def test_sym_weight_zero_needs_localized_mode():
    P = ring(0, (), mode="plain")
    with pytest.raises(NotInvertibleError):
        sym_all(line(P, None, 0, 1))


# det

def test_det_examples():
    R = ring(1)
    x = R.gen("x")
    t = det_class(KClass.zero(R))
    assert (t.c1.is_zero(), t.twt, t.mwt, t.mult) == (True, 0, 0, 1)
    t = det_class(line(R, x, -1, 1, 2))
    assert (t.c1, t.twt, t.mwt, t.mult) == (x.scale(2), -2, 2, 1)
    L = line(R, x, 3, 1)
    t = det_class(L + L.dual())
    assert (t.c1.is_zero(), t.twt, t.mwt) == (True, 0, 0)


# omega / Omega

def test_omega_examples():
    R = ring(0, ())
    assert omega(KClass.zero(R)) == TSeries.one(R)
    w = omega(line(R, None, -1), depth=3)
    assert w.exponents() == [-1, -2, -3, -4]
    assert all(w.coefficient(n) == R.one() for n in (-1, -2, -3, -4))
    w = omega(line(R, None, 1), depth=3)
    assert w.exponents() == [0, -1, -2, -3]


def test_big_omega_examples():
    R = ring(0, ())
    assert big_omega(KClass.zero(R)) == TSeries.one(R)
    w = big_omega(line(R, None, 0, 1))
    assert w == TSeries.const(R, (1 - zl(3)).scale(Fraction(1, 3)))
    assert w.coefficient(0).const_coeff() * (1 - zl(3, 2)) == LocalizedCyclo.one(3)


def test_big_omega_needs_localized_mode():
    with pytest.raises(NotInvertibleError):
        big_omega(line(ring(0, (), mode="plain"), None, 0, 1))


@st.composite
def kclasses(draw, R):
    terms = []
    for _ in range(draw(st.integers(0, 3))):
        c1 = R.zero()
        for g in R.names:
            c1 = c1 + R.gen(g).scale(draw(st.integers(-2, 2)))
        twt = draw(st.integers(-2, 2))
        mwt = draw(st.integers(0, R.p - 1))
        if twt == 0 and mwt == 0:
            twt = -1
        terms.append(LineTerm(c1, twt, mwt, 1))
    return KClass(R, terms)


R2 = ring(2, ("x", "y"))


@given(kclasses(R2), kclasses(R2))
def test_big_omega_multiplicative(V, W):
    assert big_omega(V + W, 4).agrees_with(big_omega(V, 4) * big_omega(W, 4))


@given(kclasses(R2))
def test_partition_exact(W):
    D = decompose(W)
    assert D.plus + D.minus + D.tfixed == W
    total = KClass.zero(R2)
    for part in D.by_mwt.values():
        total = total + part
    assert total == W


# todd

def test_todd_examples():
    R = ring(2)
    x = R.gen("x")
    assert todd(KClass.zero(R)) == R.one()
    td = R.one() + x.scale(Fraction(1, 2)) + (x * x).scale(Fraction(1, 12))
    assert todd(line(R, x)) == td
    assert todd(line(R, x, mult=2)) == td * td
    assert todd(line(R, x, mult=2)) == R.one() + x + (x * x).scale(Fraction(1, 4) + Fraction(1, 6))
    assert todd(line(R, x, mult=-1)) == g_inv(td)
    with pytest.raises(StructureError):
        todd(line(R, x, -1))


def test_todd_series_matches_sympy():
    z = sympy.symbols("z")
    ser = sympy.series(z / (1 - sympy.exp(-z)), z, 0, 9).removeO()
    want = [sympy.Rational(ser.coeff(z, k)) for k in range(9)]
    got = todd_coefficients(8)
    assert [Fraction(int(w.p), int(w.q)) for w in want] == list(got)


# inversion

def test_inversion_round_trip_and_rank():
    rng = random.Random(11)
    for p in (3, 5):
        for _ in range(30):
            R = _ring(p, rng.randint(0, 3))
            V = random_effective_moving(rng, R)
            lam = lambda_dual(V.dual()).coefficient(0)
            assert lam * g_inv(lam) == R.one()
            expect = LocalizedCyclo.one(p)
            for l, r in V.rank_by_mwt().items():
                if l and r:
                    expect = expect * (1 - zl(p, l)) ** r
            assert equivariant_rank(V.dual()) == expect


# pth_root

def test_pth_root_examples():
    R0 = ring(0, ())
    one = TSeries.one(R0)
    assert pth_root(one, 1) == one
    R = ring(2)
    x = R.gen("x")
    B = TSeries.const(R, R.one() + x.scale(3) + (x * x).scale(3))
    a = pth_root(B, 1)
    assert a.coefficient(0) == R.one() + x
    assert pth_root(TSeries.one(R0), zl(3)) == TSeries.const(R0, zl(3))


def test_pth_root_errors():
    R = ring(0, ())
    with pytest.raises(RootNormalizationError):
        pth_root(TSeries.one(R), zl(3, 0) * 2)
    with pytest.raises(RootNormalizationError):
        pth_root(TSeries.monomial(R, -1), 1)
    with pytest.raises(RootNormalizationError):
        pth_root(TSeries.one(R), 0)


def test_pth_root_of_power():
    rng = random.Random(12)
    for p in (3, 5):
        for _ in range(10):
            R = _ring(p, rng.randint(0, 2))
            a = random_series(rng, R, 3)
            r = pth_root(a ** p, a.leading_coefficient().const_coeff())
            assert r.agrees_with(a) and r.prec == a.prec
            assert (r ** p).agrees_with(a ** p)


def test_pth_root_other_branches():
    R = ring(1)
    x = R.gen("x")
    a = TSeries(R, {0: R.one() + x, -1: R.gen("x")}, -3)
    for k in range(3):
        r = pth_root(a ** 3, zl(3, k))
        assert r.agrees_with(a.scale(zl(3, k)))


# JSON

def test_kclass_json_round_trip():
    R = ring(1, ("x", "y"))
    W = line(R, R.gen("x") - R.gen("y"), -1, 2, 3) + line(R, None, 1, 0, -1)
    data = W.to_json()
    assert set(data[0]) == {"c1", "t", "zeta", "mult"}
    assert KClass.from_json(R, data) == W
