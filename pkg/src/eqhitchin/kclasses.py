"""Virtual T x mu_p equivariant K-classes in splitting-principle form.

A class is a signed multiset of line terms (c1, twt, mwt, mult): the line with
first Chern class c1, torus weight t^twt and mu_p weight zeta^mwt.  The
operations below return Chern characters as :class:`TSeries`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .cyclotomic import CycloElem, LocalizedCyclo, Rational, check_prime
from .errors import DivergenceError, NotInvertibleError, RootNormalizationError, StructureError
from .graded import (
    GradedElem,
    RingSpec,
    TSeries,
    default_depth,
    exp_class,
    g_exp_series,
    g_inv,
    geometric_series,
)


@dataclass(frozen=True)
class LineTerm:
    c1: GradedElem
    twt: int
    mwt: int
    mult: int = 1

    def __post_init__(self):
        if not isinstance(self.c1, GradedElem):
            raise StructureError("LineTerm.c1 must be a GradedElem")
        if not self.c1.is_homogeneous(1):
            raise StructureError(f"first Chern class must be homogeneous of degree 1, got {self.c1}")
        if not self.c1.is_rational():
            raise StructureError(f"first Chern class must have rational coefficients, got {self.c1}")
        p = self.c1.ring.p
        object.__setattr__(self, "mwt", int(self.mwt) % p)
        object.__setattr__(self, "twt", int(self.twt))
        object.__setattr__(self, "mult", int(self.mult))

    @property
    def ring(self) -> RingSpec:
        return self.c1.ring

    def key(self) -> tuple:
        return (self.twt, self.mwt, self.c1.key())

    def dual(self) -> "LineTerm":
        return LineTerm(-self.c1, -self.twt, -self.mwt, self.mult)

    def with_mult(self, mult: int) -> "LineTerm":
        return LineTerm(self.c1, self.twt, self.mwt, mult)

    def to_json(self) -> dict:
        return {"c1": self.c1.to_json(), "t": self.twt, "zeta": self.mwt, "mult": self.mult}

    def __str__(self) -> str:
        return f"{self.mult}*[c1={self.c1}, t^{self.twt}, zeta^{self.mwt}]"


class KClass:
    """Canonical virtual class: equal (c1, twt, mwt) merged, zero multiplicities dropped."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingSpec, terms: Iterable[LineTerm] = ()):
        merged: dict[tuple, LineTerm] = {}
        for t in terms:
            if t.ring != ring:
                raise StructureError(f"line term ring {t.ring!r} differs from {ring!r}")
            k = t.key()
            if k in merged:
                merged[k] = merged[k].with_mult(merged[k].mult + t.mult)
            else:
                merged[k] = t
        self.ring = ring
        self.terms = tuple(merged[k] for k in sorted(merged) if merged[k].mult != 0)

    # constructors

    @classmethod
    def zero(cls, ring: RingSpec) -> "KClass":
        return cls(ring)

    @classmethod
    def line(cls, ring: RingSpec, c1: GradedElem | None = None, twt: int = 0, mwt: int = 0,
             mult: int = 1) -> "KClass":
        return cls(ring, [LineTerm(ring.zero() if c1 is None else c1, twt, mwt, mult)])

    @classmethod
    def trivial(cls, ring: RingSpec, rank: int = 1) -> "KClass":
        return cls.line(ring, mult=rank)

    # arithmetic

    def _check(self, other: "KClass") -> None:
        if not isinstance(other, KClass) or other.ring != self.ring:
            raise StructureError("KClass operands must share a ring")

    def __add__(self, other: "KClass") -> "KClass":
        self._check(other)
        return KClass(self.ring, self.terms + other.terms)

    def __neg__(self) -> "KClass":
        return KClass(self.ring, [t.with_mult(-t.mult) for t in self.terms])

    def __sub__(self, other: "KClass") -> "KClass":
        self._check(other)
        return self + (-other)

    def __mul__(self, other) -> "KClass":
        if isinstance(other, int) and not isinstance(other, bool):
            return KClass(self.ring, [t.with_mult(t.mult * other) for t in self.terms])
        if isinstance(other, CycloElem):
            return self.times_group_ring(other)
        if isinstance(other, KClass):
            return self.tensor(other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, KClass) and self.ring == other.ring and self._keyed() == other._keyed()

    def __hash__(self) -> int:
        return hash((self.ring, tuple(sorted(self._keyed().items()))))

    def _keyed(self) -> dict:
        return {t.key(): t.mult for t in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def dual(self) -> "KClass":
        return KClass(self.ring, [t.dual() for t in self.terms])

    def twist(self, twt: int = 0, mwt: int = 0, c1: GradedElem | None = None) -> "KClass":
        """Tensor with the line t^twt zeta^mwt e^c1."""
        c = self.ring.zero() if c1 is None else c1
        return KClass(self.ring, [LineTerm(t.c1 + c, t.twt + twt, t.mwt + mwt, t.mult) for t in self.terms])

    def tensor(self, other: "KClass") -> "KClass":
        self._check(other)
        out = []
        for a in self.terms:
            for b in other.terms:
                out.append(LineTerm(a.c1 + b.c1, a.twt + b.twt, a.mwt + b.mwt, a.mult * b.mult))
        return KClass(self.ring, out)

    def times_group_ring(self, r: CycloElem | Mapping[int, int]) -> "KClass":
        """Module action of Z[mu_p]: sum_l r_l zeta^l shifts mu_p weights."""
        p = self.ring.p
        if isinstance(r, CycloElem):
            if r.p != p:
                raise StructureError(f"group-ring element for p={r.p} acting on p={p}")
            if not r.is_integral():
                raise StructureError("only integral group-ring elements act on K-classes")
            weights = {l: c for l, c in enumerate(r.numerators) if c}
        else:
            weights = {int(l) % p: int(c) for l, c in r.items() if c}
        out = []
        for t in self.terms:
            for l, c in weights.items():
                out.append(LineTerm(t.c1, t.twt, t.mwt + l, t.mult * c))
        return KClass(self.ring, out)

    # ranks and parts

    def rank(self) -> int:
        return sum(t.mult for t in self.terms)

    def filter(self, pred) -> "KClass":
        return KClass(self.ring, [t for t in self.terms if pred(t)])

    def pi(self, l: int) -> "KClass":
        l %= self.ring.p
        return self.filter(lambda t: t.mwt == l)

    def plus(self) -> "KClass":
        return self.filter(lambda t: t.twt > 0)

    def minus(self) -> "KClass":
        return self.filter(lambda t: t.twt < 0)

    def tfixed(self) -> "KClass":
        return self.filter(lambda t: t.twt == 0)

    def tmufixed(self) -> "KClass":
        return self.filter(lambda t: t.twt == 0 and t.mwt == 0)

    def rank_by_mwt(self) -> dict[int, int]:
        out = {l: 0 for l in range(self.ring.p)}
        for t in self.terms:
            out[t.mwt] += t.mult
        return out

    def change_ring(self, ring: RingSpec) -> "KClass":
        return KClass(ring, [LineTerm(t.c1.change_ring(ring), t.twt, t.mwt, t.mult) for t in self.terms])

    # serialization

    def to_json(self) -> list[dict]:
        return [t.to_json() for t in self.terms]

    @classmethod
    def from_json(cls, ring: RingSpec, data: Sequence[Mapping]) -> "KClass":
        terms = []
        for item in data:
            try:
                c1 = GradedElem.from_json(ring, item.get("c1", {}))
                terms.append(LineTerm(c1, int(item.get("t", 0)), int(item.get("zeta", 0)), int(item.get("mult", 1))))
            except (KeyError, TypeError, ValueError) as exc:
                raise StructureError(f"bad line term {item!r}: {exc}") from exc
        return cls(ring, terms)

    def __str__(self) -> str:
        return " + ".join(str(t) for t in self.terms) if self.terms else "0"

    def __repr__(self) -> str:
        return f"KClass({self})"


@dataclass(frozen=True)
class Decomposition:
    plus: KClass
    minus: KClass
    tfixed: KClass
    tmufixed: KClass
    by_mwt: dict


def decompose(W: KClass) -> Decomposition:
    return Decomposition(
        plus=W.plus(),
        minus=W.minus(),
        tfixed=W.tfixed(),
        tmufixed=W.tmufixed(),
        by_mwt={l: W.pi(l) for l in range(W.ring.p)},
    )


def _zeta(ring: RingSpec, k: int):
    c = CycloElem.zeta(ring.p, k)
    return ring.coerce_coeff(c)


def _line_ch(ring: RingSpec, c1: GradedElem, twt: int, mwt: int) -> TSeries:
    return TSeries(ring, {twt: exp_class(c1).scale(_zeta(ring, mwt))})


def ch(W: KClass, depth: int | None = None) -> TSeries:
    """Equivariant Chern character, exact (a finite sum)."""
    ring = W.ring
    out = TSeries.zero(ring)
    for t in W.terms:
        out = out + _line_ch(ring, t.c1, t.twt, t.mwt).scale(t.mult)
    return out


def _one_minus(ring: RingSpec, c1: GradedElem, twt: int, mwt: int) -> TSeries:
    """1 - t^twt zeta^mwt e^c1."""
    return TSeries.one(ring) - _line_ch(ring, c1, twt, mwt)


def lambda_dual(W: KClass, depth: int | None = None) -> TSeries:
    """ch of lambda(W*) = prod (1 - t^-twt zeta^-mwt e^-c1)^mult."""
    ring = W.ring
    out = TSeries.one(ring)
    for t in W.terms:
        f = _one_minus(ring, -t.c1, -t.twt, -t.mwt)
        if t.mult > 0:
            out = out * f ** t.mult
        else:
            out = out * _invert_factor(f, t, depth) ** (-t.mult)
    return out


def _invert_factor(f: TSeries, t: LineTerm, depth: int | None) -> TSeries:
    ring = f.ring
    if t.twt == 0:
        g = f.coefficient(0)
        try:
            return TSeries(ring, {0: g_inv(g)})
        except NotInvertibleError as exc:
            raise NotInvertibleError(f"factor for {t} is not invertible: {exc}") from exc
    return f.inverse(default_depth(ring) if depth is None else depth)


def sym_all(W: KClass, depth: int | None = None) -> TSeries:
    """ch of the total symmetric power: prod (1 - t^twt zeta^mwt e^c1)^(-mult)."""
    ring = W.ring
    depth = default_depth(ring) if depth is None else depth
    out = TSeries.one(ring)
    for t in W.terms:
        if t.mult < 0:
            out = out * _one_minus(ring, t.c1, t.twt, t.mwt) ** (-t.mult)
            continue
        if t.twt > 0:
            raise DivergenceError(f"symmetric powers of {t} diverge in t^-1 (positive torus weight)")
        if t.twt < 0:
            x = exp_class(t.c1).scale(_zeta(ring, t.mwt))
            f = geometric_series(ring, x, -t.twt, depth)
        else:
            if t.mwt == 0:
                raise DivergenceError(f"symmetric powers of the weight-zero term {t} diverge")
            if not ring.localized:
                raise NotInvertibleError(
                    f"s({t}) needs 1 - zeta^{t.mwt} inverted; use localized coefficients")
            g = ring.one() - exp_class(t.c1).scale(_zeta(ring, t.mwt))
            f = TSeries(ring, {0: g_inv(g)})
        out = out * f ** t.mult
    return out


def det_class(W: KClass) -> LineTerm:
    ring = W.ring
    c1 = ring.zero()
    twt = mwt = 0
    for t in W.terms:
        c1 = c1 + t.c1.scale(t.mult)
        twt += t.mult * t.twt
        mwt += t.mult * t.mwt
    return LineTerm(c1, twt, mwt, 1)


def omega(W: KClass, depth: int | None = None) -> TSeries:
    """omega(W) = s((W+)*) s(W-) det(W-)."""
    ring = W.ring
    wm = W.minus()
    dt = det_class(wm)
    return (sym_all(W.plus().dual(), depth) * sym_all(wm, depth)) * _line_ch(ring, dt.c1, dt.twt, dt.mwt)


def big_omega(W: KClass, depth: int | None = None) -> TSeries:
    """Omega(W) = omega(W) / lambda((W^T - W^{T x mu})*)."""
    ring = W.ring
    if not ring.localized:
        raise NotInvertibleError("Omega needs localized coefficients (the lambda denominator has zero augmentation)")
    moving = W.tfixed() - W.tmufixed()
    lam = lambda_dual(moving, depth).coefficient(0)
    try:
        inv = g_inv(lam)
    except NotInvertibleError as exc:
        raise NotInvertibleError(f"lambda denominator of {moving} is not invertible: {exc}") from exc
    return omega(W, depth) * TSeries(ring, {0: inv})


@lru_cache(maxsize=None)
def todd_coefficients(n: int) -> tuple[Fraction, ...]:
    """Coefficients of z/(1 - e^-z) through z^n."""
    # (1 - e^-z)/z = sum_k (-1)^k z^k/(k+1)!
    a = [Fraction((-1) ** k, _fact(k + 1)) for k in range(n + 1)]
    b = [Fraction(0)] * (n + 1)
    b[0] = 1 / a[0]
    for k in range(1, n + 1):
        b[k] = -sum(a[j] * b[k - j] for j in range(1, k + 1)) / a[0]
    return tuple(b)


def _fact(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def todd(W: KClass) -> GradedElem:
    """Non-equivariant Todd class prod (c1/(1 - e^-c1))^mult."""
    ring = W.ring
    coeffs = todd_coefficients(ring.d)
    out = ring.one()
    for t in W.terms:
        if t.twt != 0 or t.mwt != 0:
            raise StructureError(f"todd needs weight-zero terms, got {t}")
        f = g_exp_series(coeffs, t.c1)
        if t.mult < 0:
            f = g_inv(f)
        out = out * f ** abs(t.mult)
    return out


def equivariant_rank(W: KClass) -> LocalizedCyclo | CycloElem:
    """Degree-0 part of ch(lambda(W*)) for a T-fixed class."""
    ring = W.ring
    return lambda_dual(W).coefficient(0).const_coeff()


def pth_root(B: TSeries, leading, p: int | None = None) -> TSeries:
    """The p-th root of B with prescribed degree-0 leading coefficient.

    The outer loop runs over t-depth and the inner loop over cohomological
    degree; each new coefficient costs one division by p * a00^(p-1).
    """
    ring = B.ring
    p = ring.p if p is None else check_prime(p)
    lead = B.leading_exponent()
    a00 = ring.coerce_coeff(leading)
    if a00.is_zero():
        raise RootNormalizationError("leading coefficient must be nonzero")
    if lead is None:
        raise RootNormalizationError("cannot take the root of the zero series")
    if lead % p:
        raise RootNormalizationError(f"leading t-exponent {lead} is not divisible by p={p}")
    b00 = B.coefficient(lead).const_coeff()
    if a00 ** p != b00:
        raise RootNormalizationError(f"({a00})^{p} != {b00}")
    try:
        denom = (a00 ** (p - 1)).scale(p).inverse()
    except (NotInvertibleError, ZeroDivisionError) as exc:
        raise NotInvertibleError(f"p * a00^(p-1) is not invertible: {exc}") from exc
    top = lead // p
    if B.is_exact() and B.exponents() == [lead] and B.coefficient(lead).is_homogeneous(0):
        return TSeries(ring, {top: ring.const(a00)})
    rel = B.relative_depth()
    depth = default_depth(ring) if rel is None else rel

    # a[j] = coefficient of t^(top - j); built grade by grade
    a: list[GradedElem] = []
    for j in range(depth + 1):
        target = B.coefficient(lead - j) if (B.prec is None or lead - j >= B.prec) else ring.zero()
        aj = ring.const(a00) if j == 0 else ring.zero()
        for k in range(0 if j else 1, ring.d + 1):
            # candidate a with a[j] = aj and deg-k part still unknown (zero);
            # its p-th power at t-offset j differs from target in degree k by p a00^(p-1) x
            trial = _power_coefficient(a + [aj], j, p)
            diff = (target - trial).degree_part(k)
            if not diff.is_zero():
                aj = aj + diff.scale(denom)
        a.append(aj)
    return TSeries(ring, {top - j: aj for j, aj in enumerate(a)}, top - depth)


def _power_coefficient(a: Sequence[GradedElem], j: int, p: int) -> GradedElem:
    """Coefficient at t-offset j of (sum_i a[i] t^-i)^p using a[0..j]."""
    ring = a[0].ring
    # dynamic programming over the number of factors
    cur = {0: ring.one()}
    for _ in range(p):
        nxt: dict[int, GradedElem] = {}
        for off, g in cur.items():
            for i in range(0, j - off + 1):
                if i >= len(a) or a[i].is_zero():
                    continue
                h = g * a[i]
                if h.is_zero():
                    continue
                o = off + i
                nxt[o] = nxt[o] + h if o in nxt else h
        cur = nxt
    return cur.get(j, ring.zero())
