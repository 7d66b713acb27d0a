"""Truncated graded polynomial rings with cyclotomic coefficients, and t^-1 series.

Only even cohomology is modelled, so a generator of H^2 carries degree 1 and
the truncation ``d`` is the complex dimension of the component.  Coefficients
live in Q[mu_p] (``plain``) or in Q(zeta_p) (``localized``).
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from . import kernels
from .cyclotomic import (
    CycloElem,
    LocalizedCyclo,
    Rational,
    check_prime,
    format_rational,
    localize,
    parse_rational,
)
from .errors import NotInvertibleError, StructureError

Coeff = Union[CycloElem, LocalizedCyclo]
Monomial = tuple  # exponent vector aligned with RingSpec.names

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class RingSpec:
    """Generators with degrees, truncation degree and coefficient mode."""

    __slots__ = ("p", "names", "degrees", "d", "mode", "_index", "_key")

    def __init__(self, p: int, generators: Iterable[tuple[str, int]] | Mapping[str, int], d: int,
                 mode: str = "localized"):
        check_prime(p)
        gens = list(generators.items()) if isinstance(generators, Mapping) else [tuple(g) for g in generators]
        names = [g[0] for g in gens]
        if len(set(names)) != len(names):
            raise StructureError(f"generator names must be unique: {names}")
        for name, deg in gens:
            if not isinstance(name, str) or not _NAME.match(name) or name == "t":
                raise StructureError(f"bad generator name {name!r}")
            if not isinstance(deg, int) or deg < 1:
                raise StructureError(f"generator {name!r} needs integer degree >= 1, got {deg!r}")
        if not isinstance(d, int) or d < 0:
            raise StructureError(f"truncation degree must be a non-negative integer, got {d!r}")
        if mode not in ("plain", "localized"):
            raise StructureError(f"coefficient mode must be 'plain' or 'localized', got {mode!r}")
        gens.sort()
        self.p = p
        self.names = tuple(g[0] for g in gens)
        self.degrees = tuple(g[1] for g in gens)
        self.d = d
        self.mode = mode
        self._index = {n: i for i, n in enumerate(self.names)}
        self._key = (p, self.names, self.degrees, d, mode)

    @property
    def localized(self) -> bool:
        return self.mode == "localized"

    @property
    def generators(self) -> tuple[tuple[str, int], ...]:
        return tuple(zip(self.names, self.degrees))

    @property
    def coeff_type(self) -> type:
        return LocalizedCyclo if self.localized else CycloElem

    def __eq__(self, other) -> bool:
        return isinstance(other, RingSpec) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        gens = ", ".join(f"{n}:{k}" for n, k in self.generators)
        return f"RingSpec(p={self.p}, [{gens}], d={self.d}, {self.mode})"

    def with_mode(self, mode: str) -> "RingSpec":
        return RingSpec(self.p, self.generators, self.d, mode)

    def with_d(self, d: int) -> "RingSpec":
        return RingSpec(self.p, self.generators, d, self.mode)

    # coefficients

    def coerce_coeff(self, c) -> Coeff:
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            return self.coeff_type.from_rational(self.p, c)
        if isinstance(c, (CycloElem, LocalizedCyclo)):
            if c.p != self.p:
                raise StructureError(f"coefficient for p={c.p} in ring with p={self.p}")
            if isinstance(c, self.coeff_type):
                return c
            if isinstance(c, CycloElem):
                return localize(c)
            raise StructureError("cannot place a Q(zeta_p) coefficient in a plain Q[mu_p] ring")
        raise StructureError(f"not a coefficient: {c!r}")

    # monomials

    @property
    def unit_monomial(self) -> Monomial:
        return (0,) * len(self.names)

    def mono_degree(self, m: Monomial) -> int:
        return sum(e * k for e, k in zip(m, self.degrees))

    def parse_monomial(self, s: str) -> Monomial:
        s = s.strip()
        exps = [0] * len(self.names)
        if s in ("1", ""):
            return tuple(exps)
        for factor in s.split("*"):
            factor = factor.strip()
            name, _, e = factor.partition("^")
            if name not in self._index:
                raise StructureError(f"unknown generator {name!r} in monomial {s!r}")
            try:
                e = int(e) if e else 1
            except ValueError:
                raise StructureError(f"bad exponent in monomial {s!r}") from None
            if e < 0:
                raise StructureError(f"negative exponent in monomial {s!r}")
            exps[self._index[name]] += e
        return tuple(exps)

    def format_monomial(self, m: Monomial) -> str:
        parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, m) if e]
        return "*".join(parts) if parts else "1"

    def monomials_of_degree(self, k: int) -> list[Monomial]:
        out: list[Monomial] = []
        n = len(self.names)

        def rec(i: int, left: int, acc: list[int]) -> None:
            if i == n:
                if left == 0:
                    out.append(tuple(acc))
                return
            for e in range(left // self.degrees[i] + 1):
                acc.append(e)
                rec(i + 1, left - e * self.degrees[i], acc)
                acc.pop()

        rec(0, k, [])
        return sorted(out, reverse=True)

    def mono_sort_key(self, m: Monomial):
        return (self.mono_degree(m), tuple(-e for e in m))

    # element constructors

    def zero(self) -> "GradedElem":
        return GradedElem(self, {})

    def one(self) -> "GradedElem":
        return self.const(1)

    def const(self, c) -> "GradedElem":
        return GradedElem(self, {self.unit_monomial: c})

    def gen(self, name: str) -> "GradedElem":
        if name not in self._index:
            raise StructureError(f"unknown generator {name!r}")
        m = [0] * len(self.names)
        m[self._index[name]] = 1
        return GradedElem(self, {tuple(m): 1})

    def elem(self, terms: Mapping[str, object]) -> "GradedElem":
        """Build an element from {monomial-string: coefficient}."""
        return GradedElem(self, {self.parse_monomial(k): v for k, v in terms.items()})


class GradedElem:
    """Element of a truncated graded ring; zero coefficients are never stored."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: RingSpec, terms: Mapping[Monomial, object] | None = None):
        self.ring = ring
        out: dict[Monomial, Coeff] = {}
        nvar = len(ring.names)
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != nvar:
                raise StructureError(f"monomial {m} has wrong arity for {ring!r}")
            if ring.mono_degree(m) > ring.d:
                continue
            c = ring.coerce_coeff(c)
            if m in out:
                c = out[m] + c
            if c.is_zero():
                out.pop(m, None)
            else:
                out[m] = c
        self._terms = out

    @classmethod
    def _raw(cls, ring: RingSpec, terms: dict) -> "GradedElem":
        obj = object.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        return obj

    @property
    def terms(self) -> dict[Monomial, Coeff]:
        return dict(self._terms)

    def items(self) -> list[tuple[Monomial, Coeff]]:
        """Terms in canonical monomial order."""
        return sorted(self._terms.items(), key=lambda kv: self.ring.mono_sort_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, m: Monomial | str) -> Coeff:
        if isinstance(m, str):
            m = self.ring.parse_monomial(m)
        c = self._terms.get(tuple(m))
        return c if c is not None else self.ring.coeff_type.zero(self.ring.p)

    def const_coeff(self) -> Coeff:
        return self.coefficient(self.ring.unit_monomial)

    def degree_part(self, k: int) -> "GradedElem":
        md = self.ring.mono_degree
        return GradedElem._raw(self.ring, {m: c for m, c in self._terms.items() if md(m) == k})

    def degrees(self) -> set[int]:
        md = self.ring.mono_degree
        return {md(m) for m in self._terms}

    def is_homogeneous(self, k: int) -> bool:
        return self.degrees() <= {k}

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self._terms.values())

    def key(self) -> tuple:
        """Hashable canonical form."""
        return tuple(sorted((m, c.numerators, c.denominator) for m, c in self._terms.items()))

    # arithmetic

    def _check(self, other: "GradedElem") -> None:
        if other.ring != self.ring:
            raise StructureError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def _coerce(self, other):
        if isinstance(other, GradedElem):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, CycloElem, LocalizedCyclo)) and not isinstance(other, bool):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            s = out[m] + c if m in out else c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return GradedElem._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "GradedElem":
        return GradedElem._raw(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "GradedElem":
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            if c == 0:
                return self.ring.zero()
            return GradedElem._raw(self.ring, {m: v.scale(c) for m, v in self._terms.items()})
        c = self.ring.coerce_coeff(c)
        out = {}
        for m, v in self._terms.items():
            w = v * c
            if not w.is_zero():
                out[m] = w
        return GradedElem._raw(self.ring, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloElem, LocalizedCyclo)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, GradedElem):
            return NotImplemented
        return g_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "GradedElem":
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return g_inv(self) ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(1 / Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * g_inv(o)

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedElem):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction, CycloElem, LocalizedCyclo)) and not isinstance(other, bool):
            try:
                return self == self.ring.const(other)
            except StructureError:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ring, self.key()))

    def map_coeffs(self, f: Callable[[Coeff], Coeff]) -> "GradedElem":
        return GradedElem(self.ring, {m: f(c) for m, c in self._terms.items()})

    def rescale(self, c: Rational) -> "GradedElem":
        """Multiply the degree-k part by c^k (the substitution y -> c*y on every generator)."""
        c = Fraction(c)
        md = self.ring.mono_degree
        return GradedElem(self.ring, {m: v.scale(c ** md(m)) for m, v in self._terms.items()})

    def top_degree(self) -> "GradedElem":
        return self.degree_part(self.ring.d)

    def localize(self) -> "GradedElem":
        """Image in the localized ring with the same generators."""
        if self.ring.localized:
            return self
        r = self.ring.with_mode("localized")
        return GradedElem(r, {m: localize(c) for m, c in self._terms.items()})

    def change_ring(self, ring: RingSpec) -> "GradedElem":
        """Re-embed into a ring with a superset of generators (by name)."""
        idx = []
        for n in self.ring.names:
            if n not in ring._index:
                raise StructureError(f"generator {n!r} missing from target ring")
            idx.append(ring._index[n])
        out = {}
        for m, c in self._terms.items():
            mm = [0] * len(ring.names)
            for i, e in zip(idx, m):
                mm[i] = e
            out[tuple(mm)] = c
        return GradedElem(ring, out)

    # serialization

    def to_json(self) -> dict[str, object]:
        out: dict[str, object] = {}
        for m, c in self.items():
            key = self.ring.format_monomial(m)
            out[key] = format_rational(c.rational_value()) if c.is_rational() else c.to_json()
        return out

    @classmethod
    def from_json(cls, ring: RingSpec, data: Mapping[str, object]) -> "GradedElem":
        terms = {}
        for k, v in data.items():
            if isinstance(v, list):
                c = ring.coeff_type.from_json(ring.p, v)
            else:
                c = parse_rational(v)
            terms[ring.parse_monomial(k)] = c
        return cls(ring, terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items():
            ms = self.ring.format_monomial(m)
            cs = str(c)
            if ms == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(ms)
            elif cs == "-1":
                parts.append(f"-{ms}")
            else:
                parts.append(f"({cs})*{ms}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"GradedElem({self})"


def _raw_terms(a: GradedElem) -> list:
    return [(m, list(c.numerators), c.denominator) for m, c in a._terms.items()]


def g_mul(a: GradedElem, b: GradedElem) -> GradedElem:
    """Graded product truncated at degree d."""
    a._check(b)
    ring = a.ring
    if not a._terms or not b._terms:
        return ring.zero()
    acc = kernels.graded_mul(_raw_terms(a), _raw_terms(b), ring.degrees, ring.d, ring.p, ring.localized)
    ct = ring.coeff_type
    out = {}
    for m, (num, den) in acc.items():
        if any(num):
            out[m] = ct._raw(ring.p, num, den)
    return GradedElem._raw(ring, out)


def exp_class(x: GradedElem) -> GradedElem:
    """exp(x) = sum_{n<=d} x^n/n! for x with vanishing degree-0 part."""
    if not x.const_coeff().is_zero():
        raise StructureError("exp_class needs an element with zero degree-0 part")
    ring = x.ring
    result = ring.one()
    term = ring.one()
    for n in range(1, ring.d + 1):
        term = (term * x).scale(Fraction(1, n))
        if term.is_zero():
            break
        result = result + term
    return result


def g_inv(u: GradedElem) -> GradedElem:
    """Inverse by the finite geometric series around the degree-0 coefficient."""
    ring = u.ring
    u0 = u.const_coeff()
    if ring.localized:
        if u0.is_zero():
            raise NotInvertibleError(f"degree-0 coefficient of {u} vanishes in Q(zeta_{ring.p})")
        inv0 = u0.inverse()
    else:
        inv0 = u0.inverse()  # CycloElem.inverse names the failing split component
    n = ring.one() - u.scale(inv0)  # nilpotent
    s = ring.one()
    for _ in range(ring.d):
        s = ring.one() + n * s
    return s.scale(inv0)


def top_degree(a: GradedElem) -> GradedElem:
    return a.top_degree()


def g_exp_series(coeffs: Sequence[Fraction], x: GradedElem) -> GradedElem:
    """Evaluate sum_k coeffs[k] x^k, truncated, for nilpotent x."""
    ring = x.ring
    result = ring.zero()
    power = ring.one()
    for k, c in enumerate(coeffs):
        if k > ring.d:
            break
        if c:
            result = result + power.scale(c)
        power = power * x
        if power.is_zero():
            break
    return result


class TSeries:
    """Series in t^-1 with GradedElem coefficients.

    ``prec`` is the lowest exponent known exactly; everything below it is
    unknown.  ``prec=None`` marks an exact finite sum.
    """

    __slots__ = ("ring", "_c", "prec")

    def __init__(self, ring: RingSpec, coeffs: Mapping[int, GradedElem] | None = None, prec: int | None = None):
        self.ring = ring
        self.prec = prec
        out = {}
        for n, g in (coeffs or {}).items():
            if not isinstance(g, GradedElem):
                g = ring.const(g)
            elif g.ring != ring:
                raise StructureError(f"ring mismatch: {g.ring!r} vs {ring!r}")
            if prec is not None and n < prec:
                continue
            if not g.is_zero():
                out[int(n)] = g
        self._c = out

    @classmethod
    def _raw(cls, ring: RingSpec, coeffs: dict, prec: int | None) -> "TSeries":
        obj = object.__new__(cls)
        obj.ring = ring
        obj._c = coeffs
        obj.prec = prec
        return obj

    @classmethod
    def const(cls, ring: RingSpec, c) -> "TSeries":
        g = c if isinstance(c, GradedElem) else ring.const(c)
        return cls(ring, {0: g})

    @classmethod
    def one(cls, ring: RingSpec) -> "TSeries":
        return cls.const(ring, 1)

    @classmethod
    def zero(cls, ring: RingSpec, prec: int | None = None) -> "TSeries":
        return cls._raw(ring, {}, prec)

    @classmethod
    def monomial(cls, ring: RingSpec, n: int, c=1) -> "TSeries":
        g = c if isinstance(c, GradedElem) else ring.const(c)
        return cls(ring, {n: g})

    # inspection

    def exponents(self) -> list[int]:
        return sorted(self._c, reverse=True)

    def leading_exponent(self) -> int | None:
        return max(self._c) if self._c else None

    def leading_coefficient(self) -> GradedElem:
        n = self.leading_exponent()
        return self.ring.zero() if n is None else self._c[n]

    def coefficient(self, n: int) -> GradedElem:
        if self.prec is not None and n < self.prec:
            raise StructureError(f"coefficient of t^{n} is beyond the series precision t^{self.prec}")
        return self._c.get(n, self.ring.zero())

    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        return not self._c

    def relative_depth(self) -> int | None:
        if self.prec is None:
            return None
        lead = self.leading_exponent()
        return None if lead is None else lead - self.prec

    def items(self) -> list[tuple[int, GradedElem]]:
        return [(n, self._c[n]) for n in self.exponents()]

    # arithmetic

    def _check(self, other: "TSeries") -> None:
        if other.ring != self.ring:
            raise StructureError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def _coerce(self, other):
        if isinstance(other, TSeries):
            self._check(other)
            return other
        if isinstance(other, GradedElem):
            if other.ring != self.ring:
                raise StructureError("ring mismatch")
            return TSeries(self.ring, {0: other})
        if isinstance(other, (int, Fraction, CycloElem, LocalizedCyclo)) and not isinstance(other, bool):
            return TSeries.const(self.ring, other)
        return None

    @staticmethod
    def _max_prec(a: int | None, b: int | None) -> int | None:
        if a is None:
            return b
        if b is None:
            return a
        return max(a, b)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prec = self._max_prec(self.prec, o.prec)
        out = {}
        for src in (self._c, o._c):
            for n, g in src.items():
                if prec is not None and n < prec:
                    continue
                out[n] = out[n] + g if n in out else g
        return TSeries._raw(self.ring, {n: g for n, g in out.items() if not g.is_zero()}, prec)

    __radd__ = __add__

    def __neg__(self) -> "TSeries":
        return TSeries._raw(self.ring, {n: -g for n, g in self._c.items()}, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def _product_prec(self, o: "TSeries") -> int | None:
        la, lb = self.leading_exponent(), o.leading_exponent()
        pa, pb = self.prec, o.prec
        cands = []
        if pb is not None and la is not None:
            cands.append(la + pb)
        if pa is not None and lb is not None:
            cands.append(pa + lb)
        if pa is not None and pb is not None:
            cands.append(pa + pb - 1)
        return max(cands) if cands else None

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloElem, LocalizedCyclo)) and not isinstance(other, bool):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prec = self._product_prec(o)
        if (self.is_zero() or o.is_zero()) and prec is None:
            return TSeries.zero(self.ring)
        out: dict[int, GradedElem] = {}
        for n, g in self._c.items():
            for k, h in o._c.items():
                e = n + k
                if prec is not None and e < prec:
                    continue
                gh = g * h
                if gh.is_zero():
                    continue
                out[e] = out[e] + gh if e in out else gh
        return TSeries._raw(self.ring, {n: g for n, g in out.items() if not g.is_zero()}, prec)

    __rmul__ = __mul__

    def scale(self, c) -> "TSeries":
        out = {}
        for n, g in self._c.items():
            h = g.scale(c)
            if not h.is_zero():
                out[n] = h
        return TSeries._raw(self.ring, out, self.prec)

    def shift(self, k: int) -> "TSeries":
        """Multiply by t^k."""
        return TSeries._raw(self.ring, {n + k: g for n, g in self._c.items()},
                            None if self.prec is None else self.prec + k)

    def __pow__(self, e: int) -> "TSeries":
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = TSeries.one(self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self, depth: int | None = None) -> "TSeries":
        """Inverse via the recursion on t-depth; leading coefficient must be a unit.

        For an exact input ``depth`` defaults to 2d+4; for a truncated input
        the relative depth of the input caps the result.
        """
        lead = self.leading_exponent()
        if lead is None:
            raise NotInvertibleError("zero series is not invertible")
        rel = self.relative_depth()
        if depth is None:
            depth = rel if rel is not None else default_depth(self.ring)
        elif rel is not None:
            depth = min(depth, rel)
        a = [self._c.get(lead - j, None) for j in range(depth + 1)]
        inv0 = g_inv(a[0])
        b: list[GradedElem] = [inv0]
        for k in range(1, depth + 1):
            acc = self.ring.zero()
            for j in range(1, k + 1):
                aj = a[j]
                if aj is not None and not b[k - j].is_zero():
                    acc = acc + aj * b[k - j]
            b.append(-(acc * inv0))
        return TSeries(self.ring, {-lead - k: bk for k, bk in enumerate(b)}, -lead - depth)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(1 / Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def truncate(self, prec: int) -> "TSeries":
        p = self._max_prec(self.prec, prec)
        return TSeries._raw(self.ring, {n: g for n, g in self._c.items() if n >= p}, p)

    def substitute_t(self, k: int) -> "TSeries":
        """t -> t^k for a positive integer k."""
        if k < 1:
            raise StructureError("substitution exponent must be positive")
        prec = None if self.prec is None else k * (self.prec - 1) + 1
        return TSeries._raw(self.ring, {n * k: g for n, g in self._c.items()}, prec)

    def map_coeffs(self, f: Callable[[GradedElem], GradedElem], ring: RingSpec | None = None) -> "TSeries":
        ring = ring or self.ring
        return TSeries(ring, {n: f(g) for n, g in self._c.items()}, self.prec)

    def rescale(self, c: Rational) -> "TSeries":
        return self.map_coeffs(lambda g: g.rescale(c))

    def top_degree(self) -> "TSeries":
        return self.map_coeffs(lambda g: g.top_degree())

    def agrees_with(self, other: "TSeries", through: int | None = None) -> bool:
        """Equality of all coefficients at exponents >= the common precision.

        ``through`` optionally raises the comparison floor.
        """
        self._check(other)
        floor = self._max_prec(self.prec, other.prec)
        floor = self._max_prec(floor, through)
        keys = set(self._c) | set(other._c)
        for n in keys:
            if floor is not None and n < floor:
                continue
            if self._c.get(n, self.ring.zero()) != other._c.get(n, self.ring.zero()):
                return False
        return True

    def __eq__(self, other) -> bool:
        if isinstance(other, TSeries):
            return self.ring == other.ring and self.agrees_with(other)
        o = self._coerce(other) if not isinstance(other, bool) else None
        if o is None:
            return NotImplemented
        return self.agrees_with(o)

    __hash__ = None  # type: ignore[assignment]

    def to_json(self) -> dict[str, object]:
        return {
            "prec": self.prec,
            "terms": [{"t": n, "coeff": g.to_json()} for n, g in self.items()],
        }

    @classmethod
    def from_json(cls, ring: RingSpec, data: Mapping[str, object]) -> "TSeries":
        coeffs = {int(t["t"]): GradedElem.from_json(ring, t["coeff"]) for t in data.get("terms", [])}
        return cls(ring, coeffs, data.get("prec"))

    def __str__(self) -> str:
        if not self._c:
            body = "0"
        else:
            parts = []
            for n, g in self.items():
                gs = str(g)
                if n == 0:
                    parts.append(gs if " " not in gs else f"({gs})")
                else:
                    tp = "t" if n == 1 else f"t^{n}"
                    parts.append(tp if gs == "1" else f"({gs})*{tp}")
            body = " + ".join(parts)
        if self.prec is not None:
            body += f" + O(t^{self.prec - 1})"
        return body

    def __repr__(self) -> str:
        return f"TSeries({self})"


def default_depth(ring: RingSpec) -> int:
    return 2 * ring.d + 4


def geometric_series(ring: RingSpec, x: GradedElem, step: int, depth: int) -> TSeries:
    """sum_{n>=0} (x t^-step)^n through relative depth ``depth`` (step >= 1)."""
    if step < 1:
        raise StructureError("geometric_series needs a positive t-step")
    coeffs = {}
    power = ring.one()
    for n in range(depth // step + 1):
        coeffs[-n * step] = power
        power = power * x
    return TSeries(ring, coeffs, -depth)


def iter_monomials_upto(ring: RingSpec, d: int | None = None) -> Iterator[Monomial]:
    for k in range((ring.d if d is None else d) + 1):
        yield from ring.monomials_of_degree(k)
