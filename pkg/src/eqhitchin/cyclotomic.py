"""Exact arithmetic in Q[mu_p], its splitting Q x Q(zeta_p), and the localization.

An element of the group ring is a vector of p rationals, entry l being the
coefficient of zeta^l.  Elements of Q(zeta_p) use the power basis
1, zeta, ..., zeta^(p-2).  Both are stored as an integer numerator vector over
one positive common denominator; ``coeffs`` gives the Fraction view.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

from . import kernels
from .errors import NotInvertibleError, StructureError

Rational = Union[int, Fraction]


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Return p if it is an odd prime, else raise StructureError."""
    if not isinstance(p, int) or isinstance(p, bool) or p < 3 or p % 2 == 0:
        raise StructureError(f"p must be an odd prime >= 3, got {p!r}")
    f = 3
    while f * f <= p:
        if p % f == 0:
            raise StructureError(f"p must be prime, got {p} = {f}*{p // f}")
        f += 2
    return p


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-x for x in num]
        den = -den
    g = kernels.vec_content(num, den)
    if g != 1:
        num = [x // g for x in num]
        den //= g
    return tuple(num), den


def _from_rationals(values: Iterable[Rational]) -> tuple[tuple[int, ...], int]:
    fr = [v if isinstance(v, Fraction) else Fraction(v) for v in values]
    den = 1
    for f in fr:
        d = f.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    return _normalize([f.numerator * (den // f.denominator) for f in fr], den)


def parse_rational(s: str | int | Fraction) -> Fraction:
    """Parse "num/den", "num" or a number into a Fraction."""
    if isinstance(s, (int, Fraction)) and not isinstance(s, bool):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise StructureError(f"bad rational {s!r}") from exc
    raise StructureError(f"bad rational {s!r}")


def format_rational(x: Fraction) -> str:
    """Canonical "num/den" serialization (denominator always present)."""
    return f"{x.numerator}/{x.denominator}"


def _pretty_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _pretty(coeffs: Sequence[Fraction], sym: str = "ζ") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if k == 0:
            body = _pretty_rational(abs(c))
        else:
            mono = sym if k == 1 else f"{sym}^{k}"
            body = mono if abs(c) == 1 else f"{_pretty_rational(abs(c))}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class _Base:
    """Shared storage and arithmetic for the two coefficient rings."""

    __slots__ = ("p", "_num", "_den")
    _size_offset = 0  # length = p - offset

    def __init__(self, p: int, coeffs: Sequence[Rational]):
        check_prime(p)
        coeffs = list(coeffs)
        n = p - self._size_offset
        if len(coeffs) != n:
            raise StructureError(f"{type(self).__name__} for p={p} needs {n} coefficients, got {len(coeffs)}")
        self.p = p
        self._num, self._den = _from_rationals(coeffs)

    @classmethod
    def _raw(cls, p: int, num, den: int = 1):
        obj = object.__new__(cls)
        obj.p = p
        obj._num, obj._den = _normalize(list(num), den)
        return obj

    @classmethod
    def zero(cls, p: int):
        check_prime(p)
        return cls._raw(p, [0] * (p - cls._size_offset))

    @classmethod
    def from_rational(cls, p: int, c: Rational):
        check_prime(p)
        c = Fraction(c)
        v = [0] * (p - cls._size_offset)
        v[0] = c.numerator
        return cls._raw(p, v, c.denominator)

    @classmethod
    def one(cls, p: int):
        return cls.from_rational(p, 1)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._den) for x in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        """True when the element is a rational multiple of 1."""
        return not any(self._num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise StructureError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def __bool__(self) -> bool:
        return self.is_zero() is False

    def _coerce(self, other):
        if isinstance(other, type(self)):
            if other.p != self.p:
                raise StructureError(f"mismatched p: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return type(self).from_rational(self.p, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._den == o._den:
            return self._raw(self.p, [a + b for a, b in zip(self._num, o._num)], self._den)
        g = gcd(self._den, o._den)
        fa, fb = o._den // g, self._den // g
        return self._raw(self.p, [a * fa + b * fb for a, b in zip(self._num, o._num)], self._den * fa)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.p, [-a for a in self._num], self._den)

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

    def scale(self, c: Rational):
        c = Fraction(c)
        return self._raw(self.p, [a * c.numerator for a in self._num], self._den * c.denominator)

    def _kernel_mul(self, a, b):
        raise NotImplementedError

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._raw(self.p, self._kernel_mul(self._num, o._num), self._den * o._den)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = type(self).one(self.p)
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
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def inverse(self):
        raise NotImplementedError

    def __eq__(self, other):
        if isinstance(other, type(self)):
            return self.p == other.p and self._num == other._num and self._den == other._den
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_rational() and self.rational_value() == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self._num[0], self._den))
        return hash((type(self).__name__, self.p, self._num, self._den))

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, p: int, data: Sequence[str]):
        return cls(p, [parse_rational(s) for s in data])

    def __str__(self) -> str:
        return _pretty(self.coeffs)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(p={self.p}, {self})"


class CycloElem(_Base):
    """Element of Q[mu_p] = Q[Y]/(Y^p - 1)."""

    __slots__ = ()
    _size_offset = 0

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "CycloElem":
        check_prime(p)
        v = [0] * p
        v[k % p] = 1
        return cls._raw(p, v)

    @classmethod
    def from_weights(cls, p: int, weights: dict[int, Rational]) -> "CycloElem":
        """Build sum_l c_l zeta^l from a map l -> c_l (l taken mod p)."""
        check_prime(p)
        v = [Fraction(0)] * p
        for l, c in weights.items():
            v[l % p] += Fraction(c)
        return cls(p, v)

    def _kernel_mul(self, a, b):
        return kernels.cyclic_mul(a, b, self.p)

    def aug(self) -> Fraction:
        """Image under zeta -> 1."""
        return Fraction(sum(self._num), self._den)

    def coefficient(self, l: int) -> Fraction:
        return Fraction(self._num[l % self.p], self._den)

    def shift(self, k: int) -> "CycloElem":
        """Multiply by zeta^k."""
        p = self.p
        k %= p
        return self._raw(p, [self._num[(i - k) % p] for i in range(p)], self._den)

    def galois(self, k: int) -> "CycloElem":
        """Apply zeta -> zeta^k (k prime to p)."""
        p = self.p
        if k % p == 0:
            raise StructureError("Galois exponent must be prime to p")
        v = [0] * p
        for i, c in enumerate(self._num):
            v[(i * k) % p] += c
        return self._raw(p, v, self._den)

    def is_integral(self) -> bool:
        return self._den == 1

    def split(self) -> "SplitCyclo":
        return split(self)

    def localize(self) -> "LocalizedCyclo":
        return localize(self)

    def inverse(self) -> "CycloElem":
        """Inverse in Q[mu_p]; both split components must be nonzero."""
        s = split(self)
        if s.aug == 0:
            raise NotInvertibleError(f"{self} has zero augmentation component (zeta -> 1)")
        if s.prim.is_zero():
            raise NotInvertibleError(f"{self} has zero Q(zeta_{self.p}) component (divisible by Phi_p)")
        return unsplit(SplitCyclo(self.p, 1 / s.aug, s.prim.inverse()))


class LocalizedCyclo(_Base):
    """Element of Q(zeta_p), the localization of Q[mu_p] at the elements 1 - zeta^l."""

    __slots__ = ()
    _size_offset = 1

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "LocalizedCyclo":
        return localize(CycloElem.zeta(p, k))

    def _kernel_mul(self, a, b):
        return kernels.field_mul(a, b, self.p)

    def galois(self, k: int) -> "LocalizedCyclo":
        return localize(unsplit(SplitCyclo(self.p, Fraction(0), self)).galois(k))

    def norm(self) -> Fraction:
        """Field norm to Q, the product of all Galois conjugates."""
        acc = self
        for k in range(2, self.p):
            acc = acc * self.galois(k)
        return acc.rational_value()

    def inverse(self) -> "LocalizedCyclo":
        return loc_inv(self)

    def lift(self) -> CycloElem:
        """The group-ring element with this prim part and zero augmentation."""
        return unsplit(SplitCyclo(self.p, Fraction(0), self))


class SplitCyclo:
    """Pair (aug, prim) in Q x Q(zeta_p)."""

    __slots__ = ("p", "aug", "prim")

    def __init__(self, p: int, aug: Rational, prim: LocalizedCyclo | Sequence[Rational]):
        check_prime(p)
        self.p = p
        self.aug = Fraction(aug)
        if not isinstance(prim, LocalizedCyclo):
            prim = LocalizedCyclo(p, prim)
        if prim.p != p:
            raise StructureError(f"mismatched p: {p} vs {prim.p}")
        self.prim = prim

    def _check(self, other: "SplitCyclo") -> None:
        if not isinstance(other, SplitCyclo) or other.p != self.p:
            raise StructureError("SplitCyclo operands must share p")

    def __add__(self, other: "SplitCyclo") -> "SplitCyclo":
        self._check(other)
        return SplitCyclo(self.p, self.aug + other.aug, self.prim + other.prim)

    def __mul__(self, other: "SplitCyclo") -> "SplitCyclo":
        self._check(other)
        return SplitCyclo(self.p, self.aug * other.aug, self.prim * other.prim)

    def __eq__(self, other) -> bool:
        return isinstance(other, SplitCyclo) and (self.p, self.aug, self.prim) == (other.p, other.aug, other.prim)

    def __hash__(self):
        return hash((self.p, self.aug, self.prim))

    def __repr__(self) -> str:
        return f"SplitCyclo(p={self.p}, aug={self.aug}, prim={self.prim})"


def _same_p(a: _Base, b: _Base) -> None:
    if a.p != b.p:
        raise StructureError(f"mismatched p: {a.p} vs {b.p}")


def cyc_mul(a: CycloElem, b: CycloElem) -> CycloElem:
    _same_p(a, b)
    return a * b


def phi_p(p: int) -> CycloElem:
    """Phi_p(zeta) = 1 + zeta + ... + zeta^(p-1)."""
    check_prime(p)
    return CycloElem._raw(p, [1] * p)


def split(a: CycloElem) -> SplitCyclo:
    return SplitCyclo(a.p, a.aug(), localize(a))


def localize(a: CycloElem) -> LocalizedCyclo:
    # zeta^(p-1) = -(1 + ... + zeta^(p-2))
    top = a._num[-1]
    return LocalizedCyclo._raw(a.p, [x - top for x in a._num[:-1]], a._den)


def unsplit(s: SplitCyclo) -> CycloElem:
    """Inverse of ``split`` (Chinese remainder with Phi_p(1) = p)."""
    p = s.p
    prim = s.prim
    c = (s.aug - Fraction(sum(prim._num), prim._den)) / p
    base = [Fraction(x, prim._den) for x in prim._num] + [Fraction(0)]
    return CycloElem(p, [b + c for b in base])


# polynomial helpers over Q for the extended Euclid, low degree first


def _trim(f: list[Fraction]) -> list[Fraction]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _polydivmod(f: list[Fraction], g: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    f = list(f)
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 1)
    lead = g[-1]
    while len(f) >= len(g) and f:
        shift = len(f) - len(g)
        c = f[-1] / lead
        q[shift] = c
        for i, gi in enumerate(g):
            f[i + shift] -= c * gi
        _trim(f)
    return _trim(q), f


def _polysub_mul(a: list[Fraction], q: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = list(a) + [Fraction(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, qi in enumerate(q):
        if qi:
            for j, bj in enumerate(b):
                out[i + j] -= qi * bj
    return _trim(out)


def loc_inv(a: LocalizedCyclo) -> LocalizedCyclo:
    """Inverse in Q(zeta_p) by the extended Euclidean algorithm against Phi_p."""
    if not isinstance(a, LocalizedCyclo):
        raise StructureError("loc_inv expects a LocalizedCyclo")
    if a.is_zero():
        raise NotInvertibleError(f"zero in Q(zeta_{a.p}) is not invertible (element of the kernel of localization)")
    p = a.p
    if a.is_rational():
        return LocalizedCyclo.from_rational(p, 1 / a.rational_value())
    # invariant: s_i * f == r_i (mod Phi_p)
    r0 = [Fraction(1)] * p
    r1 = _trim([Fraction(x) for x in a._num])
    s0: list[Fraction] = []
    s1 = [Fraction(1)]
    while len(r1) > 1:
        q, r = _polydivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _polysub_mul(s0, q, s1)
    # r1 is a nonzero constant because Phi_p is irreducible
    c = r1[0]
    coeffs = [Fraction(0)] * (p - 1)
    for i, x in enumerate(s1):
        coeffs[i] = x * a._den / c
    return LocalizedCyclo(p, coeffs)


def zeta_hat(p: int, k: int = 1) -> CycloElem:
    return CycloElem.zeta(p, k)


def to_localized(x, p: int) -> LocalizedCyclo:
    """Coerce a rational, CycloElem or LocalizedCyclo into Q(zeta_p)."""
    if isinstance(x, LocalizedCyclo):
        if x.p != p:
            raise StructureError(f"mismatched p: {x.p} vs {p}")
        return x
    if isinstance(x, CycloElem):
        if x.p != p:
            raise StructureError(f"mismatched p: {x.p} vs {p}")
        return localize(x)
    return LocalizedCyclo.from_rational(p, x)
