"""Fixed-point combinatorics of a prime-order automorphism of a curve.

Input is the rotation exponent n_x (df_x = zeta^n_x) and the weight exponent
l_x (alpha_x = zeta^l_x) at each fixed point.  Everything here is residue
arithmetic mod p; points are kept in the canonical order (n, l, label) so all
outputs depend only on the multiset of point data plus labels.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .cyclotomic import check_prime
from .errors import GeometryError, StructureError


def residue(a: int, p: int) -> int:
    """[a]_p in {0, ..., p-1}."""
    return a % p


def inv_mod(a: int, p: int) -> int:
    if a % p == 0:
        raise GeometryError(f"{a} is not invertible mod {p}")
    return pow(a, -1, p)


@dataclass(frozen=True, order=True)
class Point:
    n: int
    l: int
    label: str

    def to_json(self) -> dict:
        return {"label": self.label, "n": self.n, "alpha_exp": self.l}


@dataclass(frozen=True)
class PointDerived:
    m: int
    b: int
    k_seif: int
    sqrt_exp: int

    def to_json(self) -> dict:
        return {"m": self.m, "b": self.b, "k": self.k_seif, "sqrt_exp": self.sqrt_exp}


def derive_point(p: int, point: Point) -> PointDerived:
    check_prime(p)
    n, l = point.n, point.l
    if not 1 <= n <= p - 1:
        raise GeometryError(f"rotation exponent n={n} at {point.label!r} outside 1..{p - 1}")
    if not 0 <= l <= p - 1:
        raise GeometryError(f"weight exponent l={l} at {point.label!r} outside 0..{p - 1}")
    m = (-inv_mod(n, p)) % p
    b = (-l * inv_mod(2 * n, p)) % p
    return PointDerived(m=m, b=b, k_seif=(-m) % p, sqrt_exp=(l * (p + 1) // 2) % p)


def quotient_genus(p: int, g: int, r: int) -> int:
    """Genus of X/<f> from 2 - 2g = p(2 - 2g~) - (p - 1) r."""
    check_prime(p)
    num = 2 - 2 * g + (p - 1) * r
    if num % p:
        raise GeometryError(
            f"Hurwitz relation 2-2g = p(2-2g~) - (p-1)r has no integral solution for "
            f"(p, g, r) = ({p}, {g}, {r}): 2-2g+(p-1)r = {num} is not divisible by {p}")
    chi_q = num // p
    if chi_q % 2:
        raise GeometryError(f"Hurwitz relation gives odd quotient Euler characteristic {chi_q}")
    gq = (2 - chi_q) // 2
    if gq < 0:
        raise GeometryError(f"Hurwitz relation gives negative quotient genus {gq} for (p, g, r) = ({p}, {g}, {r})")
    return gq


@dataclass(frozen=True)
class GeometryInput:
    p: int
    genus: int
    points: tuple[Point, ...]
    marked: str | None = None
    deg_lambda: int = 1
    level: int = 1
    quotient_genus: int = field(init=False)

    def __post_init__(self):
        p = check_prime(self.p)
        if not isinstance(self.genus, int) or self.genus < 2:
            raise GeometryError(f"genus must be an integer >= 2, got {self.genus!r}")
        pts = []
        for q in self.points:
            if isinstance(q, Mapping):
                q = Point(int(q["n"]), int(q.get("alpha_exp", q.get("l", 0))), str(q["label"]))
            derive_point(p, q)
            pts.append(q)
        labels = [q.label for q in pts]
        if len(set(labels)) != len(labels):
            raise GeometryError(f"point labels must be unique: {labels}")
        if self.marked is not None and self.marked not in labels:
            raise GeometryError(f"marked point {self.marked!r} is not a fixed point")
        if self.deg_lambda % 2 == 0:
            raise GeometryError(f"deg_lambda must be odd, got {self.deg_lambda}")
        object.__setattr__(self, "points", tuple(sorted(pts)))
        object.__setattr__(self, "quotient_genus", quotient_genus(p, self.genus, len(pts)))

    @property
    def r(self) -> int:
        return len(self.points)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(q.label for q in self.points)

    @property
    def chi(self) -> int:
        return 2 - 2 * self.genus

    @property
    def chi_quotient(self) -> int:
        return 2 - 2 * self.quotient_genus

    def point(self, label: str) -> Point:
        for q in self.points:
            if q.label == label:
                return q
        raise StructureError(f"unknown point {label!r}")

    def derived(self) -> dict[str, PointDerived]:
        return {q.label: derive_point(self.p, q) for q in self.points}

    def monodromy_residue(self) -> int:
        """sum_x k_x mod p; zero for data realised by an actual cyclic cover."""
        return sum(derive_point(self.p, q).k_seif for q in self.points) % self.p

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "genus": self.genus,
            "deg_lambda": self.deg_lambda,
            "level": self.level,
            "marked": self.marked,
            "points": [q.to_json() for q in self.points],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "GeometryInput":
        try:
            pts = tuple(Point(int(q["n"]), int(q.get("alpha_exp", 0)), str(q["label"])) for q in data.get("points", []))
            return cls(p=int(data["p"]), genus=int(data["genus"]), points=pts, marked=data.get("marked"),
                       deg_lambda=int(data.get("deg_lambda", 1)), level=int(data.get("level", 1)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, GeometryError):
                raise
            raise StructureError(f"malformed geometry: {exc}") from exc


@dataclass(frozen=True)
class WeightTuple:
    labels: tuple[str, ...]
    values: tuple[int, ...]

    def __getitem__(self, label: str) -> int:
        return self.values[self.labels.index(label)]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.labels, self.values))

    def to_json(self) -> dict[str, int]:
        return self.as_dict()

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values)


@dataclass(frozen=True)
class WeightDerived:
    Di: frozenset
    Dsharp: frozenset
    w2: dict
    bi: dict
    Si: dict

    def to_json(self, labels: Sequence[str]) -> dict:
        return {
            "D_i": [x for x in labels if x in self.Di],
            "D_sharp": [x for x in labels if x in self.Dsharp],
            "w2": {x: f"{self.w2[x].numerator}/{self.w2[x].denominator}" for x in labels if x in self.w2},
            "b_i": {x: self.bi[x] for x in labels},
            "S_i": {x: self.Si[x] for x in labels},
        }


def make_weight_tuple(geom: GeometryInput, values: Mapping[str, int] | Sequence[int]) -> WeightTuple:
    if isinstance(values, Mapping):
        missing = set(geom.labels) - set(values)
        extra = set(values) - set(geom.labels)
        if missing or extra:
            raise StructureError(f"weight tuple labels mismatch (missing {sorted(missing)}, extra {sorted(extra)})")
        vals = tuple(int(values[x]) for x in geom.labels)
    else:
        vals = tuple(int(v) for v in values)
        if len(vals) != geom.r:
            raise StructureError(f"weight tuple needs {geom.r} entries, got {len(vals)}")
    half = (geom.p - 1) // 2
    for x, v in zip(geom.labels, vals):
        if not 0 <= v <= half:
            raise StructureError(f"i_{x} = {v} outside 0..{half}")
    return WeightTuple(geom.labels, vals)


def weight_derived(geom: GeometryInput, i: WeightTuple) -> WeightDerived:
    p = geom.p
    half = (p - 1) // 2
    der = geom.derived()
    Di, Ds, w2, bi, Si = set(), set(), {}, {}, {}
    for q, ix in zip(geom.points, i.values):
        x = q.label
        m = der[x].m
        bi[x] = (2 * m * ix) % p
        Si[x] = der[x].b
        if ix:
            Di.add(x)
            w2[x] = Fraction(bi[x], p)
            Si[x] += (ix * m) % p
            if (m * ix) % p > half:
                Ds.add(x)
    return WeightDerived(frozenset(Di), frozenset(Ds), w2, bi, Si)


def enumerate_weight_tuples(geom: GeometryInput) -> Iterator[tuple[WeightTuple, WeightDerived]]:
    """All ((p+1)/2)^r tuples in lexicographic order, lazily."""
    half = (geom.p - 1) // 2
    for vals in itertools.product(range(half + 1), repeat=geom.r):
        i = WeightTuple(geom.labels, vals)
        yield i, weight_derived(geom, i)


def count_weight_tuples(geom: GeometryInput) -> int:
    return ((geom.p + 1) // 2) ** geom.r


@dataclass(frozen=True)
class HiggsComponent:
    c: int
    j: tuple[int, ...]
    l_j: int
    eps: tuple[int, ...]
    Dij: frozenset
    labels: tuple[str, ...]

    @property
    def deg_j(self) -> int:
        return sum(self.j)

    def j_of(self, label: str) -> int:
        return self.j[self.labels.index(label)]

    def eps_of(self, label: str) -> int:
        return self.eps[self.labels.index(label)]

    def sort_key(self):
        return (self.c, self.j)

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "j": dict(zip(self.labels, self.j)),
            "l_j": self.l_j,
            "eps": dict(zip(self.labels, self.eps)),
            "D_ij": [x for x in self.labels if x in self.Dij],
        }


def congruence_holds(p: int, n: int, ix: int, jx: int) -> bool:
    """(2 i)^2 == (n (1 + j))^2 mod p."""
    return (4 * ix * ix - (n * (1 + jx)) ** 2) % p == 0


def valid_signs(p: int, n: int, ix: int, jx: int) -> list[int]:
    """Signs e with e * 2i == -n (1 + j) mod p."""
    return [e for e in (1, -1) if (e * 2 * ix + n * (1 + jx)) % p == 0]


def sign_for(p: int, n: int, ix: int, jx: int) -> int:
    signs = valid_signs(p, n, ix, jx)
    if not signs:
        raise GeometryError(f"no sign solves e*2*{ix} = -{n}*(1+{jx}) mod {p}")
    # both signs work only when i_x = 0; +1 is the convention there
    return signs[0]


def _make_component(geom: GeometryInput, i: WeightTuple, c: int, j: tuple[int, ...]) -> HiggsComponent:
    p = geom.p
    eps = tuple(sign_for(p, q.n, ix, jx) for q, ix, jx in zip(geom.points, i.values, j))
    Dij = frozenset(q.label for q, ix, e in zip(geom.points, i.values, eps) if ix and e == -1)
    return HiggsComponent(c=c, j=j, l_j=(c - sum(j)) // p, eps=eps, Dij=Dij, labels=geom.labels)


def odd_c_range(geom: GeometryInput) -> range:
    return range(1, 2 * geom.genus - 2, 2)


def enumerate_higgs_components(geom: GeometryInput, i: WeightTuple) -> list[HiggsComponent]:
    """All (c, j) with the congruences satisfied pointwise, ordered by (c, j)."""
    p = geom.p
    cands = []
    for q, ix in zip(geom.points, i.values):
        cands.append([jx for jx in range(p) if congruence_holds(p, q.n, ix, jx)])
    cs = list(odd_c_range(geom))
    out = []
    for j in itertools.product(*cands):
        dj = sum(j)
        for c in cs:
            if c >= dj and (c - dj) % p == 0:
                out.append(_make_component(geom, i, c, j))
    out.sort(key=HiggsComponent.sort_key)
    return out


def brute_force_components(geom: GeometryInput, i: WeightTuple) -> list[HiggsComponent]:
    """Exhaustive reference: every j in {0..p-1}^r and every odd c."""
    p = geom.p
    out = []
    for c in odd_c_range(geom):
        for j in itertools.product(range(p), repeat=geom.r):
            l = c - sum(j)
            if l < 0 or l % p:
                continue
            if all(congruence_holds(p, q.n, ix, jx) for q, ix, jx in zip(geom.points, i.values, j)):
                out.append(_make_component(geom, i, c, j))
    out.sort(key=HiggsComponent.sort_key)
    return out


def dij_coefficients(geom: GeometryInput, i: WeightTuple, comp: HiggsComponent) -> dict[str, int]:
    """Coefficient of x in j + sum_{D_i}(1 - eps b_i) x - (p-1)(X^f minus D_i)."""
    p = geom.p
    wd = weight_derived(geom, i)
    out = {}
    for q, ix, jx, e in zip(geom.points, i.values, comp.j, comp.eps):
        x = q.label
        if ix:
            out[x] = jx + 1 - e * wd.bi[x]
        else:
            out[x] = jx - (p - 1)
    return out


def cij(geom: GeometryInput, i: WeightTuple, comp: HiggsComponent) -> int:
    """c_ij = p mu_ij + sum_{D_i} eps b_i with mu_ij = chi~ - |D_i| + |D_ij| + l_j."""
    wd = weight_derived(geom, i)
    mu = geom.chi_quotient - len(wd.Di) + len(comp.Dij) + comp.l_j
    return geom.p * mu + sum(comp.eps_of(x) * wd.bi[x] for x in wd.Di)


def verify_cij(geom: GeometryInput, i: WeightTuple, comp: HiggsComponent) -> bool:
    return cij(geom, i, comp) == geom.chi + comp.c


def component_checks(geom: GeometryInput, i: WeightTuple, comp: HiggsComponent) -> dict[str, bool]:
    """Every invariant of a Higgs component, by name."""
    p = geom.p
    d = dij_coefficients(geom, i, comp)
    sign_ok = True
    for q, ix, jx, e in zip(geom.points, i.values, comp.j, comp.eps):
        signs = valid_signs(p, q.n, ix, jx)
        if ix:
            sign_ok &= signs == [e]
        else:
            sign_ok &= jx == p - 1 and e in signs
    return {
        "congruence": all(congruence_holds(p, q.n, ix, jx) for q, ix, jx in zip(geom.points, i.values, comp.j)),
        "dij_in_0_p": all(v in (0, p) for v in d.values()),
        "dij_matches_eps": all(d[x] == (p if comp.eps_of(x) == -1 and x in comp.Dij else 0) for x in d),
        "eps_unique": sign_ok,
        "degree": p * comp.l_j + comp.deg_j == comp.c and comp.l_j >= 0,
        "cij": verify_cij(geom, i, comp),
    }


@dataclass(frozen=True)
class SeifertInvariants:
    b: int | Fraction
    genus: int
    pairs: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        b = self.b if isinstance(self.b, int) else f"{self.b.numerator}/{self.b.denominator}"
        return {"b": b, "genus": self.genus, "pairs": [list(q) for q in self.pairs]}


def seifert(geom: GeometryInput, rational: bool = False) -> SeifertInvariants:
    """(b, g~, pairs) with pairs (k_x, p) and b = -p sum k_x^-1.

    The inverse is taken mod p by default; ``rational=True`` uses 1/k_x.
    """
    p = geom.p
    ks = sorted(derive_point(p, q).k_seif for q in geom.points)
    if rational:
        b: int | Fraction = -p * sum((Fraction(1, k) for k in ks), Fraction(0))
        if b.denominator == 1:
            b = int(b)
    else:
        b = -p * sum(inv_mod(k, p) for k in ks)
    return SeifertInvariants(b=b, genus=geom.quotient_genus, pairs=tuple((k, p) for k in ks))


@dataclass(frozen=True)
class FixedPointData:
    counts: tuple[tuple[tuple[int, int], int], ...]
    genus: int
    l0: int | None

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.counts)

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "l0": self.l0,
            "counts": [{"zeta_minus_n": k[0], "alpha_exp": k[1], "count": v} for k, v in self.counts],
        }


def fixed_point_data(geom: GeometryInput, require_marked: bool = False) -> FixedPointData:
    p = geom.p
    if require_marked and geom.marked is None:
        raise GeometryError("a marked fixed point is required")
    cnt = Counter(((-q.n) % p, q.l) for q in geom.points)
    l0 = geom.point(geom.marked).l if geom.marked is not None else None
    return FixedPointData(counts=tuple(sorted(cnt.items())), genus=geom.genus, l0=l0)


def components_report(geom: GeometryInput, tuples: Iterable[WeightTuple] | None = None) -> list[dict]:
    """Per weight tuple: derived data and its Higgs components with c_ij status."""
    out = []
    it = ((i, weight_derived(geom, i)) for i in tuples) if tuples is not None else enumerate_weight_tuples(geom)
    for i, wd in it:
        comps = enumerate_higgs_components(geom, i)
        out.append({
            "i": i.to_json(),
            **wd.to_json(geom.labels),
            "components": [{**c.to_json(), "c_ij_ok": verify_cij(geom, i, c)} for c in comps],
            "n_components": len(comps),
        })
    return out
