"""Intersection-number oracles: linear functionals on top-degree classes.

Monomials are addressed by generator name, so an oracle can be shared by any
ring containing the generators it knows about.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .cyclotomic import LocalizedCyclo, format_rational, parse_rational
from .errors import StructureError
from .graded import GradedElem, RingSpec


def _canon(exps: Mapping[str, int]) -> str:
    parts = [n if e == 1 else f"{n}^{e}" for n, e in sorted(exps.items()) if e]
    return "*".join(parts) if parts else "1"


def parse_monomial_names(s: str) -> dict[str, int]:
    s = s.strip()
    out: dict[str, int] = {}
    if s in ("", "1"):
        return out
    for factor in s.split("*"):
        name, _, e = factor.strip().partition("^")
        try:
            out[name] = out.get(name, 0) + (int(e) if e else 1)
        except ValueError:
            raise StructureError(f"bad monomial {s!r}") from None
    return out


class IntersectionOracle:
    """Base class: subclasses implement ``value`` on canonical monomial strings."""

    dimension: int = 0

    def value(self, monomial: str) -> Fraction:
        raise NotImplementedError

    def evaluate(self, monomial: str | Mapping[str, int]) -> Fraction:
        """Integral of a single top-degree monomial."""
        if not isinstance(monomial, str):
            monomial = _canon(monomial)
        else:
            monomial = _canon(parse_monomial_names(monomial))
        return Fraction(self.value(monomial))

    def check_ring(self, ring: RingSpec) -> None:
        if ring.d != self.dimension:
            raise StructureError(f"oracle dimension {self.dimension} does not match component dimension {ring.d}")

    def integrate(self, elem: GradedElem) -> LocalizedCyclo:
        """Linear extension over the top-degree part of ``elem``."""
        ring = elem.ring
        self.check_ring(ring)
        total = LocalizedCyclo.zero(ring.p)
        for m, c in elem.localize().top_degree().items():
            v = self.evaluate({n: e for n, e in zip(ring.names, m) if e})
            if v:
                total = total + c.scale(v)
        return total

    def describe(self) -> dict:
        return {"kind": type(self).__name__, "dimension": self.dimension}


class PointOracle(IntersectionOracle):
    """A point: the integral of 1 is 1."""

    dimension = 0

    def value(self, monomial: str) -> Fraction:
        return Fraction(1) if monomial == "1" else Fraction(0)


class ProjectiveOracle(IntersectionOracle):
    """P^n with hyperplane class ``gen``: integral of h^n is 1."""

    def __init__(self, n: int, gen: str = "h"):
        if n < 0:
            raise StructureError("projective dimension must be non-negative")
        self.dimension = n
        self.gen = gen

    def value(self, monomial: str) -> Fraction:
        exps = parse_monomial_names(monomial)
        if self.dimension == 0:
            return Fraction(1) if not exps else Fraction(0)
        return Fraction(1) if exps == {self.gen: self.dimension} else Fraction(0)

    def describe(self) -> dict:
        return {"kind": "projective", "dimension": self.dimension, "gen": self.gen}


class ProductProjectiveOracle(IntersectionOracle):
    """Product of projective spaces, one hyperplane generator per factor."""

    def __init__(self, factors: list[tuple[str, int]]):
        names = [f[0] for f in factors]
        if len(set(names)) != len(names):
            raise StructureError("factor generators must be distinct")
        self.factors = [(str(g), int(n)) for g, n in factors]
        self.dimension = sum(n for _, n in self.factors)

    def value(self, monomial: str) -> Fraction:
        want = {g: n for g, n in self.factors if n}
        return Fraction(1) if parse_monomial_names(monomial) == want else Fraction(0)

    def describe(self) -> dict:
        return {"kind": "product-projective", "dimension": self.dimension, "factors": [list(f) for f in self.factors]}


class TableOracle(IntersectionOracle):
    """Explicit table {monomial: value}; unlisted top monomials are an error."""

    def __init__(self, dimension: int, table: Mapping[str, object]):
        self.dimension = int(dimension)
        self.table = {_canon(parse_monomial_names(k)): parse_rational(v) for k, v in table.items()}

    @classmethod
    def from_file(cls, path: str | Path, dimension: int | None = None) -> "TableOracle":
        data = json.loads(Path(path).read_text())
        if "table" in data:
            return cls(int(data.get("dimension", dimension or 0)), data["table"])
        if dimension is None:
            # infer from the first key's total exponent (degree-1 generators assumed)
            first = next(iter(data), "1")
            dimension = sum(parse_monomial_names(first).values())
        return cls(dimension, data)

    def value(self, monomial: str) -> Fraction:
        try:
            return self.table[monomial]
        except KeyError:
            raise StructureError(f"monomial {monomial!r} missing from intersection table") from None

    def describe(self) -> dict:
        return {"kind": "table", "dimension": self.dimension,
                "table": {k: format_rational(v) for k, v in sorted(self.table.items())}}


def oracle_from_spec(spec: Mapping, base_dir: Path | None = None) -> IntersectionOracle:
    """Build an oracle from a JSON selector such as {"kind": "projective", "n": 1, "gen": "h"}."""
    kind = spec.get("kind")
    if kind == "point":
        return PointOracle()
    if kind == "projective":
        return ProjectiveOracle(int(spec["n"]), spec.get("gen", "h"))
    if kind == "product-projective":
        return ProductProjectiveOracle([(g, int(n)) for g, n in spec["factors"]])
    if kind == "table":
        if "file" in spec:
            path = Path(spec["file"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            return TableOracle.from_file(path, spec.get("dimension"))
        return TableOracle(int(spec["dimension"]), spec["table"])
    raise StructureError(f"unknown oracle kind {kind!r}")
