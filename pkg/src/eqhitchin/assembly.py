"""Per-component assembly of the localized index.

A :class:`ComponentModel` carries the data of one fixed component that the
theory does not determine in closed form (tangent weights, the two summands of
the universal bundle at each fixed point, the restriction of the symplectic
class).  From it we build the correction class V, the root normalization, the
p-th-rooted class chi, the integrand and finally the index series.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .combinatorics import (
    GeometryInput,
    HiggsComponent,
    cij,
    enumerate_higgs_components,
    make_weight_tuple,
)
from .cyclotomic import CycloElem, LocalizedCyclo, format_rational
from .errors import ModelInconsistencyError, RootNormalizationError, StructureError
from .graded import GradedElem, RingSpec, TSeries, default_depth, exp_class, g_inv
from .kclasses import KClass, LineTerm, big_omega, lambda_dual, omega, pth_root, todd
from .oracles import IntersectionOracle, oracle_from_spec

CONVENTIONS = ("conormal", "verbatim")


def _phi(p: int) -> dict[int, int]:
    return {l: 1 for l in range(p)}


@dataclass
class ComponentModel:
    """Input data for one fixed component.

    ``i`` maps point labels to weights (empty when there are no fixed points);
    ``j`` is a Higgs component, the string "N" for the component of
    holomorphic bundles, or None for a model not tied to a geometry.
    ``line_classes[x]`` is (first, second, first_twt, second_twt).
    """

    ring: RingSpec
    tangent: KClass
    line_classes: dict[str, tuple[GradedElem, GradedElem, int, int]] = field(default_factory=dict)
    omega_base: GradedElem | None = None
    u_coeff: int = 0
    m_i: int = 0
    i: dict[str, int] = field(default_factory=dict)
    j: HiggsComponent | str | None = None
    c: int | None = None
    j_values: dict[str, int] | None = None
    ambient_tangent: KClass | None = None
    name: str = ""

    def __post_init__(self):
        if not self.ring.localized:
            raise StructureError("component models need localized coefficients")
        if self.omega_base is None:
            self.omega_base = self.ring.zero()
        if not self.omega_base.is_homogeneous(1):
            raise StructureError("omega base class must be homogeneous of degree 1")
        for cls in (self.tangent, self.ambient_tangent):
            if cls is not None and cls.ring != self.ring:
                raise StructureError("tangent data must live in the model ring")
        self.m_i %= self.ring.p

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def d(self) -> int:
        return self.ring.d

    @property
    def is_n(self) -> bool:
        return self.j == "N"

    # JSON

    @classmethod
    def from_json(cls, data: Mapping, p: int | None = None) -> "ComponentModel":
        try:
            p = int(data.get("p", p))
            d = int(data["dim"])
            gens = [(str(g[0]), int(g[1])) for g in data.get("generators", [])]
            ring = RingSpec(p, gens, d, "localized")
            ident = data.get("id", {}) or {}
            i = {str(k): int(v) for k, v in (ident.get("i") or {}).items()}
            jdat = ident.get("j")
            c = jv = None
            if jdat == "N":
                j: str | None = "N"
            elif isinstance(jdat, Mapping):
                j = "higgs"
                c = int(jdat["c"])
                jv = {str(k): int(v) for k, v in jdat["j"].items()}
            else:
                j = None
            lines = {}
            for x, lc in (data.get("line_classes") or {}).items():
                tw = lc.get("t", [1, 0] if j == "higgs" else [0, 0])
                lines[str(x)] = (GradedElem.from_json(ring, lc.get("first", {})),
                                 GradedElem.from_json(ring, lc.get("second", {})), int(tw[0]), int(tw[1]))
            om = data.get("omega", {}) or {}
            amb = data.get("ambient_tangent")
            return cls(
                ring=ring,
                tangent=KClass.from_json(ring, data.get("tangent", [])),
                line_classes=lines,
                omega_base=GradedElem.from_json(ring, om.get("base", {})),
                u_coeff=int(om.get("u_coeff", 0)),
                m_i=int(data.get("m_i", 0)),
                i=i, j=j, c=c, j_values=jv,
                ambient_tangent=None if amb is None else KClass.from_json(ring, amb),
                name=str(data.get("name", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, StructureError):
                raise
            raise StructureError(f"malformed component model: {exc!r}") from exc

    def to_json(self) -> dict:
        if self.j == "N":
            jj: object = "N"
        elif self.c is not None:
            jj = {"c": self.c, "j": dict(sorted((self.j_values or {}).items()))}
        else:
            jj = None
        out = {
            "name": self.name,
            "p": self.p,
            "id": {"i": dict(sorted(self.i.items())), "j": jj},
            "dim": self.d,
            "generators": [list(g) for g in self.ring.generators],
            "tangent": self.tangent.to_json(),
            "line_classes": {x: {"first": a.to_json(), "second": b.to_json(), "t": [ta, tb]}
                             for x, (a, b, ta, tb) in sorted(self.line_classes.items())},
            "omega": {"base": self.omega_base.to_json(), "u_coeff": self.u_coeff},
            "m_i": self.m_i,
        }
        if self.ambient_tangent is not None:
            out["ambient_tangent"] = self.ambient_tangent.to_json()
        return out

    @classmethod
    def load(cls, path: str | Path, p: int | None = None) -> "ComponentModel":
        return cls.from_json(json.loads(Path(path).read_text()), p)


def higgs_component_of(geom: GeometryInput, model: ComponentModel) -> HiggsComponent | None:
    """The enumerated Higgs component matching the model id, or None."""
    if model.c is None:
        return None
    i = make_weight_tuple(geom, model.i)
    want = tuple(model.j_values[x] for x in geom.labels)
    for comp in enumerate_higgs_components(geom, i):
        if comp.c == model.c and comp.j == want:
            return comp
    return None


def _signs(geom: GeometryInput, model: ComponentModel) -> dict[str, int]:
    comp = higgs_component_of(geom, model) if model.c is not None else None
    if model.c is not None and comp is None:
        raise ModelInconsistencyError(f"(c, j) = ({model.c}, {model.j_values}) is not a component for i = {model.i}")
    if comp is None:
        return {x: 1 for x in geom.labels}
    return {x: comp.eps_of(x) for x in geom.labels}


def build_V(geom: GeometryInput | None, model: ComponentModel, i_sign: int = 1) -> KClass:
    """V = sum_x U_x (1 - t zeta^-n_x) sum_{l=1}^{p-1} l zeta^(-l n_x).

    U_x is the trace-free endomorphism bundle of first + second; the
    sqrt(alpha) factors cancel in it.  ``i_sign`` flips the sign convention of
    the zeta^(eps i) factors.
    """
    ring = model.ring
    if geom is None or not geom.points:
        return KClass.zero(ring)
    if geom.p != ring.p:
        raise StructureError(f"geometry p={geom.p} differs from model p={ring.p}")
    if i_sign not in (1, -1):
        raise StructureError("i_sign must be +1 or -1")
    p = ring.p
    eps = _signs(geom, model)
    V = KClass.zero(ring)
    for q in geom.points:
        x = q.label
        if x not in model.line_classes:
            raise StructureError(f"model has no line classes for point {x!r}")
        if x not in model.i:
            raise StructureError(f"model weight tuple has no entry for point {x!r}")
        a, b, ta, tb = model.line_classes[x]
        shift = (2 * i_sign * eps[x] * model.i[x]) % p  # mwt(second) - mwt(first)
        U = KClass(ring, [
            LineTerm(a - b, ta - tb, -shift, 1),
            LineTerm(ring.zero(), 0, 0, 1),
            LineTerm(b - a, tb - ta, shift, 1),
        ])
        mult = KClass(ring, [LineTerm(ring.zero(), 0, 0, 1), LineTerm(ring.zero(), 1, -q.n, -1)])
        S = {(-l * q.n) % p: l for l in range(1, p)}
        V = V + (U * mult).times_group_ring(S)
    return V


def residual_class(model: ComponentModel, V: KClass) -> KClass:
    """V - pi_0(V) Phi_p, the part of V with no mu_p-invariant summand."""
    return V - V.pi(0).times_group_ring(_phi(model.p))


@dataclass(frozen=True)
class RootData:
    nu: int
    a_tilde: dict
    b: dict
    a_used: dict
    rho: int
    zeta_lead: LocalizedCyclo
    convention: str

    def to_json(self) -> dict:
        return {
            "nu": self.nu,
            "a_tilde": {str(l): v for l, v in sorted(self.a_tilde.items())},
            "a": {str(l): v for l, v in sorted(self.a_used.items())},
            "b": {str(l): v for l, v in sorted(self.b.items())},
            "rho": self.rho,
            "zeta_lead": self.zeta_lead.to_json(),
            "convention": self.convention,
        }


def _exact_quotient(num: int, p: int, what: str) -> int:
    if num % p:
        raise ModelInconsistencyError(f"{what}: {num}/{p} is not an integer")
    return num // p


def root_data(model: ComponentModel, V: KClass, convention: str = "conormal") -> RootData:
    """nu~, a~_l, b~_l, rho~ and the normalizing unit zeta~.

    ``a_tilde`` is the rank of the weight-l part of the normal bundle.  The
    leading coefficient of the localization weight involves the conormal
    ranks, a_l = a~_{p-l}; ``convention="verbatim"`` uses a~_l directly.
    """
    if convention not in CONVENTIONS:
        raise StructureError(f"convention must be one of {CONVENTIONS}")
    p = model.p
    T = model.tangent
    rk_tm = T.minus().rank()
    vt = V.tfixed().rank_by_mwt()
    vm = V.minus().rank_by_mwt()
    nu = rk_tm + V.minus().rank() - vm[0]
    d = T.tfixed().rank()
    a_tilde, b = {}, {}
    for l in range(1, p):
        a_tilde[l] = d + _exact_quotient(vt[l] - vt[0], p, f"a~_{l}")
        b[l] = rk_tm + _exact_quotient(vm[l] - vm[0], p, f"b~_{l}")
    a_used = dict(a_tilde) if convention == "verbatim" else {l: a_tilde[p - l] for l in range(1, p)}
    rho = sum(l * b[l] for l in range(1, p))
    z = LocalizedCyclo.zeta(p, rho)
    for l in range(1, p):
        if a_used[l]:
            z = z * (LocalizedCyclo.one(p) - LocalizedCyclo.zeta(p, l)) ** (-a_used[l])
    return RootData(nu, a_tilde, b, a_used, rho, z, convention)


def tangent_parity(model: ComponentModel, V: KClass) -> int:
    """Parity of the rank of the full negative tangent, read off from the residue identity.

    p * T^- = p * T_i^- * Phi_p + V^- - pi_0(V^-) * Phi_p, so
    rank T^- = p * rank T_i^- + (rank V^- - p * rank pi_0(V^-)) / p.
    """
    p = model.p
    Vm = V.minus()
    x = _exact_quotient(Vm.rank() - p * Vm.pi(0).rank(), p, "negative rank of V")
    if model.ambient_tangent is not None:
        return model.ambient_tangent.minus().rank() % 2
    return (p * model.tangent.minus().rank() + x) % 2


def residue_identity(model: ComponentModel, V: KClass) -> bool | None:
    """p * T_full == p * T Phi_p + V - pi_0(V) Phi_p, when the full tangent is supplied."""
    if model.ambient_tangent is None:
        return None
    lhs = model.ambient_tangent * model.p
    rhs = model.tangent.times_group_ring(_phi(model.p)) * model.p + residual_class(model, V)
    return lhs == rhs


def validate_model(geom: GeometryInput | None, model: ComponentModel, V: KClass | None = None) -> dict[str, bool]:
    """Every checkable identity for a supplied model, by name."""
    T = model.tangent
    checks = {
        "tangent_mu_trivial": all(t.mwt == 0 for t in T.terms),
        "tangent_fixed_rank": T.tfixed().rank() == model.d,
    }
    if geom is not None and geom.points:
        checks["points_covered"] = set(model.line_classes) >= set(geom.labels) and set(model.i) >= set(geom.labels)
        if model.c is not None:
            try:
                comp = higgs_component_of(geom, model)
            except StructureError:
                comp = None
            checks["component_exists"] = comp is not None
            if comp is not None:
                i = make_weight_tuple(geom, model.i)
                checks["u_coeff"] = model.u_coeff == cij(geom, i, comp)
        elif model.is_n:
            checks["u_coeff"] = model.u_coeff == 0
    else:
        checks["points_covered"] = True
    if V is None and checks["points_covered"] and checks.get("component_exists", True):
        V = build_V(geom, model)
    if V is not None:
        try:
            rd = root_data(model, V)
            checks["root_data_integral"] = True
            checks["sign_parity"] = rd.nu % 2 == tangent_parity(model, V)
        except ModelInconsistencyError:
            checks["root_data_integral"] = False
        res = residue_identity(model, V)
        if res is not None:
            checks["residue_identity"] = res
    return checks


@dataclass(frozen=True)
class ChiResult:
    chi: TSeries
    A: TSeries
    B: TSeries
    root: TSeries
    data: RootData


def chi_parts(model: ComponentModel, V: KClass, depth: int | None = None,
              convention: str = "conormal") -> ChiResult:
    """chi~ = Omega(T Phi_p) * (Omega(V - pi_0(V) Phi_p))^(1/p), root pinned by zeta~."""
    ring = model.ring
    depth = default_depth(ring) if depth is None else depth
    rd = root_data(model, V, convention)
    A = big_omega(model.tangent.times_group_ring(_phi(model.p)), depth)
    B = big_omega(residual_class(model, V), depth)
    a0 = A.leading_coefficient().const_coeff()
    R = pth_root(B, rd.zeta_lead * a0.inverse())
    chi = A * R
    lead = chi.leading_coefficient().const_coeff()
    if lead != rd.zeta_lead:
        raise RootNormalizationError(f"leading coefficient {lead} differs from zeta~ = {rd.zeta_lead}")
    return ChiResult(chi, A, B, R, rd)


def chi_class(model: ComponentModel, V: KClass, depth: int | None = None,
              convention: str = "conormal") -> TSeries:
    return chi_parts(model, V, depth, convention).chi


def line_character(model: ComponentModel, k: int) -> TSeries:
    """ch of the k-th power of the determinant line: t^(k u) e^(k omega)."""
    return TSeries(model.ring, {k * model.u_coeff: exp_class(model.omega_base.scale(k))})


def integrand(model: ComponentModel, V: KClass, k: int, depth: int | None = None,
              convention: str = "conormal") -> TSeries:
    """(-1)^nu~ zeta^(k m_i) ch(chi~) exp(k omega~) Td."""
    res = chi_parts(model, V, depth, convention)
    p = model.p
    sign = -1 if res.data.nu % 2 else 1
    char = LocalizedCyclo.zeta(p, k * model.m_i).scale(sign)
    td = todd(model.tangent.tmufixed())
    return (res.chi * line_character(model, k)).scale(char) * TSeries(model.ring, {0: td})


def point_ring(p: int) -> RingSpec:
    return RingSpec(p, [], 0, "localized")


def integrate_series(series: TSeries, oracle: IntersectionOracle) -> TSeries:
    """Apply the oracle to every t-coefficient."""
    ring = point_ring(series.ring.p)
    coeffs = {n: ring.const(oracle.integrate(g)) for n, g in series.items()}
    return TSeries(ring, coeffs, series.prec)


def component_contribution(geom: GeometryInput | None, model: ComponentModel, oracle: IntersectionOracle,
                           k: int, depth: int | None = None, convention: str = "conormal") -> TSeries:
    oracle.check_ring(model.ring)
    V = build_V(geom, model)
    return integrate_series(integrand(model, V, k, depth, convention), oracle)


def _contribution_job(args):
    return component_contribution(*args)


def index_series(components: Sequence[tuple[ComponentModel, IntersectionOracle]], geom: GeometryInput | None,
                 k: int, depth: int | None = None, jobs: int = 1, convention: str = "conormal") -> TSeries:
    """Sum of the integrated contributions, aggregated in the given order."""
    if not components:
        raise StructureError("index_series needs at least one component")
    p = components[0][0].p
    for model, oracle in components:
        if model.p != p:
            raise StructureError("all components must share p")
        oracle.check_ring(model.ring)
    args = [(geom, m, o, k, depth, convention) for m, o in components]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_contribution_job, args))
    else:
        parts = [_contribution_job(a) for a in args]
    total = TSeries.zero(point_ring(p))
    for s in parts:
        total = total + s
    return total


def is_pure(series: TSeries) -> bool:
    """True when every coefficient is a rational number."""
    return all(g.const_coeff().is_rational() for _, g in series.items())


def series_report(series: TSeries) -> dict:
    """Coefficients in Q(zeta_p) coordinates, plus rational values when pure."""
    pure = is_pure(series)
    terms = []
    for n, g in series.items():
        c = g.const_coeff()
        entry = {"t": n, "coeff": c.to_json(), "text": str(c)}
        if pure:
            entry["rational"] = format_rational(c.rational_value())
        terms.append(entry)
    return {"prec": series.prec, "pure": pure, "terms": terms,
            "constant_term": constant_term(series).const_coeff().to_json()}


def constant_term(series: TSeries) -> GradedElem:
    """Coefficient of t^0."""
    return series.coefficient(0)


# Galois case: no fixed points

@dataclass(frozen=True)
class GaloisReport:
    ok: bool
    lhs: TSeries
    rhs: TSeries
    first_mismatch: int | None

    def to_json(self) -> dict:
        return {"ok": self.ok, "first_mismatch": self.first_mismatch,
                "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json()}


def _first_mismatch(a: TSeries, b: TSeries) -> int | None:
    floor = TSeries._max_prec(a.prec, b.prec)
    for n in sorted(set(a.exponents()) | set(b.exponents()), reverse=True):
        if floor is not None and n < floor:
            continue
        if a.coefficient(n) != b.coefficient(n):
            return n
    return None


def galois_sides(model: ComponentModel, k: int, depth: int | None = None,
                 corrupt: bool = False) -> tuple[TSeries, TSeries]:
    """Top-degree parts of both sides of the Galois-case identity.

    LHS: (-1)^nu Omega(T Phi_p) ch(L)^(kp) Td, computed to depth p*depth.
    RHS: p^-d R(t^p, p y) with R = (-1)^nu omega(T) ch(L)^k Td, computed to
    depth ``depth``.  ``corrupt`` drops the Chern-root rescaling.
    """
    ring = model.ring
    p = model.p
    depth = default_depth(ring) if depth is None else depth
    T = model.tangent
    if any(t.mwt for t in T.terms):
        raise StructureError("Galois-case tangent must have trivial mu_p weights")
    sign = -1 if T.minus().rank() % 2 else 1
    td = TSeries(ring, {0: todd(T.tfixed())})
    lhs = big_omega(T.times_group_ring(_phi(p)), p * depth) * line_character(model, k * p) * td
    R = omega(T, depth) * line_character(model, k) * td
    if not corrupt:
        R = R.rescale(p)
    rhs = R.substitute_t(p).scale(Fraction(1, p ** model.d))
    return lhs.scale(sign).top_degree(), rhs.scale(sign).top_degree()


def galois_check(model: ComponentModel, k: int, depth: int | None = None, corrupt: bool = False) -> GaloisReport:
    lhs, rhs = galois_sides(model, k, depth, corrupt)
    bad = _first_mismatch(lhs, rhs)
    return GaloisReport(bad is None, lhs, rhs, bad)


# standalone identities

def identity_algebra(ring: RingSpec, c1: GradedElem) -> bool:
    """prod_{a in mu_p} (Z - a Z^-1) = Z^p - Z^-p for Z = t e^c1."""
    p = ring.p
    Z = TSeries(ring, {1: exp_class(c1)})
    Zi = TSeries(ring, {-1: exp_class(-c1)})
    lhs = TSeries.one(ring)
    for j in range(p):
        lhs = lhs * (Z - Zi.scale(ring.coerce_coeff(CycloElem.zeta(p, j))))
    rhs = TSeries(ring, {p: exp_class(c1.scale(p)), -p: -exp_class(c1.scale(-p))})
    return lhs == rhs


def identity_todd_rescaling(T: KClass) -> bool:
    """prod_{j=1}^{p-1} ch(lambda(T* zeta^j))^-1 Td(T) = p^-rank Td(p y)."""
    ring = T.ring
    p = ring.p
    moving = T.times_group_ring({j: 1 for j in range(1, p)})
    lhs = g_inv(lambda_dual(moving).coefficient(0)) * todd(T)
    rhs = todd(T).rescale(p).scale(Fraction(1, p ** T.rank()))
    return lhs == rhs


def identity_omega_substitution(W: KClass, depth: int = 4) -> bool:
    """omega(W Phi_p)(t, y) = omega(W)(t^p, p y) for W with trivial mu_p weights."""
    ring = W.ring
    p = ring.p
    lhs = omega(W.times_group_ring(_phi(p)), p * depth)
    rhs = omega(W, depth).rescale(p).substitute_t(p)
    return lhs.agrees_with(rhs)


def load_components(entries: Sequence[Mapping], base_dir: Path | None, p: int) -> list[tuple[ComponentModel, IntersectionOracle]]:
    """[{"model": path-or-object, "oracle": selector}, ...] -> models with oracles."""
    out = []
    for e in entries:
        m = e["model"]
        if isinstance(m, str):
            path = Path(m)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            model = ComponentModel.load(path, p)
        else:
            model = ComponentModel.from_json(m, p)
        oracle = oracle_from_spec(e.get("oracle", {"kind": "point"}), base_dir)
        out.append((model, oracle))
    return out
