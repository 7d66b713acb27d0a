"""Identity suites run by ``eqhitchin verify`` and by the acceptance tests.

Each suite returns a list of :class:`Check` records; a failing check carries a
JSON-ready counterexample.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .assembly import (
    ComponentModel,
    build_V,
    chi_parts,
    galois_check,
    identity_algebra,
    identity_todd_rescaling,
    identity_omega_substitution,
    index_series,
)
from .combinatorics import (
    GeometryInput,
    Point,
    brute_force_components,
    cij,
    components_report,
    component_checks,
    enumerate_higgs_components,
    enumerate_weight_tuples,
    fixed_point_data,
    seifert,
)
from .cyclotomic import CycloElem, LocalizedCyclo, loc_inv, localize, split, unsplit
from .errors import EqHitchinError, GeometryError
from .graded import GradedElem, RingSpec, TSeries, g_inv
from .kclasses import KClass, LineTerm, lambda_dual, omega, pth_root, todd
from .oracles import IntersectionOracle, PointOracle, TableOracle

SUITES = ("cyclotomic", "inversion", "root", "combinatorics", "galois", "iki-uku", "assembly", "determination")


@dataclass
class Check:
    suite: str
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"suite": self.suite, "check": self.name, "ok": self.ok}
        if self.detail:
            out["detail"] = self.detail
        return out


def _rand_cyclo(rng: random.Random, p: int, lo: int = -5, hi: int = 5, den: int = 4) -> CycloElem:
    return CycloElem(p, [Fraction(rng.randint(lo, hi), rng.randint(1, den)) for _ in range(p)])


# cyclotomic

def inverse_sum_identity_holds(p: int, u: int) -> bool:
    """p (zeta^u - 1)^-1 = sum_{l=1}^{p-1} l zeta^(u l) in Q(zeta_p)."""
    lhs = loc_inv(LocalizedCyclo.zeta(p, u) - 1).scale(p)
    rhs = localize(CycloElem.from_weights(p, {(u * l) % p: l for l in range(1, p)}))
    return lhs == rhs


def suite_cyclotomic(ps: Sequence[int] = (3, 5, 7), n_random: int = 500, seed: int = 0) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for p in ps:
        bad = [u for u in range(1, p) if not inverse_sum_identity_holds(p, u)]
        out.append(Check("cyclotomic", f"p (zeta^u - 1)^-1 = sum l zeta^(ul), p={p} u=1..{p - 1}", not bad, {"failing_u": bad} if bad else {}))
    fails = []
    for n in range(n_random):
        p = ps[n % len(ps)]
        a = _rand_cyclo(rng, p)
        if unsplit(split(a)) != a:
            fails.append(a.to_json())
        loc = localize(a)
        if not loc.is_zero() and loc * loc.inverse() != LocalizedCyclo.one(p):
            fails.append({"inverse": loc.to_json()})
    out.append(Check("cyclotomic", f"split/unsplit round trip x{n_random}", not fails,
                     {"counterexamples": fails[:3]} if fails else {}))
    return out


# inversion

def _ring(p: int, d: int, ngens: int = 2) -> RingSpec:
    return RingSpec(p, [(f"y{k}", 1) for k in range(ngens)], d, "localized")


def _rand_c1(rng: random.Random, ring: RingSpec, lo: int = -2, hi: int = 2) -> GradedElem:
    out = ring.zero()
    for n in ring.names:
        out = out + ring.gen(n).scale(rng.randint(lo, hi))
    return out


def random_effective_moving(rng: random.Random, ring: RingSpec, max_lines: int = 4) -> KClass:
    """Effective class of T-fixed lines with non-trivial mu_p weights."""
    p = ring.p
    terms = [LineTerm(_rand_c1(rng, ring), 0, rng.randrange(1, p), rng.randint(1, 2))
             for _ in range(rng.randint(1, max_lines))]
    return KClass(ring, terms)


def suite_inversion(ps: Sequence[int] = (3, 5), n: int = 100, dmax: int = 4, seed: int = 1) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for p in ps:
        fails_inv, fails_rank = [], []
        for _ in range(n):
            ring = _ring(p, rng.randint(0, dmax))
            V = random_effective_moving(rng, ring)
            lam = lambda_dual(V.dual()).coefficient(0)  # lambda(V)
            inv = g_inv(lam)
            r0 = lam.const_coeff()
            nil = (ring.const(r0) - lam).scale(r0.inverse())
            geo, power = ring.zero(), ring.one()
            for _a in range(ring.d + 1):
                geo = geo + power
                power = power * nil
            geo = geo.scale(r0.inverse())
            if lam * inv != ring.one() or geo != inv:
                fails_inv.append({"ring": repr(ring), "V": V.to_json()})
            expect = LocalizedCyclo.one(p)
            for l, r in V.rank_by_mwt().items():
                if l and r:
                    expect = expect * (LocalizedCyclo.one(p) - LocalizedCyclo.zeta(p, l)) ** r
            if r0 != expect:
                fails_rank.append({"V": V.to_json(), "rank": r0.to_json(), "expected": expect.to_json()})
        out.append(Check("inversion", f"lambda * lambda^-1 = 1, p={p} x{n}", not fails_inv,
                         {"counterexamples": fails_inv[:2]} if fails_inv else {}))
        out.append(Check("inversion", f"equivariant rank formula, p={p} x{n}", not fails_rank,
                         {"counterexamples": fails_rank[:2]} if fails_rank else {}))
    return out


# p-th root

def random_series(rng: random.Random, ring: RingSpec, depth: int) -> TSeries:
    p = ring.p
    coeffs = {}
    lead = rng.randint(-2, 2)
    monos = [m for k in range(ring.d + 1) for m in ring.monomials_of_degree(k)]
    for j in range(depth + 1):
        terms = {}
        for m in monos:
            if rng.random() < 0.6:
                terms[m] = localize(_rand_cyclo(rng, p, -3, 3, 3))
        g = GradedElem(ring, terms)
        if j == 0:
            c0 = localize(_rand_cyclo(rng, p, -3, 3, 3))
            while c0.is_zero():
                c0 = localize(_rand_cyclo(rng, p, -3, 3, 3))
            g = g - g.const_coeff() + c0
        coeffs[lead - j] = g
    return TSeries(ring, coeffs, lead - depth)


def suite_root(ps: Sequence[int] = (3, 5), n: int = 100, dmax: int = 3, depth: int = 4, seed: int = 2) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for p in ps:
        fails = []
        for _ in range(n):
            ring = _ring(p, rng.randint(0, dmax))
            a = random_series(rng, ring, depth)
            b = a ** p
            r = pth_root(b, a.leading_coefficient().const_coeff())
            if not (r.agrees_with(a) and r.prec == a.prec):
                fails.append({"ring": repr(ring), "a": a.to_json()})
        out.append(Check("root", f"pth_root(a^p, a00) = a, p={p} x{n}", not fails,
                         {"counterexamples": fails[:1]} if fails else {}))
    return out


# combinatorics

def geometries_for(p: int, g: int, r: int, limit: int | None = None) -> list[GeometryInput]:
    """Geometries with r fixed points, one per multiset of rotation exponents."""
    out = []
    for ns in itertools.combinations_with_replacement(range(1, p), r):
        pts = tuple(Point(n, (3 * k + 1) % p, f"x{k + 1}") for k, n in enumerate(ns))
        out.append(GeometryInput(p, g, pts))
        if limit is not None and len(out) >= limit:
            break
    return out


def check_geometry_components(geom: GeometryInput, brute: bool = True) -> tuple[bool, dict]:
    n_comp = 0
    for i, _wd in enumerate_weight_tuples(geom):
        comps = enumerate_higgs_components(geom, i)
        n_comp += len(comps)
        for comp in comps:
            checks = component_checks(geom, i, comp)
            if not all(checks.values()):
                return False, {"i": i.to_json(), "component": comp.to_json(),
                               "failed": sorted(k for k, v in checks.items() if not v)}
        if brute and comps != brute_force_components(geom, i):
            return False, {"i": i.to_json(), "failed": ["brute_force"]}
    return True, {"components": n_comp}


ACCEPTANCE_TRIPLES = ((3, 2, 4), (3, 3, 1), (5, 2, 7))
SAMPLE_TRIPLES = ((3, 2, 4), (3, 2, 1), (5, 2, 3))


def suite_combinatorics(triples: Sequence[tuple[int, int, int]] = SAMPLE_TRIPLES,
                        per_triple: int | None = None, brute: bool = True) -> list[Check]:
    out = []
    for p, g, r in triples:
        name = f"components (p,g,r)=({p},{g},{r})"
        try:
            geoms = geometries_for(p, g, r, per_triple)
        except GeometryError as exc:
            out.append(Check("combinatorics", name, False, {"error": str(exc)}))
            continue
        total, ok, detail = 0, True, {}
        for geom in geoms:
            good, info = check_geometry_components(geom, brute)
            if not good:
                ok, detail = False, {"geometry": geom.to_json(), **info}
                break
            total += info["components"]
        out.append(Check("combinatorics", name, ok, detail or {"geometries": len(geoms), "components": total}))
    return out


# Galois case

def random_galois_model(rng: random.Random, p: int, d: int, ngens: int = 2) -> ComponentModel:
    ring = _ring(p, d, ngens)
    fixed = [LineTerm(_rand_c1(rng, ring), 0, 0, 1) for _ in range(d)]
    moving = [LineTerm(_rand_c1(rng, ring), rng.choice([-2, -1, 1, 2]), 0, 1) for _ in range(rng.randint(1, 3))]
    return ComponentModel(ring, KClass(ring, fixed + moving), omega_base=_rand_c1(rng, ring),
                          u_coeff=rng.randint(-3, 3), name=f"galois-p{p}-d{d}")


def suite_galois(ps: Sequence[int] = (3, 5), per_case: int = 4, dmax: int = 2, depth: int = 4, k: int = 1,
                 seed: int = 3, extra: Iterable[ComponentModel] = ()) -> list[Check]:
    rng = random.Random(seed)
    models = [random_galois_model(rng, p, d) for p in ps for d in range(dmax + 1) for _ in range(per_case)]
    fails, neg_fails = [], []
    for m in models:
        rep = galois_check(m, k, depth)
        if not rep.ok:
            fails.append({"model": m.to_json(), "first_mismatch": rep.first_mismatch})
        if m.d >= 1 and galois_check(m, k, depth, corrupt=True).ok:
            neg_fails.append({"model": m.to_json()})
    out = [Check("galois", f"galois_check on {len(models)} synthetic models", not fails,
                 {"counterexamples": fails[:1]} if fails else {"models": len(models)}),
           Check("galois", "negative control: RHS without Chern-root rescaling fails", not neg_fails,
                 {"unexpected_pass": neg_fails[:1]} if neg_fails else {})]
    for m in extra:
        try:
            rep = galois_check(m, k, depth)
            ok, detail = rep.ok, ({} if rep.ok else {"model": m.name, "first_mismatch": rep.first_mismatch,
                                                     "lhs": rep.lhs.to_json(), "rhs": rep.rhs.to_json()})
        except EqHitchinError as exc:
            ok, detail = False, {"model": m.name, "error": str(exc)}
        out.append(Check("galois", f"galois_check model {m.name or '?'}", ok, detail))
    return out


def suite_iki_uku(ps: Sequence[int] = (3, 5), n: int = 10, dmax: int = 2, depth: int = 4, seed: int = 4) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for p in ps:
        fa, fi, fu, neg = [], [], [], []
        for _ in range(n):
            ring = _ring(p, rng.randint(0, dmax))
            c1 = _rand_c1(rng, ring)
            if not identity_algebra(ring, c1):
                fa.append(c1.to_json())
            T = KClass(ring, [LineTerm(_rand_c1(rng, ring), 0, 0, 1) for _ in range(rng.randint(1, 3))])
            if not identity_todd_rescaling(T):
                fi.append(T.to_json())
            W = KClass(ring, [LineTerm(_rand_c1(rng, ring), rng.choice([-2, -1, 1, 2]), 0, 1)
                              for _ in range(rng.randint(1, 3))])
            if not identity_omega_substitution(W, depth):
                fu.append(W.to_json())
            if todd_rescaling_wrong_prefactor(T):
                neg.append(T.to_json())
            if ring.d >= 1 and any(not t.c1.is_zero() for t in W.terms) and omega_substitution_without_rescale(W, depth):
                neg.append(W.to_json())
        out += [
            Check("iki-uku", f"product over mu_p of (Z - a/Z), p={p}", not fa, {"c1": fa[:1]} if fa else {}),
            Check("iki-uku", f"lambda product times Todd rescales, p={p}", not fi, {"T": fi[:1]} if fi else {}),
            Check("iki-uku", f"omega(W Phi_p) = omega(W)(t^p, p y), p={p}", not fu, {"W": fu[:1]} if fu else {}),
            Check("iki-uku", f"negative controls fail (wrong prefactor, missing rescale), p={p}", not neg,
                  {"unexpected_pass": neg[:1]} if neg else {}),
        ]
    return out


def todd_rescaling_wrong_prefactor(T: KClass) -> bool:
    """The Todd rescaling identity with prefactor p^-(rank-1); false already in degree 0."""
    ring = T.ring
    p = ring.p
    moving = T.times_group_ring({j: 1 for j in range(1, p)})
    lhs = g_inv(lambda_dual(moving).coefficient(0)) * todd(T)
    rhs = todd(T).rescale(p).scale(Fraction(1, p ** (T.rank() - 1)))
    return lhs == rhs


def omega_substitution_without_rescale(W: KClass, depth: int = 4) -> bool:
    """omega(W Phi_p) against omega(W)(t^p, y); false once a Chern root is nonzero and d >= 1."""
    p = W.ring.p
    return omega(W.times_group_ring({l: 1 for l in range(p)}), p * depth).agrees_with(omega(W, depth).substitute_t(p))


# assembly

TOY_GEOMETRIES = (
    (3, 2, (1, 1, 2, 2)),
    (3, 3, (1, 2)),
    (5, 2, (1, 3, 3)),
)


def toy_geometry(p: int, g: int, ns: Sequence[int]) -> GeometryInput:
    """Geometry with rotation exponents ``ns`` and assorted weight exponents."""
    return GeometryInput(p, g, tuple(Point(n, (2 * k + 1) % p, f"x{k + 1}") for k, n in enumerate(ns)))


def toy_models(geom: GeometryInput, rng: random.Random, d: int = 1, max_models: int | None = None) -> list[ComponentModel]:
    """Random toy models on every N and Higgs component of a geometry.

    The ring has generators ``a`` and ``b``; tangent data and line classes are
    random integral combinations.  They satisfy the root-data integrality
    when the geometry has zero monodromy residue.
    """
    ring = _ring(geom.p, d)
    out = []
    for i, _wd in enumerate_weight_tuples(geom):
        comps: list = [None] + enumerate_higgs_components(geom, i)
        for comp in comps:
            tangent = KClass(ring, [LineTerm(_rand_c1(rng, ring), 0, 0, 1) for _ in range(d)]
                             + [LineTerm(_rand_c1(rng, ring), rng.choice([-1, 1, -2]), 0, 1) for _ in range(2)])
            tw = (0, 0) if comp is None else (1, 0)
            lines = {x: (_rand_c1(rng, ring), _rand_c1(rng, ring), *tw) for x in geom.labels}
            name = f"i={i}," + ("N" if comp is None else f"c={comp.c},j={','.join(map(str, comp.j))}")
            if comp is None:
                m = ComponentModel(ring, tangent, lines, omega_base=_rand_c1(rng, ring), u_coeff=0,
                                   m_i=rng.randrange(geom.p), i=i.as_dict(), j="N", name=name)
            else:
                m = ComponentModel(ring, tangent, lines, omega_base=_rand_c1(rng, ring),
                                   u_coeff=cij(geom, i, comp), m_i=rng.randrange(geom.p), i=i.as_dict(),
                                   j="higgs", c=comp.c, j_values=dict(zip(geom.labels, comp.j)), name=name)
            out.append(m)
            if max_models is not None and len(out) >= max_models:
                return out
    return out


def toy_oracle(d: int) -> IntersectionOracle:
    """Table oracle on the toy ring: integral of y0^a y1^(d-a) is 1/(a+1)."""
    if d == 0:
        return PointOracle()
    table = {f"y0^{a}*y1^{d - a}": Fraction(1, a + 1) for a in range(d + 1)}
    return TableOracle(d, table)


def suite_assembly(depth: int = 3, k: int = 1, seed: int = 5, max_models: int = 12,
                   geometries: Sequence = TOY_GEOMETRIES, convention: str = "conormal") -> list[Check]:
    rng = random.Random(seed)
    out = []
    for spec in geometries:
        geom = _as_geometry(spec)
        p = geom.p
        tag = f"p={p} g={geom.genus} n={[q.n for q in geom.points]}"
        res_mod = geom.monodromy_residue()
        if res_mod:
            out.append(Check("assembly", f"skipped {tag}: monodromy residue {res_mod} != 0, no cyclic cover has this data",
                             True, {"skipped": True}))
            continue
        models = toy_models(geom, rng, max_models=max_models)
        power_fail, lead_fail = [], []
        for m in models:
            V = build_V(geom, m)
            try:
                res = chi_parts(m, V, depth, convention)
            except EqHitchinError as exc:
                power_fail.append({"model": m.name, "error": str(exc)})
                continue
            if not (res.chi ** p).agrees_with(res.A ** p * res.B):
                power_fail.append({"model": m.name})
            if res.chi.leading_coefficient().const_coeff() != res.data.zeta_lead:
                lead_fail.append({"model": m.name})
        out.append(Check("assembly", f"chi^p = Omega(T Phi)^p Omega(V - pi0 V Phi), {tag} x{len(models)}",
                         not power_fail, {"failures": power_fail[:2]} if power_fail else {}))
        out.append(Check("assembly", f"leading coefficient = zeta~, {tag}", not lead_fail,
                         {"failures": lead_fail[:2]} if lead_fail else {}))
        comps = [(m, toy_oracle(m.d)) for m in models[:6]]
        half = len(comps) // 2
        try:
            whole = index_series(comps, geom, k, depth, convention=convention)
            parts = index_series(comps[:half], geom, k, depth, convention=convention) + \
                index_series(comps[half:], geom, k, depth, convention=convention)
            perm = comps[:]
            rng.shuffle(perm)
            shuffled = index_series(perm, geom, k, depth, convention=convention)
            add_ok, ord_ok = whole.agrees_with(parts), whole.agrees_with(shuffled)
        except EqHitchinError as exc:
            add_ok = ord_ok = False
        out.append(Check("assembly", f"index_series additive, {tag}", add_ok))
        out.append(Check("assembly", f"index_series order-invariant, {tag}", ord_ok))
    return out


# determination by fixed point data

def _as_geometry(spec) -> GeometryInput:
    return spec if isinstance(spec, GeometryInput) else toy_geometry(*spec)


def _positional(obj, labels: Sequence[str]):
    """Replace point labels by their position so outputs can be compared across relabelings."""
    pos = {x: f"#{k}" for k, x in enumerate(labels)}
    if isinstance(obj, dict):
        return {pos.get(k, k): _positional(v, labels) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_positional(v, labels) for v in obj]
    if isinstance(obj, str):
        return pos.get(obj, obj)
    return obj


def determination_outputs(geom: GeometryInput, positional: bool = False) -> str:
    data = {
        "seifert": seifert(geom).to_json(),
        "fixed_point_data": fixed_point_data(geom).to_json(),
        "components": components_report(geom),
    }
    if positional:
        data = _positional(data, geom.labels)
    return json.dumps(data, sort_keys=True)


def suite_determination(n_perm: int = 50, seed: int = 6,
                        geometries: Sequence = ((3, 2, (1, 1, 2, 2)), (5, 2, (1, 3, 3)), (3, 3, (1, 2)))) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for spec in geometries:
        base = _as_geometry(spec)
        p, g = base.p, base.genus
        ref = determination_outputs(base)
        ref_pos = determination_outputs(base, positional=True)
        perm_fail = relabel_fail = 0
        for _ in range(n_perm):
            pts = list(base.points)
            rng.shuffle(pts)
            if determination_outputs(GeometryInput(p, g, tuple(pts), base.marked, base.deg_lambda)) != ref:
                perm_fail += 1
            labels = [q.label for q in pts]
            fresh = [f"q{rng.randrange(10 ** 6)}_{k}" for k in range(len(pts))]
            rng.shuffle(fresh)
            relabeled = tuple(Point(q.n, q.l, lab) for q, lab in zip(pts, fresh))
            marked = None if base.marked is None else fresh[labels.index(base.marked)]
            if determination_outputs(GeometryInput(p, g, relabeled, marked, base.deg_lambda),
                                     positional=True) != ref_pos:
                relabel_fail += 1
        tag = f"p={p} g={g} n={[q.n for q in base.points]}"
        out.append(Check("determination", f"permutation invariance x{n_perm}, {tag}", perm_fail == 0,
                         {"failures": perm_fail} if perm_fail else {}))
        out.append(Check("determination", f"depends only on (n, l) multiset x{n_perm}, {tag}", relabel_fail == 0,
                         {"failures": relabel_fail} if relabel_fail else {}))
    return out


def run_suite(name: str, **kw) -> list[Check]:
    table: dict[str, Callable[..., list[Check]]] = {
        "cyclotomic": suite_cyclotomic,
        "inversion": suite_inversion,
        "root": suite_root,
        "combinatorics": suite_combinatorics,
        "galois": suite_galois,
        "iki-uku": suite_iki_uku,
        "assembly": suite_assembly,
        "determination": suite_determination,
    }
    if name == "all":
        out = []
        for s in SUITES:
            out += table[s](**kw.get(s, {}))
        return out
    if name not in table:
        raise KeyError(name)
    return table[name](**kw.get(name, {}))
