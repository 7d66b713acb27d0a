"""Acceptance criteria, one test per criterion, each at its stated scale and time limit.

Every test prints a single PASS/FAIL line.  Criterion 8 states that the full
index of a genuine moduli space is out of reach and names criteria 1-7 as the
substitute, so it has no separate test.
"""
from __future__ import annotations

import itertools
import time

import pytest

from eqhitchin.combinatorics import brute_force_components, component_checks, enumerate_higgs_components, \
    enumerate_weight_tuples
from eqhitchin.verification import (
    ACCEPTANCE_TRIPLES,
    geometries_for,
    suite_assembly,
    suite_combinatorics,
    suite_cyclotomic,
    suite_determination,
    suite_galois,
    suite_inversion,
    suite_iki_uku,
    suite_root,
)


def report(capsys, number, title, checks, elapsed, limit):
    ok = all(c.ok for c in checks) and elapsed < limit
    passed = sum(c.ok for c in checks)
    line = (f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {passed}/{len(checks)} checks, "
            f"{elapsed:.2f} s (limit {limit} s)")
    with capsys.disabled():
        print("\n" + line)
        for c in checks:
            if not c.ok:
                print(f"    failed: {c.name} {c.detail}")
    return ok


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def test_criterion_1_cyclotomic(capsys):
    checks, dt = timed(lambda: suite_cyclotomic(ps=(3, 5, 7), n_random=500))
    assert report(capsys, 1, "cyclotomic identities", checks, dt, 1.0)


def test_criterion_2_inversion(capsys):
    checks, dt = timed(lambda: suite_inversion(ps=(3, 5), n=100, dmax=4))
    assert report(capsys, 2, "inversion", checks, dt, 10.0)


def test_criterion_3_root(capsys):
    checks, dt = timed(lambda: suite_root(ps=(3, 5), n=100, dmax=3, depth=4))
    assert report(capsys, 3, "p-th root", checks, dt, 30.0)


def _sampled_geometry_check(geom, stride: int, brute_every: int) -> tuple[bool, int, int]:
    """Component checks on every stride-th weight tuple, brute force on every brute_every-th of those."""
    n_comp = n_brute = 0
    for k, (i, _wd) in enumerate(itertools.islice(enumerate_weight_tuples(geom), 0, None, stride)):
        comps = enumerate_higgs_components(geom, i)
        n_comp += len(comps)
        if not all(all(component_checks(geom, i, c).values()) for c in comps):
            return False, n_comp, n_brute
        if k % brute_every == 0:
            n_brute += 1
            if comps != brute_force_components(geom, i):
                return False, n_comp, n_brute
    return True, n_comp, n_brute


def test_criterion_4_combinatorics(capsys):
    checks, dt = timed(lambda: suite_combinatorics(triples=ACCEPTANCE_TRIPLES))
    ok = report(capsys, 4, "combinatorics on (p,g,r) = (3,2,4), (3,3,1), (5,2,7)", checks, dt, 30.0)
    # informational: reading the triples as (p, g~, r) gives Hurwitz-consistent genera
    with capsys.disabled():
        for p, gq, r in ACCEPTANCE_TRIPLES:
            g = p * (gq - 1) + (p - 1) * r // 2 + 1
            start = time.perf_counter()
            if p == 5:
                geom = geometries_for(p, g, r, limit=1)[0]
                good, n_comp, n_brute = _sampled_geometry_check(geom, stride=20, brute_every=25)
                scope = f"1 geometry, every 20th weight tuple, brute force on {n_brute} tuples"
            else:
                geoms = geometries_for(p, g, r)
                res = [_sampled_geometry_check(G, 1, 1) for G in geoms]
                good, n_comp = all(x[0] for x in res), sum(x[1] for x in res)
                scope = f"{len(geoms)} geometries, all tuples, full brute force"
            print(f"INFO criterion 4 alternative reading (p,g~,r)=({p},{gq},{r}) -> g={g}: "
                  f"{'pass' if good else 'fail'}, {n_comp} components ({scope}), "
                  f"{time.perf_counter() - start:.2f} s")
    assert ok


def test_criterion_5_galois(capsys):
    def run():
        return suite_galois(ps=(3, 5), per_case=4, dmax=2, depth=4) + \
            suite_iki_uku(ps=(3, 5), n=10, dmax=2, depth=4)
    checks, dt = timed(run)
    n_models = 2 * 3 * 4
    assert n_models >= 20
    assert report(capsys, 5, f"Galois case on {n_models} models plus identities", checks, dt, 60.0)


def test_criterion_6_assembly(capsys):
    checks, dt = timed(lambda: suite_assembly())
    assert not any(c.detail.get("skipped") for c in checks)
    assert report(capsys, 6, "assembly consistency", checks, dt, 30.0)


def test_criterion_7_determination(capsys):
    checks, dt = timed(lambda: suite_determination(n_perm=50))
    assert report(capsys, 7, "determination by fixed point data", checks, dt, 10.0)
