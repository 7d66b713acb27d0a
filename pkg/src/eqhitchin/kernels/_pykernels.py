"""Reference implementations of the arithmetic kernels.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature and bit-identical results.  Coefficient vectors are plain lists of
Python ints; denominators are handled by the callers.
"""
from __future__ import annotations

from math import gcd


def cyclic_mul(a, b, p):
    """Product of two length-p integer vectors in Z[Y]/(Y^p - 1)."""
    out = [0] * p
    for i in range(p):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(p):
            bj = b[j]
            if bj:
                k = i + j
                if k >= p:
                    k -= p
                out[k] += ai * bj
    return out


def field_mul(a, b, p):
    """Product of two length-(p-1) vectors in Z[Y]/Phi_p, power basis 1..Y^(p-2)."""
    n = p - 1
    c = [0] * p
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(n):
            bj = b[j]
            if bj:
                k = i + j
                if k >= p:
                    k -= p
                c[k] += ai * bj
    top = c[n]
    if top:
        return [c[k] - top for k in range(n)]
    return c[:n]


def vec_content(v, den):
    """gcd of the entries of ``v`` and ``den``."""
    g = den
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def graded_mul(ta, tb, degs, d, p, field):
    """Truncated product of two graded elements given as raw term lists.

    ``ta`` and ``tb`` are lists of ``(mono, num, den)`` with ``mono`` a tuple of
    exponents, ``num`` a list of ints and ``den`` a positive int.  Coefficients
    live in Z[Y]/Phi_p when ``field`` is true, else in Z[Y]/(Y^p - 1).
    Returns a dict ``mono -> [num, den]`` (not reduced).
    """
    mul = field_mul if field else cyclic_mul
    nvar = len(degs)
    da = [sum(m[v] * degs[v] for v in range(nvar)) for m, _, _ in ta]
    db = [sum(m[v] * degs[v] for v in range(nvar)) for m, _, _ in tb]
    acc = {}
    for ia, (ma, na, dena) in enumerate(ta):
        dga = da[ia]
        for ib, (mb, nb, denb) in enumerate(tb):
            if dga + db[ib] > d:
                continue
            mono = tuple(ma[v] + mb[v] for v in range(nvar))
            prod = mul(na, nb, p)
            den = dena * denb
            cur = acc.get(mono)
            if cur is None:
                acc[mono] = [prod, den]
            elif cur[1] == den:
                cn = cur[0]
                for k in range(len(cn)):
                    cn[k] += prod[k]
            else:
                cd = cur[1]
                g = gcd(cd, den)
                fa = den // g
                fb = cd // g
                cur[0] = [x * fa + y * fb for x, y in zip(cur[0], prod)]
                cur[1] = cd * fa
    return acc
