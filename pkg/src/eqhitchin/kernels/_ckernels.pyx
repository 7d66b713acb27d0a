# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled arithmetic kernels.

Same contract as ``_pykernels``.  Inputs whose entries all fit below 2**26 in
absolute value (and p <= 2048) run on int64 scratch buffers; anything larger
goes through the generic object loop so results never overflow.
"""
from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t
from math import gcd

cdef enum:
    SMALL = 67108864  # 2**26
    MAXP = 2048


cdef bint _load_small(object v, Py_ssize_t n, int64_t* buf):
    cdef Py_ssize_t i
    cdef object x
    for i in range(n):
        x = v[i]
        if not (-SMALL < x < SMALL):
            return False
        buf[i] = <int64_t>x
    return True


cdef list _obj_cyclic(object a, object b, Py_ssize_t p):
    cdef Py_ssize_t i, j, k
    cdef list out = [0] * p
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


cdef list _cyclic_core(object a, object b, Py_ssize_t p, Py_ssize_t n):
    """Wraparound convolution of the first n entries into a length-p list."""
    cdef int64_t* buf = <int64_t*>malloc(3 * p * sizeof(int64_t))
    cdef int64_t* x = buf
    cdef int64_t* y = buf + p
    cdef int64_t* z = buf + 2 * p
    cdef Py_ssize_t i, j, k
    cdef int64_t xi
    cdef list out
    if buf == NULL:
        raise MemoryError()
    try:
        if p <= MAXP and _load_small(a, n, x) and _load_small(b, n, y):
            for k in range(p):
                z[k] = 0
            for i in range(n):
                xi = x[i]
                if xi == 0:
                    continue
                for j in range(n):
                    k = i + j
                    if k >= p:
                        k -= p
                    z[k] += xi * y[j]
            out = [z[k] for k in range(p)]
        else:
            if n < p:
                out = _obj_cyclic(list(a) + [0], list(b) + [0], p)
            else:
                out = _obj_cyclic(a, b, p)
    finally:
        free(buf)
    return out


def cyclic_mul(a, b, Py_ssize_t p):
    """Product of two length-p integer vectors in Z[Y]/(Y^p - 1)."""
    return _cyclic_core(a, b, p, p)


def field_mul(a, b, Py_ssize_t p):
    """Product of two length-(p-1) vectors in Z[Y]/Phi_p, power basis."""
    cdef Py_ssize_t n = p - 1
    cdef Py_ssize_t k
    cdef list c = _cyclic_core(a, b, p, n)
    top = c[n]
    if top:
        return [c[k] - top for k in range(n)]
    del c[n]
    return c


def vec_content(v, den):
    """gcd of the entries of ``v`` and ``den``."""
    g = den
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def graded_mul(list ta, list tb, tuple degs, Py_ssize_t d, Py_ssize_t p, bint field):
    """Truncated product of two graded elements given as raw term lists."""
    cdef Py_ssize_t nvar = len(degs)
    cdef Py_ssize_t na_ = len(ta), nb_ = len(tb)
    cdef Py_ssize_t ia, ib, v, k, dga
    cdef Py_ssize_t* da = <Py_ssize_t*>malloc((na_ + nb_ + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* db
    cdef Py_ssize_t s
    cdef dict acc = {}
    cdef list cn, prod
    if da == NULL:
        raise MemoryError()
    db = da + na_
    try:
        for ia in range(na_):
            m = ta[ia][0]
            s = 0
            for v in range(nvar):
                s += <Py_ssize_t>m[v] * <Py_ssize_t>degs[v]
            da[ia] = s
        for ib in range(nb_):
            m = tb[ib][0]
            s = 0
            for v in range(nvar):
                s += <Py_ssize_t>m[v] * <Py_ssize_t>degs[v]
            db[ib] = s
        for ia in range(na_):
            ma, numa, dena = ta[ia]
            dga = da[ia]
            for ib in range(nb_):
                if dga + db[ib] > d:
                    continue
                mb, numb, denb = tb[ib]
                mono = tuple([ma[v] + mb[v] for v in range(nvar)])
                if field:
                    prod = field_mul(numa, numb, p)
                else:
                    prod = _cyclic_core(numa, numb, p, p)
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
    finally:
        free(da)
    return acc
