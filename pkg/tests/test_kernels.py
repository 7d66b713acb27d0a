from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from eqhitchin import kernels
from eqhitchin.kernels import _pykernels
from eqhitchin.verification import suite_galois, suite_root

BACKENDS = kernels.available()
needs_cython = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")

small = st.integers(-50, 50)
big = st.integers(-(10 ** 30), 10 ** 30)


@pytest.fixture
def restore_backend():
    before = kernels.current()
    yield
    kernels.use(before)


def test_backend_selection(restore_backend):
    assert "python" in BACKENDS
    assert kernels.use("python") is _pykernels
    assert kernels.current() == "python"
    with pytest.raises(ValueError):
        kernels.use("fortran")


def test_python_reference_values():
    # (1 + Y)(1 + Y^2) = 2 + Y + Y^2 mod Y^3 - 1
    assert list(_pykernels.cyclic_mul([1, 1, 0], [1, 0, 1], 3)) == [2, 1, 1]
    # Y * Y = Y^2 = -1 - Y mod Phi_3
    assert list(_pykernels.field_mul([0, 1], [0, 1], 3)) == [-1, -1]
    assert _pykernels.vec_content([6, -9, 12], 15) == 3


def _normalized(acc):
    out = {}
    for mono, (num, den) in acc.items():
        out[mono] = tuple(Fraction(x, den) for x in num)
    return out


@needs_cython
@given(st.sampled_from([3, 5, 7]), st.data(), st.sampled_from([small, big]))
def test_vector_kernels_agree(p, data, ints):
    from eqhitchin.kernels import _ckernels
    a = data.draw(st.lists(ints, min_size=p, max_size=p))
    b = data.draw(st.lists(ints, min_size=p, max_size=p))
    assert list(_ckernels.cyclic_mul(a, b, p)) == list(_pykernels.cyclic_mul(a, b, p))
    assert list(_ckernels.field_mul(a[:-1], b[:-1], p)) == list(_pykernels.field_mul(a[:-1], b[:-1], p))
    den = data.draw(st.integers(1, 10 ** 6))
    assert _ckernels.vec_content(a, den) == _pykernels.vec_content(a, den)


@needs_cython
@given(st.sampled_from([3, 5]), st.booleans(), st.data())
def test_graded_kernel_agrees(p, field, data):
    from eqhitchin.kernels import _ckernels
    n = p - 1 if field else p
    monos = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1)]

    def terms():
        out = []
        for m in data.draw(st.lists(st.sampled_from(monos), unique=True, max_size=5)):
            out.append((m, data.draw(st.lists(small, min_size=n, max_size=n)), data.draw(st.integers(1, 9))))
        return out

    ta, tb = terms(), terms()
    got = _ckernels.graded_mul(ta, tb, (1, 1), 2, p, field)
    want = _pykernels.graded_mul(ta, tb, (1, 1), 2, p, field)
    assert _normalized(got) == _normalized(want)


@needs_cython
def test_end_to_end_results_identical(restore_backend):
    out = {}
    for name in ("python", "cython"):
        kernels.use(name)
        checks = suite_root(n=5, seed=9) + suite_galois(per_case=1, seed=9)
        out[name] = [c.to_json() for c in checks]
    assert out["python"] == out["cython"]
    assert all(c["ok"] for c in out["python"])


def test_random_products_match_fraction_arithmetic():
    # field_mul against a direct reduction with Fractions
    rng = random.Random(3)
    for p in (3, 5, 7):
        for _ in range(20):
            a = [rng.randint(-9, 9) for _ in range(p - 1)]
            b = [rng.randint(-9, 9) for _ in range(p - 1)]
            full = [0] * (2 * p - 3)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    full[i + j] += x * y
            for k in range(len(full) - 1, p - 2, -1):  # Y^k = -(Y^(k-1) + ... + Y^(k-p+1))
                c = full[k]
                full[k] = 0
                for s in range(1, p):
                    full[k - s] -= c
            assert list(kernels.field_mul(a, b, p)) == full[:p - 1]
