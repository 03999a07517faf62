import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import posets
from ktopos import _kernels as K
from ktopos._kernels import _pykernels as py

c = getattr(K, "_c", None)
needs_c = pytest.mark.skipif(c is None, reason="compiled kernels not built")


@needs_c
@given(posets(max_size=7))
def test_enumerate_upsets_parity(P):
    assert sorted(c.enumerate_upsets(list(P.up))) == sorted(py.enumerate_upsets(list(P.up)))


@needs_c
@given(posets(max_size=6), st.data())
def test_implies_parity(P, data):
    ups = py.enumerate_upsets(list(P.up))
    a = data.draw(st.sampled_from(ups))
    b = data.draw(st.sampled_from(ups))
    assert c.upset_implies(P.up, a, b) == py.upset_implies(P.up, a, b)


@needs_c
@given(posets(min_size=1, max_size=4), posets(min_size=1, max_size=4))
def test_map_kernels_parity(P, Q):
    for only_open in (False, True):
        maps_c = sorted(map(tuple, c.monotone_maps(list(P.up), list(Q.up), only_open)))
        maps_py = sorted(map(tuple, py.monotone_maps(list(P.up), list(Q.up), only_open)))
        assert maps_c == maps_py
    for t in py.monotone_maps(list(P.up), list(Q.up)):
        assert c.open_witness(P.up, t, Q.up) == py.open_witness(P.up, t, Q.up)
        for m in range(1 << len(Q)):
            assert c.preimage_mask(t, m) == py.preimage_mask(t, m)
        for m in range(1 << len(P)):
            assert c.image_mask(t, m) == py.image_mask(t, m)


def test_large_inputs_fall_back():
    # 70 points exceed the compiled kernels' 64-bit masks
    up = [(1 << 70) - (1 << i) for i in range(70)]  # a chain
    assert len(K.enumerate_upsets(up)) == 71


def test_forced_pure_python_backend():
    env = dict(os.environ, KTOPOS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import ktopos._kernels as K; print(K.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_backend_name():
    assert K.BACKEND in ("python", "cython")
    if c is not None and not os.environ.get("KTOPOS_PURE_PYTHON"):
        assert K.BACKEND == "cython"
