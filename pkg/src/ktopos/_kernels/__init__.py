"""Bitmask kernels with a compiled core and a pure-Python fallback.

The compiled extension is used when it was built and imports cleanly; set
``KTOPOS_PURE_PYTHON=1`` to force the fallback.  ``BACKEND`` names the active
implementation.  Compiled kernels handle at most 64 elements; larger inputs
are routed to the Python versions automatically.
"""

import os

from . import _pykernels as py

BACKEND = "python"
_c = None
if not os.environ.get("KTOPOS_PURE_PYTHON"):
    try:
        from . import _ckernels as _c

        BACKEND = "cython"
    except ImportError:  # extension not built
        _c = None

_LIMIT = 64


def _pick(n):
    return _c if (_c is not None and n <= _LIMIT) else py


def enumerate_upsets(up):
    return _pick(len(up)).enumerate_upsets(up)


def upset_implies(up, a, b):
    return _pick(len(up)).upset_implies(up, a, b)


def image_mask(assign, mask):
    return _pick(max(len(assign), max(assign, default=0) + 1)).image_mask(assign, mask)


def preimage_mask(assign, mask):
    return _pick(len(assign)).preimage_mask(assign, mask)


def open_witness(dom_up, assign, cod_up):
    return _pick(max(len(dom_up), len(cod_up))).open_witness(dom_up, assign, cod_up)


def monotone_maps(dom_up, cod_up, only_open=False):
    return _pick(max(len(dom_up), len(cod_up))).monotone_maps(dom_up, cod_up, only_open)
