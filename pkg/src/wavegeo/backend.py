"""Selects the compute backend for the hot inner loops.

The JIT-compiled path (numba) is the default.  Setting the environment
variable ``WAVEGEO_NO_NUMBA=1`` before import selects the pure-numpy
fallback, which produces the same results (up to summation order) at
lower speed.  ``benchmarks/bench_backends.py`` compares the two.
"""

import os

USE_NUMBA = os.environ.get("WAVEGEO_NO_NUMBA", "0") not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from . import _fast_numba as _impl
    except ImportError:  # numba missing: silently fall back
        from . import _fast_numpy as _impl
        USE_NUMBA = False
else:
    from . import _fast_numpy as _impl

alf_degree_table = _impl.alf_degree_table
march_sphere = _impl.march_sphere
march_sphere_cap = _impl.march_sphere_cap
march_torus = _impl.march_torus
torus_direct_sum = _impl.torus_direct_sum
gegenbauer_table = _impl.gegenbauer_table


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
