"""Hot numeric kernels with a selectable backend.

Two interchangeable implementations exist:

* :mod:`deepokan.kernels.fast`      -- numba ``@njit`` compiled loops
* :mod:`deepokan.kernels.reference` -- pure numpy, always available

The backend is chosen once at import time from the ``DEEPOKAN_NUMBA``
environment variable: set it to ``0`` (or ``false``/``off``) to force the
numpy path. Any other value (or leaving it unset) selects numba when it is
importable, silently falling back to numpy otherwise.

``benchmarks/bench_backends.py`` times the two backends against each other.
"""

import os

_flag = os.environ.get("DEEPOKAN_NUMBA", "1").strip().lower()

if _flag in ("0", "false", "off", "no"):
    from .reference import rbf_backward, rbf_forward, wave_family  # noqa: F401

    BACKEND = "numpy"
else:
    try:
        from .fast import rbf_backward, rbf_forward, wave_family  # noqa: F401

        BACKEND = "numba"
    except ImportError:
        from .reference import rbf_backward, rbf_forward, wave_family  # noqa: F401

        BACKEND = "numpy"
