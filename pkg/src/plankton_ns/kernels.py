"""Backend selection for the iteration kernels.

The compiled ``_ckernels`` extension is used when it imports. Setting
``PLANKTON_NS_BACKEND=python`` forces the pure-Python ``_pykernels``.
``BACKEND`` names the module in use.
"""

import os

from . import _pykernels

_forced = os.environ.get("PLANKTON_NS_BACKEND", "").strip().lower()

if _forced == "python":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        if _forced in ("c", "cython", "compiled"):
            raise
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

orbit = _impl.orbit
lyapunov = _impl.lyapunov
converge = _impl.converge
converge_many = _impl.converge_many
sweep = _impl.sweep

OK = _pykernels.OK
ESCAPED = _pykernels.ESCAPED
UNDERFLOW = _pykernels.UNDERFLOW
NONFINITE = _pykernels.NONFINITE
MAX_ITER = _pykernels.MAX_ITER
MONO_RTOL = _pykernels.MONO_RTOL


def available_backends():
    """Mapping of backend name to module for every backend that imports."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
