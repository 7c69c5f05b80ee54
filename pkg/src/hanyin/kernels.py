"""Hot loops, compiled when the Cython extension is built.

``BACKEND`` is ``"cython"`` or ``"python"``; both expose the same functions.
Setting ``HANYIN_PURE_PYTHON=1`` forces the fallback even when the
extension is present.
"""
import os

if os.environ.get("HANYIN_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _kernels_py as _impl
        BACKEND = "python"

lcg_uniform = _impl.lcg_uniform
resonate = _impl.resonate
eac_enhance = _impl.eac_enhance
hysteresis = _impl.hysteresis
median3 = _impl.median3

__all__ = ["BACKEND", "lcg_uniform", "resonate", "eac_enhance", "hysteresis", "median3"]
