"""Kernel backend selection.

At import the compiled extension ``bilipjet._mlkernels`` is preferred and the
NumPy module ``bilipjet._mlkernels_py`` is the fallback.  The environment
variable ``BILIPJET_KERNELS`` pins the choice: ``compiled`` (fail if missing),
``python`` (ignore the extension), or ``auto`` (default).  Both backends
implement the same contract; results agree to floating-point reassociation.
"""

import os

from .errors import ConfigError

_CHOICE = os.environ.get("BILIPJET_KERNELS", "auto").strip().lower()

if _CHOICE not in ("auto", "compiled", "python"):
    raise ConfigError(
        f"BILIPJET_KERNELS must be auto/compiled/python, got {_CHOICE!r}")

if _CHOICE == "python":
    from . import _mlkernels_py as kernels
    BACKEND = "python"
elif _CHOICE == "compiled":
    from . import _mlkernels as kernels  # type: ignore[no-redef]
    BACKEND = "compiled"
else:
    try:
        from . import _mlkernels as kernels  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        from . import _mlkernels_py as kernels  # type: ignore[no-redef]
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
