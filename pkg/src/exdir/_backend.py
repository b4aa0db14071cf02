"""Kernel selection.

The compiled kernels are used when the extension is importable and the
EXDIR_PURE environment variable is not set to a truthy value.
"""

import os

from . import _pykernels

_ck = None
if os.environ.get("EXDIR_PURE", "").lower() not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _ck
    except ImportError:
        _ck = None

_k = _ck if _ck is not None else _pykernels
BACKEND = "cython" if _ck is not None else "python"

push_relabel = _k.push_relabel
pull_relabel = _k.pull_relabel
cut_scan = _k.cut_scan


def kernels(name=None):
    """Return the kernel module by name ("cython" or "python")."""
    if name is None:
        return _k
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ck is None:
            try:
                from . import _ckernels
            except ImportError:
                raise RuntimeError("compiled kernels are not built") from None
            return _ckernels
        return _ck
    raise ValueError(f"unknown backend {name!r}")
