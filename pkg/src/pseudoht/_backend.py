"""Select the compiled kernel core when available, else the NumPy fallback.

Override with PSEUDOHT_BACKEND = "py" | "ext" | "auto" (default "auto").
"""
import os

from . import _kernels_py

BACKEND_NAME = "py"
_impl = _kernels_py

_choice = os.environ.get("PSEUDOHT_BACKEND", "auto").lower()
if _choice in ("auto", "ext"):
    try:
        from . import _kernels_ext as _ext

        _impl = _ext
        BACKEND_NAME = "ext"
    except ImportError:
        if _choice == "ext":
            raise

kappa_vec = _impl.kappa_vec
volume_element_vec = _impl.volume_element_vec
osc_rho_sum = _impl.osc_rho_sum
offcone_accumulate = _impl.offcone_accumulate


def available_backends():
    names = ["py"]
    try:
        from . import _kernels_ext  # noqa: F401

        names.append("ext")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    if name == "py":
        return _kernels_py
    if name == "ext":
        from . import _kernels_ext

        return _kernels_ext
    raise ValueError(f"unknown backend {name!r}")
