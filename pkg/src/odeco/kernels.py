"""Import-time selection of the contraction-kernel backend.

Two interchangeable implementations exist: ``_contract`` (compiled) and
``_kernels_py`` (pure NumPy).  The compiled one is preferred when the
extension built; set ``ODECO_BACKEND=python`` or ``ODECO_BACKEND=cython``
to force a choice (forcing ``cython`` raises if the extension is missing).

``get_backend`` exposes both modules so benchmarks and tests can compare
them directly regardless of which one was selected.
"""

import os

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}

try:
    from . import _contract

    _BACKENDS["cython"] = _contract
except ImportError:
    _contract = None

_requested = os.environ.get("ODECO_BACKEND", "auto").strip().lower()
if _requested == "auto":
    BACKEND = "cython" if "cython" in _BACKENDS else "python"
elif _requested in _BACKENDS:
    BACKEND = _requested
elif _requested == "cython":
    raise ImportError(
        "ODECO_BACKEND=cython but the compiled extension is not available; "
        "build the package or unset ODECO_BACKEND"
    )
else:
    raise ValueError(
        f"unknown ODECO_BACKEND {_requested!r}; expected auto, python, or cython"
    )

_impl = _BACKENDS[BACKEND]

apply_full = _impl.apply_full
apply_partial = _impl.apply_partial
project_sphere_slabs = _impl.project_sphere_slabs
ascent_step = _impl.ascent_step


def available_backends():
    """Names of the backends importable in this installation."""
    return tuple(sorted(_BACKENDS))


def get_backend(name):
    """Return the kernel module registered under ``name``."""
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {available_backends()}"
        ) from None
