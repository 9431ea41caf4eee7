"""Select the echelon kernel at import time.

The compiled extension is used when it imports; ``OSCHEN_PURE_PYTHON=1``
forces the pure-Python twin.
"""

import os

from . import _modp_py

try:
    if os.environ.get("OSCHEN_PURE_PYTHON"):
        raise ImportError("pure-Python kernel requested")
    from . import _modp as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

COMPILED = _compiled is not None


def echelon_class(compiled=None):
    """Return the EchelonModP implementation to use.

    ``compiled=None`` picks the best available one; ``True`` demands the
    extension and ``False`` the fallback.
    """
    if compiled is None:
        compiled = COMPILED
    if compiled:
        if _compiled is None:
            raise RuntimeError("compiled kernel is not available")
        return _compiled.EchelonModP
    return _modp_py.EchelonModP


def integer_echelon_class():
    """The compiled fraction-free integer kernel, or None without the extension."""
    return None if _compiled is None else _compiled.EchelonZZ
