"""Decision procedures for finite-outcome quantum observables.

Thin facade over the compiled core; every symbol is re-exported from
``povmkit._core``.
"""

__version__ = "0.1.0"

try:
    from ._core import *  # noqa: F401,F403
except ImportError:  # build-tree layout: ctest points at the extension dir
    import os
    import sys

    _ext_dir = os.environ.get("POVMKIT_EXT_DIR")
    if not _ext_dir:
        raise
    sys.path.insert(0, _ext_dir)
    from _core import *  # noqa: F401,F403
