"""Wires the build-tree extension into the source-tree package.

PEBFCS_EXT_DIR points at the directory holding the compiled _core module,
PEBFCS_PKG_DIR at the source python/ directory; with a pip install neither
is needed and the installed package is used as-is.
"""

import os
import sys

ext_dir = os.environ.get("PEBFCS_EXT_DIR")
pkg_dir = os.environ.get("PEBFCS_PKG_DIR")

if pkg_dir:
    sys.path.insert(0, pkg_dir)
if ext_dir:
    sys.path.insert(0, ext_dir)
    import _core  # noqa: E402

    sys.modules["pebfcs._core"] = _core
