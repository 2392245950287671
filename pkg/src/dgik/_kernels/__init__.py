"""Cost/gradient kernel backend selection.

The compiled extension is preferred when present; a pure numpy fallback keeps
the package functional in source-only installs. Set ``DGIK_FORCE_NUMPY=1`` to
force the fallback (used by the backend comparison benchmark).
"""

import os

from . import _numpy

if os.environ.get("DGIK_FORCE_NUMPY"):
    _impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _numpy
        BACKEND = "numpy"

cost_only = _impl.cost_only
cost_and_grad = _impl.cost_and_grad
