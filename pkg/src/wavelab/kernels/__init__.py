"""Step-kernel backend selection.

The compiled extension (``wavelab.kernels._core``) is preferred; the
numpy implementation in ``reference`` is the fallback and the ground
truth for equivalence tests.  Set ``WAVELAB_PURE_PYTHON=1`` to force the
fallback (used by the benchmark and the backend-equivalence tests).
"""

import os

from . import reference

if os.environ.get("WAVELAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = reference
    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = reference
        BACKEND = "python"

step_periodic_1d = _impl.step_periodic_1d
step_periodic_2d = _impl.step_periodic_2d
step_periodic_3d = _impl.step_periodic_3d
step_box_1d = _impl.step_box_1d
step_box_2d = _impl.step_box_2d
step_box_3d = _impl.step_box_3d
step_radial_1d = _impl.step_radial_1d

STEP_TABLE = {
    ("periodic", 1): step_periodic_1d,
    ("periodic", 2): step_periodic_2d,
    ("periodic", 3): step_periodic_3d,
    ("box_dirichlet", 1): step_box_1d,
    ("box_dirichlet", 2): step_box_2d,
    ("box_dirichlet", 3): step_box_3d,
    ("radial3d", 1): step_radial_1d,
}
