"""Backend selection for the numerical kernels.

The compiled module ``orlicz_kit._core`` is used when it imports; otherwise
the pure-Python ``orlicz_kit._pycore`` is used. Setting the environment
variable ``ORLICZ_KIT_PURE=1`` forces the pure-Python path.

``BACKEND`` names the active backend (``"compiled"`` or ``"python"``).
"""
import os

from . import _pycore

if os.environ.get("ORLICZ_KIT_PURE", "") not in ("", "0"):
    _impl = _pycore
    BACKEND = "python"
else:
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on build environment
        _impl = _pycore
        BACKEND = "python"

BIG = _pycore.BIG

KIND_LP = _pycore.KIND_LP
KIND_POWER = _pycore.KIND_POWER
KIND_COSH = _pycore.KIND_COSH
KIND_ASINH_INT = _pycore.KIND_ASINH_INT
KIND_XLOG1 = _pycore.KIND_XLOG1
KIND_LLOGL = _pycore.KIND_LLOGL
KIND_PHI_EXP = _pycore.KIND_PHI_EXP
KIND_EXPM = _pycore.KIND_EXPM
KIND_X1LOG = _pycore.KIND_X1LOG
KIND_LINF = _pycore.KIND_LINF

MODEL_CARLEMAN = _pycore.MODEL_CARLEMAN
MODEL_BROADWELL = _pycore.MODEL_BROADWELL

psi_value = _impl.psi_value
psi_values = _impl.psi_values
density_value = _impl.density_value
density_inverse = _impl.density_inverse
integrate_density = _impl.integrate_density
modular_sum = _impl.modular_sum
luxemburg_bisect = _impl.luxemburg_bisect
rk4_run = _impl.rk4_run


def available_backends():
    """Return a dict ``name -> module`` of importable kernel backends."""
    out = {"python": _pycore}
    try:
        from . import _core
        out["compiled"] = _core
    except ImportError:  # pragma: no cover
        pass
    return out
