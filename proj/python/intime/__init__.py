"""Internal-time reduction of collinear reactive scattering.

Thin Python layer over the C++ core: reaction-path geometry, the effective
parametric oscillator, closed-form transition matrices, and the direct
propagation oracle.
"""

try:
    from ._intime import *  # noqa: F401,F403  (installed package layout)
    from ._intime import __doc__ as _core_doc
except ImportError:  # build-tree layout: module sits next to the package on sys.path
    from _intime import *  # noqa: F401,F403
    from _intime import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
