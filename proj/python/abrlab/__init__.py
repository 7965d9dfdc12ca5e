"""1D quantum detection-time models.

Thin wrapper over the compiled ``_abrlab`` extension: absorbing boundary
rule, imaginary-potential soft detectors, GRW collapse process and the
thin-layer limit study.
"""

try:
    from ._abrlab import *  # noqa: F401,F403
    from . import _abrlab as _ext
except ImportError:  # in-tree build: extension sits next to the package
    from _abrlab import *  # noqa: F401,F403
    import _abrlab as _ext

__all__ = [name for name in dir(_ext) if not name.startswith("_")]
__version__ = "0.1.0"
