"""Kernel selection: compiled elimination core with pure-Python fallback."""

from cdgacyc import _elim_py

try:
    from cdgacyc import _elim_c as _active
except ImportError:  # extension not built
    _active = _elim_py

bareiss = _active.bareiss
KERNEL_NAME = _active.KERNEL_NAME


def available_kernels():
    """Name -> bareiss callable for every kernel importable here."""
    kernels = {_elim_py.KERNEL_NAME: _elim_py.bareiss}
    if _active is not _elim_py:
        kernels[_active.KERNEL_NAME] = _active.bareiss
    return kernels
