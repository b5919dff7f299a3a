"""Hot decoding kernels: compiled extension when available, pure Python
otherwise. Set CNECC_PURE_PYTHON=1 to force the fallback (used by the
parity tests and the benchmark).
"""

import os

from . import viterbi_py

_impl = viterbi_py
_backend = "python"

if not os.environ.get("CNECC_PURE_PYTHON"):
    try:
        from . import _viterbi as _compiled

        _impl = _compiled
        _backend = "compiled"
    except ImportError:
        pass

viterbi_frames = _impl.viterbi_frames
viterbi_frames_py = viterbi_py.viterbi_frames


def backend_name() -> str:
    return _backend
