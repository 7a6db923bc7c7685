"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``EXPLORA_KERNELS=python`` to force the fallback (used by the benchmark
and the parity tests).
"""
from __future__ import annotations

import os

if os.environ.get("EXPLORA_KERNELS", "").lower() == "python":
    from explora.kernels import _pykernels as _impl
else:
    try:
        from explora.kernels import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from explora.kernels import _pykernels as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND
pairwise_cosine_distances = _impl.pairwise_cosine_distances
dbscan_from_distances = _impl.dbscan_from_distances

__all__ = ["BACKEND", "pairwise_cosine_distances", "dbscan_from_distances"]
