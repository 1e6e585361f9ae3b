"""Kernel backend selection.

The compiled extension is used when it imported cleanly; otherwise the pure
Python kernels take over. Set MATCHKIT_PURE=1 to force the fallback (useful
for parity debugging and benchmarking).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

from . import _purecore

if os.environ.get("MATCHKIT_PURE"):
    _impl = _purecore
    BACKEND = "pure"
else:
    try:
        from . import _fastcore as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _purecore
        BACKEND = "pure"

ranks_from_lists = _impl.ranks_from_lists
da_single = _impl.da_single
fill_table = _impl.fill_table
invert_rows = _impl.invert_rows
digits_matrix = _impl.digits_matrix
scan_unilateral = _impl.scan_unilateral
scan_pairs_group = _impl.scan_pairs_group
stable_perms = _impl.stable_perms
blocking_pairs = _impl.blocking_pairs


def get_backend(name: str):
    """Fetch a backend module by name ("pure" or "compiled"); for parity
    tests and benchmarks. Raises ImportError if the compiled core is absent."""
    if name == "pure":
        return _purecore
    if name == "compiled":
        from . import _fastcore

        return _fastcore
    raise ValueError(f"unknown backend {name!r}")


def pmap(fn, items: list, jobs: int = 1) -> list:
    """Order-preserving map, forked across processes when jobs > 1.

    Results are identical to jobs=1 by construction; only wall time changes.
    """
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))
