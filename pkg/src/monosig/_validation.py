"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .exceptions import CapabilityError, MonosigError
from .paths import MonotonePath
from .signature import TruncatedSignature


def check_path(X) -> MonotonePath:
    """Accept a MonotonePath or an (n_segments, dim) increment array."""
    if isinstance(X, MonotonePath):
        return X
    try:
        arr = np.asarray(X, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MonosigError(f"cannot read a path from {type(X).__name__}") from exc
    return MonotonePath(arr)


def check_paths(X) -> list[MonotonePath]:
    """A single path or a sequence of paths, returned as a list."""
    if isinstance(X, MonotonePath):
        return [X]
    if isinstance(X, np.ndarray) and X.ndim == 2:
        return [check_path(X)]
    paths = [check_path(x) for x in X]
    if not paths:
        raise MonosigError("no paths given")
    dims = {p.dim for p in paths}
    if len(dims) != 1:
        raise MonosigError(f"paths have mixed dimensions {sorted(dims)}")
    return paths


def check_partition(
    k: Optional[int] = None, n: Optional[int] = None, partition: Optional[Sequence[int]] = None
) -> tuple[int, ...]:
    """Resolve either an explicit partition or the uniform one ``(n,) * k``."""
    if partition is not None:
        if isinstance(partition, str):
            partition = [int(p) for p in partition.split(",") if p.strip()]
        out = tuple(int(p) for p in partition)
        if not out or any(p < 0 for p in out) or sum(out) == 0:
            raise MonosigError(f"invalid partition {partition!r}")
        if k is not None and n is not None and sum(out) != k * n:
            raise MonosigError("partition total disagrees with k * n")
        return out
    if k is None or n is None:
        raise MonosigError("give either a partition or both k and n")
    if int(k) < 1 or int(n) < 1:
        raise MonosigError("k and n must be positive")
    return (int(n),) * int(k)


def check_signature(X, depth: int) -> TruncatedSignature:
    if isinstance(X, TruncatedSignature):
        if X.depth < depth:
            raise CapabilityError(f"signature depth {X.depth} is below required {depth}")
        return X
    if isinstance(X, dict):
        return check_signature(TruncatedSignature.from_dict(X), depth)
    raise MonosigError(f"expected a TruncatedSignature, got {type(X).__name__}")
