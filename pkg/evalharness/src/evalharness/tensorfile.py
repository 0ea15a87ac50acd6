"""Portable binary tensor container shared with the generator tooling.

Layout: little-endian uint32 rank, one little-endian uint32 per dimension,
then the row-major float32 payload.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["write_tensor", "read_tensor"]

_MAX_RANK = 8


def write_tensor(path, array) -> None:
    arr = np.asarray(array)
    if arr.ndim < 1 or arr.ndim > _MAX_RANK:
        raise ValueError(f"tensor rank must be in [1, {_MAX_RANK}], got {arr.ndim}")
    arr = np.ascontiguousarray(arr, dtype="<f4")
    header = np.asarray([arr.ndim, *arr.shape], dtype="<u4")
    with open(path, "wb") as handle:
        handle.write(header.tobytes())
        handle.write(arr.tobytes())


def read_tensor(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < 4:
        raise ValueError(f"{path}: truncated tensor header")
    rank = int(np.frombuffer(data[:4], dtype="<u4")[0])
    if not 1 <= rank <= _MAX_RANK:
        raise ValueError(f"{path}: implausible tensor rank {rank}")
    header_bytes = 4 + 4 * rank
    if len(data) < header_bytes:
        raise ValueError(f"{path}: truncated dimension list")
    dims = np.frombuffer(data[4:header_bytes], dtype="<u4").astype(np.int64)
    count = int(np.prod(dims))
    if len(data) != header_bytes + 4 * count:
        raise ValueError(f"{path}: payload size mismatch")
    payload = np.frombuffer(data, dtype="<f4", offset=header_bytes, count=count)
    return payload.reshape(dims).copy()
