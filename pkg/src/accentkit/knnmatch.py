"""Frame-level kNN feature matching and the FMAT matrix container.

Conversion replaces every source frame with the arithmetic mean of the k
pool frames most cosine-similar to it. Ties are broken toward the lower
pool row index; zero-norm frames have similarity -inf to everything, so a
zero source frame copies the mean of the k lowest-index pool rows.
Accumulation is float64, storage float32. The search is exact.

FMAT layout: bytes 0-3 ASCII "FMT1", bytes 4-7 u32 LE row count, bytes
8-11 u32 LE column count, then rows*cols IEEE-754 binary32 LE values in
row-major order. No padding, no trailer.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "build_pool",
    "fmat_bytes",
    "knn_convert",
    "nearest_indices",
    "parse_fmat",
    "read_fmat",
    "write_fmat",
]

_MAGIC = b"FMT1"
_HEADER = struct.Struct("<4sII")


def _as_feature_matrix(m: np.ndarray, what: str) -> np.ndarray:
    a = np.asarray(m, dtype=np.float32)
    if a.ndim != 2:
        raise ValueError(f"{what} must be 2-D, got shape {a.shape}")
    if a.shape[1] == 0 and a.shape[0] != 0:
        raise ValueError(f"{what} with rows must have at least one column")
    if not np.isfinite(a).all():
        raise ValueError(f"{what} values must be finite")
    return a


def fmat_bytes(matrix: np.ndarray) -> bytes:
    """Serialize a feature matrix to FMAT bytes."""
    a = _as_feature_matrix(matrix, "matrix")
    header = _HEADER.pack(_MAGIC, a.shape[0], a.shape[1])
    return header + np.ascontiguousarray(a, dtype="<f4").tobytes()


def parse_fmat(data: bytes) -> np.ndarray:
    """Parse FMAT bytes into a float32 matrix, validating the exact layout."""
    if len(data) < _HEADER.size:
        raise ValueError(f"FMAT header needs {_HEADER.size} bytes, got {len(data)}")
    magic, rows, cols = _HEADER.unpack_from(data)
    if magic != _MAGIC:
        raise ValueError(f"bad FMAT magic {magic!r}")
    expected = _HEADER.size + rows * cols * 4
    if len(data) != expected:
        raise ValueError(f"FMAT payload: expected {expected} bytes, got {len(data)}")
    values = np.frombuffer(data, dtype="<f4", offset=_HEADER.size)
    if not np.isfinite(values).all():
        raise ValueError("FMAT payload contains non-finite values")
    return values.reshape(rows, cols).copy()


def write_fmat(matrix: np.ndarray, path: str | Path) -> None:
    Path(path).write_bytes(fmat_bytes(matrix))


def read_fmat(path: str | Path) -> np.ndarray:
    return parse_fmat(Path(path).read_bytes())


def build_pool(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Concatenate feature matrices row-wise into one matching pool."""
    if not matrices:
        return np.zeros((0, 0), dtype=np.float32)
    mats = []
    width = None
    for i, m in enumerate(matrices):
        a = _as_feature_matrix(m, f"matrix {i}")
        if width is None:
            width = a.shape[1]
        elif a.shape[1] != width:
            raise ValueError(f"matrix {i} has {a.shape[1]} columns, expected {width}")
        mats.append(a)
    return np.concatenate(mats, axis=0)


def _similarities(source64: np.ndarray, pool64: np.ndarray,
                  src_norms: np.ndarray, pool_norms: np.ndarray) -> np.ndarray:
    denom = np.outer(np.where(src_norms == 0.0, 1.0, src_norms),
                     np.where(pool_norms == 0.0, 1.0, pool_norms))
    sims = (source64 @ pool64.T) / denom
    sims[src_norms == 0.0, :] = -np.inf
    sims[:, pool_norms == 0.0] = -np.inf
    return sims


def nearest_indices(
    source: np.ndarray, pool: np.ndarray, k: int, block_rows: int | None = None
) -> np.ndarray:
    """Indices of the k most cosine-similar pool rows per source frame.

    Returned per frame in descending-similarity order; ties keep the lower
    pool row index. block_rows only chunks source frames for memory; the
    per-frame result is unchanged.
    """
    src = _as_feature_matrix(source, "source")
    p = _as_feature_matrix(pool, "pool")
    if p.shape[0] == 0:
        raise ValueError("pool is empty")
    if src.shape[0] and src.shape[1] != p.shape[1]:
        raise ValueError(f"dim mismatch: source has {src.shape[1]} columns, pool {p.shape[1]}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > p.shape[0]:
        raise ValueError(f"k={k} exceeds pool size {p.shape[0]}")

    pool64 = p.astype(np.float64)
    pool_norms = np.sqrt((pool64 * pool64).sum(axis=1))
    n = src.shape[0]
    if block_rows is None or block_rows <= 0:
        block_rows = n or 1
    out = np.empty((n, k), dtype=np.int64)
    for start in range(0, n, block_rows):
        chunk = src[start : start + block_rows].astype(np.float64)
        norms = np.sqrt((chunk * chunk).sum(axis=1))
        sims = _similarities(chunk, pool64, norms, pool_norms)
        # Stable argsort of -sims: equal similarities keep lower index first.
        out[start : start + block_rows] = np.argsort(-sims, axis=1, kind="stable")[:, :k]
    return out


def knn_convert(
    source: np.ndarray, pool: np.ndarray, k: int = 4, block_rows: int | None = None
) -> np.ndarray:
    """Replace each source frame with the mean of its k nearest pool frames."""
    src = _as_feature_matrix(source, "source")
    p = _as_feature_matrix(pool, "pool")
    idx = nearest_indices(src, p, k, block_rows=block_rows)
    pool64 = p.astype(np.float64)
    out = np.empty((src.shape[0], p.shape[1]), dtype=np.float32)
    for t in range(src.shape[0]):
        out[t] = (pool64[idx[t]].sum(axis=0) / k).astype(np.float32)
    return out
