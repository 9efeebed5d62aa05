"""File interchange: raw float vectors, weighted pairs, codebook JSON, indices.

Formats (chosen for bit-exact interchange plus human inspectability):

- ``.f64`` — raw little-endian IEEE-754 64-bit floats, no header.
- ``.f32`` — raw little-endian 32-bit floats, widened to float64 on read.
- ``.txt`` — newline/whitespace-delimited decimal text; ``#`` comments.
- weighted input — two-column text (value weight) or two paired ``.f64``
  files (values and weights).
- codebook — JSON with fields {levels, expected_mse, algorithm, d, s, m,
  seed}; ``m`` and ``seed`` are null when not applicable.
- indices — raw little-endian unsigned 32-bit integers (``.u32``).
"""

from __future__ import annotations

import json
import os

import numpy as np

from .core import Codebook

_VECTOR_DTYPES = {".f64": "<f8", ".f32": "<f4"}


def _ext(path) -> str:
    return os.path.splitext(str(path))[1].lower()


def read_vector(path) -> np.ndarray:
    """Read a single vector; the extension selects the format."""
    ext = _ext(path)
    if ext in _VECTOR_DTYPES:
        return np.fromfile(path, dtype=_VECTOR_DTYPES[ext]).astype(np.float64)
    if ext == ".txt":
        arr = np.loadtxt(path, dtype=np.float64)
        if arr.ndim > 1:
            raise ValueError(
                f"{path}: expected one value per line; "
                "multi-column files are weighted input (read_weighted)"
            )
        return np.atleast_1d(arr)
    raise ValueError(f"unsupported vector file extension {ext!r} (use .f64/.f32/.txt)")


def write_vector(path, values) -> None:
    """Write a vector; the extension selects the format."""
    values = np.ascontiguousarray(values, dtype=np.float64).reshape(-1)
    ext = _ext(path)
    if ext in _VECTOR_DTYPES:
        values.astype(_VECTOR_DTYPES[ext]).tofile(path)
    elif ext == ".txt":
        np.savetxt(path, values, fmt="%.17g")
    else:
        raise ValueError(f"unsupported vector file extension {ext!r} (use .f64/.f32/.txt)")


def read_weighted(path, weights_path=None) -> tuple[np.ndarray, np.ndarray]:
    """Read (values, weights): one two-column text file, or two vector files."""
    if weights_path is not None:
        return read_vector(path), read_vector(weights_path)
    arr = np.loadtxt(path, dtype=np.float64, ndmin=2)
    if arr.shape[1] != 2:
        raise ValueError(f"{path}: weighted text input needs exactly 2 columns (value weight)")
    return np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1])


def write_weighted(path, values, weights) -> None:
    """Write a two-column (value weight) text file."""
    arr = np.column_stack(
        [
            np.ascontiguousarray(values, dtype=np.float64).reshape(-1),
            np.ascontiguousarray(weights, dtype=np.float64).reshape(-1),
        ]
    )
    np.savetxt(path, arr, fmt="%.17g")


def write_codebook(
    path,
    codebook: Codebook,
    *,
    algorithm: str,
    d: int,
    s: int,
    m: int | None = None,
    seed: int | None = None,
) -> None:
    """Write a codebook plus how it was produced as pretty-printed JSON."""
    doc = {
        "levels": [float(x) for x in codebook.levels],
        "expected_mse": float(codebook.expected_mse),
        "algorithm": str(algorithm),
        "d": int(d),
        "s": int(s),
        "m": None if m is None else int(m),
        "seed": None if seed is None else int(seed),
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def read_codebook(path) -> tuple[Codebook, dict]:
    """Read a codebook JSON; returns (Codebook, full metadata dict)."""
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    codebook = Codebook(
        levels=np.asarray(doc["levels"], dtype=np.float64),
        expected_mse=float(doc["expected_mse"]),
    )
    return codebook, doc


def write_indices(path, indices) -> None:
    """Write quantized level indices as raw little-endian uint32."""
    idx = np.ascontiguousarray(indices, dtype=np.int64).reshape(-1)
    if idx.size and (idx.min() < 0 or idx.max() > 0xFFFFFFFF):
        raise ValueError("indices out of uint32 range")
    idx.astype("<u4").tofile(path)


def read_indices(path) -> np.ndarray:
    """Read raw little-endian uint32 indices back as int64."""
    return np.fromfile(path, dtype="<u4").astype(np.int64)
