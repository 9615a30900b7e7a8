"""Writer for the VSDF dense-vector container consumed by the engine.

Layout, little-endian: magic `VSDF`, u32 version = 1, u32 dim, u32 count,
then per record [key_len u16][key UTF-8][dim x f32]. Keys are written in
lexicographic order so identical content always yields identical bytes.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"VSDF"
VERSION = 1


def write_vsdf(path, dim: int, entries: dict) -> None:
    if dim < 1:
        raise ValueError(f"dim must be positive, got {dim}")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<III", VERSION, dim, len(entries)))
        for key in sorted(entries):
            vec = np.asarray(entries[key], dtype="<f4")
            if vec.shape != (dim,):
                raise ValueError(f"key '{key}': expected {dim} values, got {vec.shape}")
            if not np.all(np.isfinite(vec)):
                raise ValueError(f"key '{key}': non-finite value")
            raw = key.encode("utf-8")
            f.write(struct.pack("<H", len(raw)))
            f.write(raw)
            f.write(vec.tobytes())
