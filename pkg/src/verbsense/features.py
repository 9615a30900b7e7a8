"""Bit-exact storage of dense image/sense feature vectors (VSDF files).

VSDF layout, all little-endian:

    magic   4 bytes  b"VSDF"
    version u32      1
    dim     u32
    count   u32
    then `count` records: [key_len u16][key UTF-8 bytes][dim x f32]

Keys are written in lexicographic order so the same store always produces
byte-identical files. Vectors are held as float32 in memory, matching the
on-disk precision, which makes write -> read the identity.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    FormatError,
    InsufficientDataError,
    MissingKeyError,
    NonFiniteError,
)

MAGIC = b"VSDF"
VERSION = 1

_HEADER = struct.Struct("<III")
_KEYLEN = struct.Struct("<H")


@dataclass
class FeatureStore:
    dim: int
    entries: dict[str, np.ndarray]

    @classmethod
    def from_entries(cls, dim: int, entries) -> "FeatureStore":
        """Build a store, casting values to float32 and validating them."""
        if dim < 1:
            raise DimensionMismatchError(f"store dim must be positive, got {dim}")
        out: dict[str, np.ndarray] = {}
        for key, values in dict(entries).items():
            v = np.asarray(values, dtype=np.float32)
            if v.ndim != 1 or v.shape[0] != dim:
                raise DimensionMismatchError(
                    f"key '{key}': expected {dim} values, got shape {v.shape}"
                )
            if not np.all(np.isfinite(v)):
                raise NonFiniteError(f"key '{key}': non-finite feature value")
            out[key] = v
        return cls(dim=dim, entries=out)

    def vector(self, key: str) -> np.ndarray:
        try:
            return self.entries[key]
        except KeyError:
            raise MissingKeyError(f"key '{key}' not in feature store") from None

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def write_feature_file(store: FeatureStore, path) -> None:
    """Write a store in canonical VSDF layout (keys sorted, deterministic)."""
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(_HEADER.pack(VERSION, store.dim, len(store.entries)))
        for key in sorted(store.entries):
            raw = key.encode("utf-8")
            if len(raw) > 0xFFFF:
                raise FormatError(f"key too long for VSDF ({len(raw)} bytes)")
            f.write(_KEYLEN.pack(len(raw)))
            f.write(raw)
            f.write(store.entries[key].astype("<f4", copy=False).tobytes())


def read_feature_file(path) -> FeatureStore:
    """Read a VSDF file back into a FeatureStore (byte-exact floats)."""
    with open(path, "rb") as f:
        data = f.read()
    if data[:4] != MAGIC:
        raise FormatError(f"{path}: bad magic {data[:4]!r}, expected {MAGIC!r}")
    if len(data) < 4 + _HEADER.size:
        raise FormatError(f"{path}: truncated header")
    version, dim, count = _HEADER.unpack_from(data, 4)
    if version != VERSION:
        raise FormatError(f"{path}: unsupported VSDF version {version}")
    if dim < 1:
        raise FormatError(f"{path}: invalid dim {dim}")
    entries: dict[str, np.ndarray] = {}
    offset = 4 + _HEADER.size
    vec_bytes = 4 * dim
    for i in range(count):
        if offset + _KEYLEN.size > len(data):
            raise FormatError(f"{path}: truncated record {i}")
        (key_len,) = _KEYLEN.unpack_from(data, offset)
        offset += _KEYLEN.size
        if offset + key_len + vec_bytes > len(data):
            raise FormatError(f"{path}: truncated record {i}")
        try:
            key = data[offset : offset + key_len].decode("utf-8")
        except UnicodeDecodeError as e:
            raise FormatError(f"{path}: record {i}: key is not valid UTF-8") from e
        offset += key_len
        vec = np.frombuffer(data[offset : offset + vec_bytes], dtype="<f4").copy()
        offset += vec_bytes
        if key in entries:
            raise FormatError(f"{path}: record {i}: duplicate key '{key}'")
        if not np.all(np.isfinite(vec)):
            raise FormatError(f"{path}: record {i}: non-finite feature value")
        entries[key] = vec
    if offset != len(data):
        raise FormatError(f"{path}: {len(data) - offset} trailing bytes after last record")
    return FeatureStore(dim=dim, entries=entries)


def mean_pool(vectors) -> np.ndarray:
    """Elementwise mean of a non-empty list of same-dim vectors (float64)."""
    vectors = list(vectors)
    if not vectors:
        raise InsufficientDataError("mean_pool of an empty list")
    dims = {np.asarray(v).shape for v in vectors}
    if len(dims) != 1:
        raise DimensionMismatchError(f"mean_pool over mixed dims: {sorted(dims)}")
    return np.mean(np.vstack([np.asarray(v, dtype=np.float64) for v in vectors]), axis=0)


def load_manifest(path) -> dict[str, list[str]]:
    """Read a sense-image manifest: {"<sense_id>": ["<image_key>", ...]}."""
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise FormatError(f"{path}: manifest root must be an object")
    for sense_id, keys in data.items():
        if not isinstance(keys, list) or any(not isinstance(k, str) for k in keys):
            raise FormatError(f"{path}: sense '{sense_id}': value must be an array of keys")
    return data
