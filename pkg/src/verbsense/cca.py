"""Regularized linear canonical correlation analysis between two views.

Fitting whitens the ridge-regularized within-view covariances and takes the
singular value decomposition of the whitened cross-covariance:

    Cxx = cov(X) + ridge I        Cyy = cov(Y) + ridge I
    T   = Cxx^{-1/2} Cxy Cyy^{-1/2} = U S V'
    proj_t = Cxx^{-1/2} U[:, :n]  proj_c = Cyy^{-1/2} V[:, :n]

The singular values S are the canonical correlations (clamped to [0, 1]);
projection columns have unit variance under the regularized covariance and
are mutually uncorrelated. Projections are applied to centered inputs.

Fusion of a text-view vector with a visual-view vector is either a
lambda-weighted interpolation (in a shared space) or a concatenation of the
two vectors, each length-normalized first so neither side dominates.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    FormatError,
    InsufficientDataError,
    NonFiniteError,
    WhiteningError,
    ZeroNormError,
)
from .vectors import as_vector, check_same_dim

MODEL_MAGIC = b"VSDM"
MODEL_VERSION = 1

VIEWS = ("text", "visual")


@dataclass
class CcaModel:
    n: int
    mean_t: np.ndarray
    mean_c: np.ndarray
    proj_t: np.ndarray  # (dim_t, n)
    proj_c: np.ndarray  # (dim_c, n)
    correlations: np.ndarray  # (n,), descending, in [0, 1]
    ridge: float
    seed: int = 0

    @property
    def dim_t(self) -> int:
        return self.proj_t.shape[0]

    @property
    def dim_c(self) -> int:
        return self.proj_c.shape[0]


def _inv_sqrt(cov: np.ndarray, what: str) -> np.ndarray:
    """Inverse matrix square root via eigendecomposition."""
    evals, evecs = np.linalg.eigh(cov)
    if np.any(evals <= 0):
        raise WhiteningError(
            f"{what} covariance is not positive definite even after ridge "
            f"(min eigenvalue {evals.min():.3e})"
        )
    return (evecs / np.sqrt(evals)) @ evecs.T


def fit_cca(pairs, n: int, ridge: float = 1e-3, seed: int = 0) -> CcaModel:
    """Fit CCA on (text-view, visual-view) vector pairs.

    Requires at least n + 1 pairs; ridge must be positive. The fit is
    deterministic for a given input (the seed is only recorded, for
    provenance of the upstream data split).
    """
    if n < 1:
        raise InsufficientDataError(f"latent dim must be positive, got {n}")
    if ridge <= 0:
        raise InsufficientDataError(f"ridge must be positive, got {ridge}")
    pairs = list(pairs)
    if len(pairs) < n + 1:
        raise InsufficientDataError(
            f"need at least {n + 1} pairs to fit {n} components, got {len(pairs)}"
        )
    X = np.vstack([as_vector(t) for t, _ in pairs])
    Y = np.vstack([as_vector(c) for _, c in pairs])
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
        raise NonFiniteError("non-finite value in CCA training pairs")
    dim_t, dim_c = X.shape[1], Y.shape[1]
    if n > min(dim_t, dim_c):
        raise InsufficientDataError(
            f"latent dim {n} exceeds min view dim {min(dim_t, dim_c)}"
        )

    mean_t = X.mean(axis=0)
    mean_c = Y.mean(axis=0)
    Xc = X - mean_t
    Yc = Y - mean_c
    denom = len(pairs) - 1
    Cxx = (Xc.T @ Xc) / denom + ridge * np.eye(dim_t)
    Cyy = (Yc.T @ Yc) / denom + ridge * np.eye(dim_c)
    Cxy = (Xc.T @ Yc) / denom

    isqrt_x = _inv_sqrt(Cxx, "text view")
    isqrt_y = _inv_sqrt(Cyy, "visual view")
    U, S, Vt = np.linalg.svd(isqrt_x @ Cxy @ isqrt_y, full_matrices=False)

    # Canonical sign: largest-magnitude entry of each text direction positive.
    for k in range(min(n, U.shape[1])):
        j = np.argmax(np.abs(U[:, k]))
        if U[j, k] < 0:
            U[:, k] = -U[:, k]
            Vt[k, :] = -Vt[k, :]

    return CcaModel(
        n=n,
        mean_t=mean_t,
        mean_c=mean_c,
        proj_t=isqrt_x @ U[:, :n],
        proj_c=isqrt_y @ Vt[:n].T,
        correlations=np.clip(S[:n], 0.0, 1.0),
        ridge=ridge,
        seed=seed,
    )


def project(model: CcaModel, v, view: str) -> np.ndarray:
    """Project a single vector of the given view into the latent space."""
    if view not in VIEWS:
        raise ValueError(f"view must be one of {VIEWS}, got {view!r}")
    v = as_vector(v)
    mean, proj = (
        (model.mean_t, model.proj_t) if view == "text" else (model.mean_c, model.proj_c)
    )
    if v.shape[0] != proj.shape[0]:
        raise DimensionMismatchError(
            f"{view} view expects dim {proj.shape[0]}, got {v.shape[0]}"
        )
    return (v - mean) @ proj


def fuse_interpolate(a, b, lambda_t: float, lambda_c: float) -> np.ndarray:
    """Weighted sum lambda_t * a + lambda_c * b of two same-dim vectors."""
    a = as_vector(a)
    b = as_vector(b)
    check_same_dim(a, b, "fusion inputs")
    if not (np.isfinite(lambda_t) and np.isfinite(lambda_c)):
        raise NonFiniteError("lambda weights must be finite")
    return lambda_t * a + lambda_c * b


def fuse_concat(a, b) -> np.ndarray:
    """Concatenate two vectors, length-normalizing each side first.

    Normalization keeps a high-dimensional side from dominating the dot
    product; it also makes the raw dot product of two fused vectors equal
    the sum of the per-side cosines.
    """
    a = as_vector(a)
    b = as_vector(b)
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroNormError("cannot length-normalize a zero vector for concatenation")
    return np.concatenate([a / norm_a, b / norm_b])


def split_keys(keys, seed: int, fractions=(0.8, 0.1, 0.1)):
    """Deterministic train/dev/test split of a key set."""
    if abs(sum(fractions) - 1.0) > 1e-9 or len(fractions) != 3:
        raise ValueError("fractions must be three values summing to 1")
    ordered = sorted(keys)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(ordered))
    shuffled = [ordered[i] for i in perm]
    n_train = int(len(ordered) * fractions[0])
    n_dev = int(len(ordered) * fractions[1])
    return (
        shuffled[:n_train],
        shuffled[n_train : n_train + n_dev],
        shuffled[n_train + n_dev :],
    )


def save_cca_model(model: CcaModel, path) -> None:
    """Persist a fitted model (little-endian binary, float64 arrays)."""
    with open(path, "wb") as f:
        f.write(MODEL_MAGIC)
        f.write(
            struct.pack(
                "<IIIIdq",
                MODEL_VERSION,
                model.n,
                model.dim_t,
                model.dim_c,
                model.ridge,
                model.seed,
            )
        )
        for arr in (model.mean_t, model.mean_c, model.proj_t, model.proj_c, model.correlations):
            f.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_cca_model(path) -> CcaModel:
    with open(path, "rb") as f:
        data = f.read()
    if data[:4] != MODEL_MAGIC:
        raise FormatError(f"{path}: bad magic {data[:4]!r}, expected {MODEL_MAGIC!r}")
    head = struct.Struct("<IIIIdq")
    if len(data) < 4 + head.size:
        raise FormatError(f"{path}: truncated header")
    version, n, dim_t, dim_c, ridge, seed = head.unpack_from(data, 4)
    if version != MODEL_VERSION:
        raise FormatError(f"{path}: unsupported model version {version}")
    counts = (dim_t, dim_c, dim_t * n, dim_c * n, n)
    expected = 4 + head.size + 8 * sum(counts)
    if len(data) != expected:
        raise FormatError(f"{path}: expected {expected} bytes, found {len(data)}")
    offset = 4 + head.size
    arrays = []
    for count in counts:
        arrays.append(np.frombuffer(data, dtype="<f8", count=count, offset=offset).copy())
        offset += 8 * count
    mean_t, mean_c, proj_t, proj_c, correlations = arrays
    return CcaModel(
        n=n,
        mean_t=mean_t,
        mean_c=mean_c,
        proj_t=proj_t.reshape(dim_t, n),
        proj_c=proj_c.reshape(dim_c, n),
        correlations=correlations,
        ridge=ridge,
        seed=seed,
    )
