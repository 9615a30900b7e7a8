"""Per-verb multinomial logistic-regression sense classifiers.

Training minimizes L2-regularized mean cross-entropy with full-batch
gradient descent at a fixed learning rate; the bias is not regularized.
Everything is deterministic given the seed.
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
)
from .imagerep import ImageRecord
from .inventory import SenseInventory

LR_MAGIC = b"VSLR"
LR_VERSION = 1

DEFAULT_L2 = 1e-3
DEFAULT_EPOCHS = 500
DEFAULT_LR = 0.1
MIN_IMAGES = 20
MIN_SENSES = 2


@dataclass
class LrModel:
    verb: str
    classes: tuple[str, ...]
    weights: np.ndarray  # (feature_dim, n_classes)
    bias: np.ndarray  # (n_classes,)
    l2: float
    seed: int


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def loss_and_gradient(weights, bias, X, y, l2):
    """Mean cross-entropy + (l2/2)||W||^2 and its analytic gradient."""
    n = X.shape[0]
    probs = softmax(X @ weights + bias)
    data_loss = -np.mean(np.log(probs[np.arange(n), y]))
    loss = data_loss + 0.5 * l2 * np.sum(weights**2)
    delta = probs
    delta[np.arange(n), y] -= 1.0
    grad_w = X.T @ delta / n + l2 * weights
    grad_b = delta.mean(axis=0)
    return loss, grad_w, grad_b


def select_supervised_verbs(
    dataset: list[ImageRecord],
    inv: SenseInventory,
    min_images: int = MIN_IMAGES,
    min_senses: int = MIN_SENSES,
) -> list[str]:
    """Verbs with enough annotated images and at least two observed senses."""
    images: dict[str, int] = {}
    observed: dict[str, set[str]] = {}
    for rec in dataset:
        images[rec.verb] = images.get(rec.verb, 0) + 1
        observed.setdefault(rec.verb, set()).add(rec.gold_sense_id)
    return sorted(
        v
        for v in images
        if images[v] >= min_images and len(observed[v]) >= min_senses and v in inv
    )


def train_lr(
    examples,
    l2: float = DEFAULT_L2,
    epochs: int = DEFAULT_EPOCHS,
    lr: float = DEFAULT_LR,
    seed: int = 0,
    verb: str = "",
    classes: tuple[str, ...] | None = None,
) -> LrModel:
    """Fit a multinomial logistic-regression model on (vector, class) pairs.

    `classes` names the class indices (sense ids); when omitted, classes
    are the stringified indices observed in the data.
    """
    examples = list(examples)
    if not examples:
        raise InsufficientDataError("no training examples")
    X = np.vstack([np.asarray(x, dtype=np.float64) for x, _ in examples])
    y = np.array([int(c) for _, c in examples], dtype=np.intp)
    if not np.all(np.isfinite(X)):
        raise NonFiniteError("non-finite feature value in training data")
    n_classes = len(classes) if classes is not None else int(y.max()) + 1
    if np.any(y < 0) or np.any(y >= n_classes):
        raise InsufficientDataError("class index outside the declared class list")
    if len(np.unique(y)) < 2:
        raise InsufficientDataError("training data contains a single class")
    if n_classes < 2:
        raise InsufficientDataError("need at least 2 classes")

    rng = np.random.default_rng(seed)
    weights = rng.normal(0.0, 0.01, size=(X.shape[1], n_classes))
    bias = np.zeros(n_classes)
    for _ in range(epochs):
        _, grad_w, grad_b = loss_and_gradient(weights, bias, X, y, l2)
        weights -= lr * grad_w
        bias -= lr * grad_b

    if classes is None:
        classes = tuple(str(i) for i in range(n_classes))
    return LrModel(
        verb=verb, classes=tuple(classes), weights=weights, bias=bias, l2=l2, seed=seed
    )


def predict_lr(model: LrModel, x) -> tuple[str, np.ndarray]:
    """Predicted class (ties toward the lowest index) and its probabilities."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.weights.shape[0],):
        raise DimensionMismatchError(
            f"expected feature dim {model.weights.shape[0]}, got {x.shape}"
        )
    probs = softmax(x @ model.weights + model.bias)
    return model.classes[int(np.argmax(probs))], probs


def split_train_test(records, ratio: float = 0.8, seed: int = 0):
    """Per-verb split, stratified by gold sense, deterministic given seed.

    Train counts per sense are the rounded ratio shares, adjusted so the
    verb's train total is round(ratio * n) clipped to [1, n - 1]; every
    sense with at least two images keeps at least one image in train.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must lie strictly between 0 and 1, got {ratio}")
    records = list(records)
    by_verb: dict[str, list[ImageRecord]] = {}
    for rec in records:
        by_verb.setdefault(rec.verb, []).append(rec)
    rng = np.random.default_rng(seed)
    train: list[ImageRecord] = []
    test: list[ImageRecord] = []
    for verb in sorted(by_verb):
        recs = by_verb[verb]
        n = len(recs)
        if n < 2:
            raise InsufficientDataError(f"verb '{verb}' has a single image; cannot split")
        target = min(max(int(round(ratio * n)), 1), n - 1)
        groups: dict[str, list[ImageRecord]] = {}
        for rec in recs:
            groups.setdefault(rec.gold_sense_id, []).append(rec)
        sense_ids = sorted(groups)
        lower = {s: (1 if len(groups[s]) >= 2 else 0) for s in sense_ids}
        takes = {
            s: min(max(int(round(ratio * len(groups[s]))), lower[s]), len(groups[s]))
            for s in sense_ids
        }
        # Nudge per-sense takes until the verb total matches the target.
        total = sum(takes.values())
        i = 0
        while total != target:
            s = sense_ids[i % len(sense_ids)]
            if total < target and takes[s] < len(groups[s]):
                takes[s] += 1
                total += 1
            elif total > target and takes[s] > lower[s]:
                takes[s] -= 1
                total -= 1
            i += 1
            if i > 10 * len(sense_ids) + 10:
                break  # bounds make the target infeasible; keep the closest split
        for s in sense_ids:
            group = groups[s]
            perm = rng.permutation(len(group))
            for j, idx in enumerate(perm):
                (train if j < takes[s] else test).append(group[idx])
    return train, test


def save_lr_model(model: LrModel, path) -> None:
    verb_raw = model.verb.encode("utf-8")
    with open(path, "wb") as f:
        f.write(LR_MAGIC)
        f.write(struct.pack("<I", LR_VERSION))
        f.write(struct.pack("<H", len(verb_raw)))
        f.write(verb_raw)
        f.write(struct.pack("<I", len(model.classes)))
        for c in model.classes:
            raw = c.encode("utf-8")
            f.write(struct.pack("<H", len(raw)))
            f.write(raw)
        f.write(struct.pack("<Idq", model.weights.shape[0], model.l2, model.seed))
        f.write(np.ascontiguousarray(model.weights, dtype="<f8").tobytes())
        f.write(np.ascontiguousarray(model.bias, dtype="<f8").tobytes())


def load_lr_model(path) -> LrModel:
    with open(path, "rb") as f:
        data = f.read()
    if data[:4] != LR_MAGIC:
        raise FormatError(f"{path}: bad magic {data[:4]!r}, expected {LR_MAGIC!r}")
    offset = 4
    (version,) = struct.unpack_from("<I", data, offset)
    offset += 4
    if version != LR_VERSION:
        raise FormatError(f"{path}: unsupported model version {version}")
    (verb_len,) = struct.unpack_from("<H", data, offset)
    offset += 2
    verb = data[offset : offset + verb_len].decode("utf-8")
    offset += verb_len
    (n_classes,) = struct.unpack_from("<I", data, offset)
    offset += 4
    classes = []
    for _ in range(n_classes):
        (clen,) = struct.unpack_from("<H", data, offset)
        offset += 2
        classes.append(data[offset : offset + clen].decode("utf-8"))
        offset += clen
    dim, l2, seed = struct.unpack_from("<Idq", data, offset)
    offset += struct.calcsize("<Idq")
    expected = offset + 8 * (dim * n_classes + n_classes)
    if len(data) != expected:
        raise FormatError(f"{path}: expected {expected} bytes, found {len(data)}")
    weights = np.frombuffer(data, dtype="<f8", count=dim * n_classes, offset=offset).copy()
    offset += 8 * dim * n_classes
    bias = np.frombuffer(data, dtype="<f8", count=n_classes, offset=offset).copy()
    return LrModel(
        verb=verb,
        classes=tuple(classes),
        weights=weights.reshape(dim, n_classes),
        bias=bias,
        l2=l2,
        seed=seed,
    )
