"""Model backends for feature extraction, object prediction, captioning.

Every backend family has a deterministic `stub` implementation that needs
no checkpoint: it decodes the image (so corrupt files fail exactly like
they would with a real model) and derives pseudo-outputs from a hash of
the file bytes. The `vgg16` backends run a torchvision VGG-16: pass
weights="IMAGENET1K_V1" to use the published checkpoint (downloaded by
torchvision), a local .pth path, or None for a randomly initialized
network (shape-correct, useful offline). Captioners are pluggable through
a "module:callable" spec; bundle your own image-description model that
way.
"""

from __future__ import annotations

import hashlib
import importlib

import numpy as np
from PIL import Image

DEFAULT_FEATURE_DIM = 4096

STUB_LABELS = (
    "person", "dog", "cat", "horse", "cow", "sheep", "bird", "bicycle",
    "motorcycle", "car", "bus", "train", "boat", "chair", "bench", "table",
    "guitar", "piano", "ball", "racket", "bottle", "cup", "book", "umbrella",
)

_STUB_NOUNS = STUB_LABELS
_STUB_VERBS = ("standing", "sitting", "walking", "playing", "holding", "riding")
_STUB_PLACES = ("street", "field", "room", "park", "beach", "kitchen")


class ImageReadError(Exception):
    """The image file is missing, truncated, or not decodable."""


def _decode_check(path) -> bytes:
    """Fully decode the image; raise ImageReadError if that fails."""
    try:
        with open(path, "rb") as f:
            raw = f.read()
        with Image.open(path) as img:
            img.convert("RGB")
        return raw
    except ImageReadError:
        raise
    except Exception as e:
        raise ImageReadError(f"{path}: {e}") from e


def _image_rng(path) -> np.random.Generator:
    digest = hashlib.blake2b(_decode_check(path), digest_size=8).digest()
    return np.random.default_rng(int.from_bytes(digest, "little"))


class StubFeatureBackend:
    """Deterministic pseudo-features derived from the image bytes."""

    name = "stub"

    def __init__(self, dim: int = DEFAULT_FEATURE_DIM):
        self.dim = dim

    def features(self, path) -> np.ndarray:
        return _image_rng(path).standard_normal(self.dim).astype(np.float32)


class StubObjectBackend:
    """Deterministic pseudo-detections: softmax scores over a fixed label set."""

    name = "stub"

    def __init__(self, labels=STUB_LABELS, top_k: int = 5):
        self.labels = tuple(labels)
        self.top_k = top_k

    def predict_objects(self, path) -> list[tuple[str, float]]:
        rng = _image_rng(path)
        logits = rng.normal(size=len(self.labels))
        scores = np.exp(logits - logits.max())
        scores /= scores.sum()
        order = np.argsort(-scores)[: self.top_k]
        return [(self.labels[i], float(scores[i])) for i in order]


class StubCaptionBackend:
    """Deterministic template captions built from the image hash."""

    name = "stub"

    def describe(self, path, k: int) -> list[str]:
        rng = _image_rng(path)
        captions = []
        for _ in range(k):
            noun = rng.choice(_STUB_NOUNS)
            verb = rng.choice(_STUB_VERBS)
            place = rng.choice(_STUB_PLACES)
            other = rng.choice(_STUB_NOUNS)
            captions.append(f"a {noun} {verb} near a {other} in the {place}")
        return captions


def _torchvision_vgg16(weights):
    import torch
    from torchvision.models import VGG16_Weights, vgg16

    if weights is None:
        model = vgg16(weights=None)
    elif isinstance(weights, str) and weights.endswith(".pth"):
        model = vgg16(weights=None)
        model.load_state_dict(torch.load(weights, map_location="cpu"))
    else:
        model = vgg16(weights=VGG16_Weights[weights])
    model.eval()
    return model


def _vgg_preprocess(path):
    import torch

    with Image.open(path) as img:
        rgb = img.convert("RGB").resize((224, 224))
    arr = np.asarray(rgb, dtype=np.float32) / 255.0
    mean = np.array([0.485, 0.456, 0.406], dtype=np.float32)
    std = np.array([0.229, 0.224, 0.225], dtype=np.float32)
    arr = (arr - mean) / std
    return torch.from_numpy(arr.transpose(2, 0, 1)).unsqueeze(0)


class Vgg16FeatureBackend:
    """Penultimate fully-connected layer (4096-d) of a VGG-16 network."""

    name = "vgg16"
    dim = 4096

    def __init__(self, weights="IMAGENET1K_V1"):
        self._model = _torchvision_vgg16(weights)

    def features(self, path) -> np.ndarray:
        import torch

        _decode_check(path)
        x = _vgg_preprocess(path)
        with torch.no_grad():
            x = self._model.features(x)
            x = self._model.avgpool(x)
            x = torch.flatten(x, 1)
            # up to and including the second ReLU of the classifier head
            x = self._model.classifier[:5](x)
        return x.squeeze(0).numpy().astype(np.float32)


class Vgg16ObjectBackend:
    """Class probabilities of the VGG-16 object classifier."""

    name = "vgg16"

    def __init__(self, weights="IMAGENET1K_V1", top_k: int = 5):
        from torchvision.models import VGG16_Weights

        self._model = _torchvision_vgg16(weights)
        self.labels = tuple(VGG16_Weights.IMAGENET1K_V1.meta["categories"])
        self.top_k = top_k

    def predict_objects(self, path) -> list[tuple[str, float]]:
        import torch

        _decode_check(path)
        with torch.no_grad():
            probs = torch.softmax(self._model(_vgg_preprocess(path)), dim=1).squeeze(0)
        order = torch.argsort(probs, descending=True)[: self.top_k]
        return [(self.labels[int(i)], float(probs[int(i)])) for i in order]


class PluginCaptionBackend:
    """Adapter for an external captioner given as 'module:callable'.

    The callable receives (image_path, k) and returns k description strings.
    """

    def __init__(self, spec: str):
        module_name, _, attr = spec.partition(":")
        if not attr:
            raise ValueError(f"caption plugin spec must be 'module:callable', got {spec!r}")
        self.name = spec
        self._fn = getattr(importlib.import_module(module_name), attr)

    def describe(self, path, k: int) -> list[str]:
        _decode_check(path)
        captions = [str(c) for c in self._fn(path, k)]
        if len(captions) != k:
            raise ValueError(f"caption plugin returned {len(captions)} captions, wanted {k}")
        return captions


def feature_backend(name: str, dim: int = DEFAULT_FEATURE_DIM, weights="IMAGENET1K_V1"):
    if name == "stub":
        return StubFeatureBackend(dim=dim)
    if name == "vgg16":
        return Vgg16FeatureBackend(weights=weights)
    raise ValueError(f"unknown feature backend {name!r}")


def object_backend(name: str, top_k: int = 5, weights="IMAGENET1K_V1"):
    if name == "stub":
        return StubObjectBackend(top_k=top_k)
    if name == "vgg16":
        return Vgg16ObjectBackend(weights=weights, top_k=top_k)
    raise ValueError(f"unknown object backend {name!r}")


def caption_backend(name: str):
    if name == "stub":
        return StubCaptionBackend()
    if ":" in name:
        return PluginCaptionBackend(name)
    raise ValueError(f"unknown caption backend {name!r} (use 'stub' or 'module:callable')")
