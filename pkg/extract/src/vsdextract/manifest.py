"""Extraction manifest: which images to process and with what defaults.

JSON schema:

    {"images": {"<image_id>": "<path>"},
     "feature_backend": "stub" | "vgg16",          (optional)
     "object_backend": "stub" | "vgg16",           (optional)
     "caption_backend": "stub" | "module:callable",(optional)
     "pred_threshold": 0.2}                        (optional, informational)

Relative image paths resolve against the manifest's directory. Image ids
must be unique (enforced by JSON object keys) and every path must exist.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field


class ManifestError(Exception):
    pass


@dataclass
class ExtractionManifest:
    images: dict[str, str]
    feature_backend: str = "stub"
    object_backend: str = "stub"
    caption_backend: str = "stub"
    pred_threshold: float = 0.2
    extras: dict = field(default_factory=dict)


def load_manifest(path) -> ExtractionManifest:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ManifestError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(data, dict) or not isinstance(data.get("images"), dict):
        raise ManifestError(f"{path}: manifest needs an 'images' object")
    base = os.path.dirname(os.path.abspath(path))
    images: dict[str, str] = {}
    for image_id, rel in data["images"].items():
        if not isinstance(rel, str):
            raise ManifestError(f"{path}: image '{image_id}': path must be a string")
        resolved = rel if os.path.isabs(rel) else os.path.join(base, rel)
        if not os.path.exists(resolved):
            raise ManifestError(f"{path}: image '{image_id}': no such file {resolved}")
        images[image_id] = resolved
    threshold = data.get("pred_threshold", 0.2)
    if not isinstance(threshold, (int, float)) or not 0.0 <= threshold <= 1.0:
        raise ManifestError(f"{path}: pred_threshold must lie in [0, 1]")
    known = {"images", "feature_backend", "object_backend", "caption_backend",
             "pred_threshold"}
    return ExtractionManifest(
        images=images,
        feature_backend=data.get("feature_backend", "stub"),
        object_backend=data.get("object_backend", "stub"),
        caption_backend=data.get("caption_backend", "stub"),
        pred_threshold=float(threshold),
        extras={k: v for k, v in data.items() if k not in known},
    )
