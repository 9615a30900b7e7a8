"""Offline producers of the disambiguation engine's input files."""

from .backends import (
    ImageReadError,
    StubCaptionBackend,
    StubFeatureBackend,
    StubObjectBackend,
    caption_backend,
    feature_backend,
    object_backend,
)
from .extract import (
    export_embeddings,
    extract_image_features,
    extract_pred_descriptions,
    extract_pred_objects,
)
from .manifest import ExtractionManifest, ManifestError, load_manifest
from .vsdf import write_vsdf

__version__ = "0.1.0"
