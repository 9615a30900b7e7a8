"""Per-sense representations: textual, visual, and fused.

The textual representation averages the embedding of every content word in
the sense definition and all its example sentences, as one pooled token
list (definition and examples weigh equally, duplicates kept). The visual
representation mean-pools the stored feature vectors of the sense's
prototype images, listed in a sense-image manifest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingTable, embed_text, tokenize_content
from .errors import MissingKeyError
from .features import FeatureStore, mean_pool
from .inventory import SenseEntry


@dataclass
class SenseRepSet:
    """Representations built for one sense; fused is set by a fusion step."""

    sense_id: str
    text: np.ndarray | None = None
    visual: np.ndarray | None = None
    fused: np.ndarray | None = None


def sense_tokens(sense: SenseEntry, table: EmbeddingTable) -> list[str]:
    """Content tokens of the definition followed by all examples."""
    tokens = tokenize_content(sense.definition, table)
    for example in sense.examples:
        tokens.extend(tokenize_content(example, table))
    return tokens


def build_text_sense_rep(sense: SenseEntry, table: EmbeddingTable) -> np.ndarray:
    vec, _ = embed_text(sense_tokens(sense, table), table)
    return vec


def build_visual_sense_rep(
    sense_id: str, manifest: dict[str, list[str]], store: FeatureStore
) -> np.ndarray:
    """Mean pool over the feature vectors of the sense's listed images."""
    if sense_id not in manifest:
        raise MissingKeyError(f"sense '{sense_id}' not in sense-image manifest")
    keys = manifest[sense_id]
    if not keys:
        raise MissingKeyError(f"sense '{sense_id}' lists no images in manifest")
    return mean_pool([store.vector(k) for k in keys])
