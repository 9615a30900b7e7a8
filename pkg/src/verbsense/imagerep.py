"""Per-image representations under GOLD or PRED annotation sources.

An image can be represented through its text annotations (object labels O,
descriptions C, or the pooled union O+C), through its stored feature
vector (CNN), or through a fusion of both. GOLD uses human annotations,
PRED uses automatically produced labels (score-thresholded) and generated
descriptions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingTable, embed_text, tokenize_content
from .errors import FormatError, NoCoverageError
from .features import FeatureStore

SOURCE_DATASETS = ("coco", "tuhoi")

CHANNELS = ("O", "C", "O+C", "CNN", "CNN+O", "CNN+C", "CNN+O+C")
SETTINGS = ("gold", "pred")
FUSIONS = ("none", "concat", "cca")

DEFAULT_PRED_THRESHOLD = 0.2
# Best-performing interpolation weights per setting (text, visual).
DEFAULT_LAMBDAS = {"gold": (0.5, 0.5), "pred": (0.3, 0.7)}


@dataclass(frozen=True)
class ImageRecord:
    image_id: str
    verb: str
    gold_sense_id: str
    source_dataset: str
    objects_gold: tuple[str, ...] = ()
    objects_pred: tuple[tuple[str, float], ...] = ()
    descriptions_gold: tuple[str, ...] = ()
    descriptions_pred: tuple[str, ...] = ()


def record_from_dict(d: dict, where: str = "record") -> ImageRecord:
    """Build an ImageRecord from a decoded JSONL object, validating fields."""

    def _require_str(name: str) -> str:
        v = d.get(name)
        if not isinstance(v, str) or not v:
            raise FormatError(f"{where}: field '{name}' must be a non-empty string")
        return v

    def _str_list(name: str) -> tuple[str, ...]:
        v = d.get(name, [])
        if not isinstance(v, list) or any(not isinstance(x, str) for x in v):
            raise FormatError(f"{where}: field '{name}' must be an array of strings")
        return tuple(v)

    source = _require_str("source_dataset")
    if source not in SOURCE_DATASETS:
        raise FormatError(
            f"{where}: field 'source_dataset' must be one of {SOURCE_DATASETS}"
        )

    # Gold objects may carry optional scores; they are ignored here.
    raw_gold = d.get("objects_gold", [])
    if not isinstance(raw_gold, list):
        raise FormatError(f"{where}: field 'objects_gold' must be an array")
    objects_gold: list[str] = []
    for x in raw_gold:
        if isinstance(x, str):
            objects_gold.append(x)
        elif isinstance(x, list) and len(x) == 2 and isinstance(x[0], str):
            objects_gold.append(x[0])
        else:
            raise FormatError(f"{where}: bad gold object entry {x!r}")

    raw_pred = d.get("objects_pred", [])
    if not isinstance(raw_pred, list):
        raise FormatError(f"{where}: field 'objects_pred' must be an array")
    objects_pred: list[tuple[str, float]] = []
    for x in raw_pred:
        if (
            not isinstance(x, list)
            or len(x) != 2
            or not isinstance(x[0], str)
            or not isinstance(x[1], (int, float))
        ):
            raise FormatError(f"{where}: bad predicted object entry {x!r}")
        score = float(x[1])
        if not np.isfinite(score) or not 0.0 <= score <= 1.0:
            raise FormatError(f"{where}: object score {score!r} outside [0, 1]")
        objects_pred.append((x[0], score))

    return ImageRecord(
        image_id=_require_str("image_id"),
        verb=_require_str("verb"),
        gold_sense_id=_require_str("gold_sense_id"),
        source_dataset=source,
        objects_gold=tuple(objects_gold),
        objects_pred=tuple(objects_pred),
        descriptions_gold=_str_list("descriptions_gold"),
        descriptions_pred=_str_list("descriptions_pred"),
    )


def record_to_dict(rec: ImageRecord) -> dict:
    return {
        "image_id": rec.image_id,
        "verb": rec.verb,
        "gold_sense_id": rec.gold_sense_id,
        "source_dataset": rec.source_dataset,
        "objects_gold": list(rec.objects_gold),
        "objects_pred": [[label, score] for label, score in rec.objects_pred],
        "descriptions_gold": list(rec.descriptions_gold),
        "descriptions_pred": list(rec.descriptions_pred),
    }


@dataclass(frozen=True)
class RepConfig:
    """One cell of the representation grid.

    lambda_t/lambda_c default to the per-setting interpolation weights
    (gold: 0.5/0.5, pred: 0.3/0.7). text_pool selects how O+C combines the
    two token sources: 'pool' averages one pooled token list, 'blend'
    averages the O-mean and the C-mean. cca_combine selects how projected
    views merge: weighted interpolation or normalized concatenation.
    """

    channel: str = "C"
    setting: str = "gold"
    fusion: str = "none"
    lambda_t: float | None = None
    lambda_c: float | None = None
    pred_threshold: float = DEFAULT_PRED_THRESHOLD
    text_pool: str = "pool"
    cca_combine: str = "interpolate"
    depictable_only: bool = True

    def __post_init__(self):
        if self.channel not in CHANNELS:
            raise ValueError(f"unknown channel {self.channel!r}")
        if self.setting not in SETTINGS:
            raise ValueError(f"unknown setting {self.setting!r}")
        if self.fusion not in FUSIONS:
            raise ValueError(f"unknown fusion {self.fusion!r}")
        if self.is_multimodal and self.fusion == "none":
            raise ValueError(f"channel {self.channel} requires fusion concat or cca")
        if not self.is_multimodal and self.fusion != "none":
            raise ValueError(f"channel {self.channel} takes no fusion step")
        if not 0.0 <= self.pred_threshold <= 1.0:
            raise ValueError("pred_threshold must lie in [0, 1]")
        if self.text_pool not in ("pool", "blend"):
            raise ValueError(f"unknown text_pool {self.text_pool!r}")
        if self.cca_combine not in ("interpolate", "concat"):
            raise ValueError(f"unknown cca_combine {self.cca_combine!r}")
        if (self.lambda_t is None) != (self.lambda_c is None):
            raise ValueError("lambda_t and lambda_c must be given together")
        if self.lambda_t is None:
            lt, lc = DEFAULT_LAMBDAS[self.setting]
            object.__setattr__(self, "lambda_t", lt)
            object.__setattr__(self, "lambda_c", lc)
        if not (np.isfinite(self.lambda_t) and np.isfinite(self.lambda_c)):
            raise ValueError("lambda weights must be finite")
        if not (0.0 <= self.lambda_t <= 1.0 and 0.0 <= self.lambda_c <= 1.0):
            raise ValueError("lambda weights must lie in [0, 1]")
        if self.fusion == "cca" and abs(self.lambda_t + self.lambda_c - 1.0) > 1e-9:
            raise ValueError("lambda_t + lambda_c must equal 1 for cca fusion")

    @property
    def text_channel(self) -> str | None:
        """The O / C / O+C part of the channel, or None for pure CNN."""
        stripped = self.channel.removeprefix("CNN+")
        return None if stripped == "CNN" else stripped

    @property
    def uses_cnn(self) -> bool:
        return self.channel.startswith("CNN")

    @property
    def is_multimodal(self) -> bool:
        return self.uses_cnn and self.channel != "CNN"


def filter_pred_objects(labels, threshold: float) -> list[str]:
    """Predicted labels whose score is strictly above the threshold."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold}")
    return [label for label, score in labels if score > threshold]


def _object_tokens(rec: ImageRecord, cfg: RepConfig, table: EmbeddingTable) -> list[str]:
    if cfg.setting == "gold":
        labels = list(rec.objects_gold)
    else:
        labels = filter_pred_objects(rec.objects_pred, cfg.pred_threshold)
    tokens: list[str] = []
    for label in labels:
        tokens.extend(tokenize_content(label, table))
    return tokens


def _description_tokens(rec: ImageRecord, cfg: RepConfig, table: EmbeddingTable) -> list[str]:
    descriptions = rec.descriptions_gold if cfg.setting == "gold" else rec.descriptions_pred
    tokens: list[str] = []
    for text in descriptions:
        tokens.extend(tokenize_content(text, table))
    return tokens


def build_text_image_rep(
    rec: ImageRecord, cfg: RepConfig, table: EmbeddingTable
) -> np.ndarray:
    """Textual image representation for the O / C / O+C part of the channel.

    O averages token vectors of the object labels, C averages content words
    pooled across all descriptions, O+C averages the union token pool (or
    blends the two channel means when text_pool='blend').
    """
    tc = cfg.text_channel
    if tc is None:
        raise ValueError(f"channel {cfg.channel} has no text part")
    if tc == "O":
        tokens = _object_tokens(rec, cfg, table)
        if not tokens:
            raise NoCoverageError(
                f"image '{rec.image_id}': no usable {cfg.setting} object labels"
            )
        return embed_text(tokens, table)[0]
    if tc == "C":
        tokens = _description_tokens(rec, cfg, table)
        if not tokens:
            raise NoCoverageError(
                f"image '{rec.image_id}': no usable {cfg.setting} descriptions"
            )
        return embed_text(tokens, table)[0]
    # O+C
    obj_tokens = _object_tokens(rec, cfg, table)
    desc_tokens = _description_tokens(rec, cfg, table)
    if cfg.text_pool == "blend":
        o_vec = embed_text(obj_tokens, table)[0]
        c_vec = embed_text(desc_tokens, table)[0]
        return 0.5 * o_vec + 0.5 * c_vec
    pooled = obj_tokens + desc_tokens
    if not pooled:
        raise NoCoverageError(f"image '{rec.image_id}': no usable {cfg.setting} annotations")
    return embed_text(pooled, table)[0]


def visual_image_rep(rec: ImageRecord, store: FeatureStore) -> np.ndarray:
    """The stored feature vector of the image, unmodified (widened to f64)."""
    return store.vector(rec.image_id).astype(np.float64)
