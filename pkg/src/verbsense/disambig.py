"""Sense selection: cosine scoring with argmax, word-overlap baseline,
first-sense and most-frequent-sense heuristics.

A prediction scores every candidate sense of the image's verb by the dot
product of the length-normalized image and sense representations and takes
the argmax; ties break toward the lowest sense rank, which makes the
degenerate all-tied case coincide with the first-sense heuristic. When the
image has no usable text annotations for a text-bearing channel, the
prediction falls back to the first candidate sense and says so.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .cca import CcaModel, fuse_concat, fuse_interpolate, project
from .embeddings import EmbeddingTable, tokenize
from .errors import (
    DimensionMismatchError,
    FormatError,
    InsufficientDataError,
    MissingResourceError,
    NoCoverageError,
    ZeroNormError,
)
from .features import FeatureStore
from .imagerep import ImageRecord, RepConfig, build_text_image_rep, visual_image_rep
from .inventory import SenseEntry, SenseInventory, sense_rank, senses
from .senserep import build_text_sense_rep, build_visual_sense_rep
from .stopwords import STOPWORDS

FALLBACK_FIRST_SENSE = "no_coverage_first_sense"


@dataclass
class Prediction:
    image_id: str
    verb: str
    predicted_sense_id: str
    scores: dict[str, float] = field(default_factory=dict)
    fallback: str | None = None


def score_dot(image_rep, sense_rep) -> float:
    """Cosine similarity: dot product of the length-normalized inputs."""
    a = np.asarray(image_rep, dtype=np.float64)
    b = np.asarray(sense_rep, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"image rep dim {a.shape} does not match sense rep dim {b.shape}"
        )
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroNormError("cosine undefined for a zero vector")
    return float(np.clip(a @ b / (norm_a * norm_b), -1.0, 1.0))


def lesk_overlap(
    context_tokens,
    sense: SenseEntry,
    include_examples: bool = False,
    stopwords: frozenset = STOPWORDS,
) -> int:
    """Word overlap |context ∩ definition| on deduplicated token sets."""
    sense_text = sense.definition
    if include_examples:
        sense_text = " ".join([sense.definition, *sense.examples])
    return len(set(context_tokens) & set(tokenize(sense_text, stopwords)))


def first_sense(inv: SenseInventory, verb: str, depictable_only: bool = True) -> str:
    """The lowest-rank sense among the candidate set in effect."""
    candidates = senses(inv, verb, depictable_only=depictable_only)
    if not candidates:
        raise InsufficientDataError(f"verb '{verb}' has no depictable senses")
    return candidates[0].sense_id


def most_frequent_sense(annotations, verb: str, inv: SenseInventory) -> str:
    """The modal gold sense of a verb in the annotation list.

    Ties break toward the lowest sense rank. The caller chooses the
    annotation list; counting the evaluated annotations themselves makes
    this the best constant-per-verb predictor over them.
    """
    counts: dict[str, int] = {}
    for v, sense_id in annotations:
        if v == verb:
            counts[sense_id] = counts.get(sense_id, 0) + 1
    if not counts:
        raise InsufficientDataError(f"no annotations for verb '{verb}'")
    return max(counts, key=lambda sid: (counts[sid], -sense_rank(inv, verb, sid)))


@dataclass
class DisambigResources:
    """Everything a representation config might need; unused parts stay None."""

    table: EmbeddingTable | None = None
    image_features: FeatureStore | None = None
    sense_manifest: dict[str, list[str]] | None = None
    sense_features: FeatureStore | None = None
    cca_model: CcaModel | None = None


class Disambiguator:
    """Predicts senses for one representation config, caching per-verb
    sense representations across images."""

    def __init__(self, inv: SenseInventory, cfg: RepConfig, res: DisambigResources):
        self.inv = inv
        self.cfg = cfg
        self.res = res
        self._sense_reps: dict[str, list[tuple[SenseEntry, np.ndarray]]] = {}
        self._check_resources()

    def _check_resources(self) -> None:
        cfg, res = self.cfg, self.res
        if cfg.text_channel is not None and res.table is None:
            raise MissingResourceError(f"channel {cfg.channel} needs an embedding table")
        if cfg.uses_cnn:
            if res.image_features is None:
                raise MissingResourceError(f"channel {cfg.channel} needs image features")
            if res.sense_features is None or res.sense_manifest is None:
                raise MissingResourceError(
                    f"channel {cfg.channel} needs sense prototype features and a manifest"
                )
            if res.image_features.dim != res.sense_features.dim:
                raise DimensionMismatchError(
                    f"image feature dim {res.image_features.dim} does not match "
                    f"sense feature dim {res.sense_features.dim}"
                )
        if cfg.fusion == "cca" and res.cca_model is None:
            raise MissingResourceError("cca fusion needs a fitted CCA model")

    def _fuse(self, text_vec: np.ndarray, visual_vec: np.ndarray) -> np.ndarray:
        cfg = self.cfg
        if cfg.fusion == "concat":
            return fuse_concat(text_vec, visual_vec)
        t = project(self.res.cca_model, text_vec, "text")
        c = project(self.res.cca_model, visual_vec, "visual")
        if cfg.cca_combine == "concat":
            return fuse_concat(t, c)
        return fuse_interpolate(t, c, cfg.lambda_t, cfg.lambda_c)

    def _sense_rep(self, sense: SenseEntry) -> np.ndarray:
        cfg, res = self.cfg, self.res
        if cfg.channel == "CNN":
            return build_visual_sense_rep(sense.sense_id, res.sense_manifest, res.sense_features)
        text_vec = build_text_sense_rep(sense, res.table)
        if not cfg.uses_cnn:
            return text_vec
        visual_vec = build_visual_sense_rep(
            sense.sense_id, res.sense_manifest, res.sense_features
        )
        return self._fuse(text_vec, visual_vec)

    def sense_reps(self, verb: str) -> list[tuple[SenseEntry, np.ndarray]]:
        if verb not in self._sense_reps:
            candidates = senses(self.inv, verb, depictable_only=self.cfg.depictable_only)
            if not candidates:
                raise InsufficientDataError(f"verb '{verb}' has no candidate senses")
            self._sense_reps[verb] = [(s, self._sense_rep(s)) for s in candidates]
        return self._sense_reps[verb]

    def image_rep(self, rec: ImageRecord) -> np.ndarray:
        cfg, res = self.cfg, self.res
        if cfg.channel == "CNN":
            return visual_image_rep(rec, res.image_features)
        text_vec = build_text_image_rep(rec, cfg, res.table)
        if not cfg.uses_cnn:
            return text_vec
        return self._fuse(text_vec, visual_image_rep(rec, res.image_features))

    def predict(self, rec: ImageRecord) -> Prediction:
        reps = self.sense_reps(rec.verb)
        try:
            image_vec = self.image_rep(rec)
        except (NoCoverageError, ZeroNormError):
            # No usable text for the image: deterministic first-sense fallback.
            return Prediction(
                image_id=rec.image_id,
                verb=rec.verb,
                predicted_sense_id=reps[0][0].sense_id,
                scores={},
                fallback=FALLBACK_FIRST_SENSE,
            )
        scores: dict[str, float] = {}
        best_id = None
        best_score = -np.inf
        for sense, rep in reps:  # rank order; strict > keeps the lowest rank on ties
            s = score_dot(image_vec, rep)
            scores[sense.sense_id] = s
            if s > best_score:
                best_score = s
                best_id = sense.sense_id
        return Prediction(
            image_id=rec.image_id, verb=rec.verb, predicted_sense_id=best_id, scores=scores
        )


def disambiguate(
    rec: ImageRecord, cfg: RepConfig, inv: SenseInventory, res: DisambigResources
) -> Prediction:
    """One-shot sense prediction for a single image record."""
    return Disambiguator(inv, cfg, res).predict(rec)


def write_predictions(preds, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for p in preds:
            f.write(
                json.dumps(
                    {
                        "image_id": p.image_id,
                        "verb": p.verb,
                        "predicted_sense_id": p.predicted_sense_id,
                        "scores": p.scores,
                        "fallback": p.fallback,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def read_predictions(path) -> list[Prediction]:
    preds = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
            except json.JSONDecodeError as e:
                raise FormatError(f"{path}: line {lineno}: invalid JSON: {e.msg}") from e
            preds.append(
                Prediction(
                    image_id=d["image_id"],
                    verb=d["verb"],
                    predicted_sense_id=d["predicted_sense_id"],
                    scores={k: float(v) for k, v in d.get("scores", {}).items()},
                    fallback=d.get("fallback"),
                )
            )
    return preds
