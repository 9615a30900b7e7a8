"""Dataset ingestion, accuracy, and the evaluation report grid.

The grid mirrors the unsupervised experiment layout: textual channels
(O, C, O+C), the visual channel (CNN), and multimodal channels (CNN+O,
CNN+C, CNN+O+C) under concatenation or CCA fusion, one accuracy per cell,
next to first-sense, most-frequent-sense, and word-overlap baselines.
Cells whose resources are missing are marked absent and the run continues.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .disambig import (
    DisambigResources,
    Disambiguator,
    Prediction,
    first_sense,
    lesk_overlap,
    most_frequent_sense,
)
from .embeddings import tokenize
from .errors import (
    FormatError,
    InsufficientDataError,
    MissingKeyError,
    VerbsenseError,
)
from .imagerep import CHANNELS, ImageRecord, RepConfig, record_from_dict
from .inventory import SenseInventory, senses
from .stopwords import STOPWORDS

VERB_CLASS_FILTERS = ("motion", "nonmotion", "all")

TEXT_CELLS = ("O", "C", "O+C")
MULTIMODAL_CHANNELS = ("CNN+O", "CNN+C", "CNN+O+C")

# Table column order: textual, visual, concat fusion, CCA fusion.
DEFAULT_CELLS = (
    "O",
    "C",
    "O+C",
    "CNN",
    "concat:CNN+O",
    "concat:CNN+C",
    "concat:CNN+O+C",
    "cca:CNN+O",
    "cca:CNN+C",
    "cca:CNN+O+C",
)


def parse_cell(cell: str) -> tuple[str, str]:
    """Split a cell name into (channel, fusion)."""
    if ":" in cell:
        fusion, channel = cell.split(":", 1)
    else:
        fusion, channel = "none", cell
    if channel not in CHANNELS:
        raise ValueError(f"unknown channel in cell {cell!r}")
    if fusion not in ("none", "concat", "cca"):
        raise ValueError(f"unknown fusion in cell {cell!r}")
    return channel, fusion


def grid_cells(channels, fusions=("concat", "cca")) -> list[str]:
    """Expand channel names into cell names, fanning multimodal channels
    out over the requested fusions."""
    cells = []
    for ch in channels:
        if ch in TEXT_CELLS or ch == "CNN":
            cells.append(ch)
        elif ch in MULTIMODAL_CHANNELS:
            cells.extend(f"{fu}:{ch}" for fu in fusions)
        else:
            raise ValueError(f"unknown channel {ch!r}")
    return cells


@dataclass
class EvalReport:
    setting: str
    verb_class: str
    rows: dict[str, float | None]
    baselines: dict[str, float]
    counts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "setting": self.setting,
            "verb_class": self.verb_class,
            "rows": self.rows,
            "baselines": self.baselines,
            "counts": self.counts,
        }


def load_dataset(path, inv: SenseInventory) -> list[ImageRecord]:
    """Read a dataset JSONL file, checking every verb/sense reference."""
    records: list[ImageRecord] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            where = f"{path}: line {lineno}"
            try:
                d = json.loads(line)
            except json.JSONDecodeError as e:
                raise FormatError(f"{where}: invalid JSON: {e.msg}") from e
            rec = record_from_dict(d, where=where)
            if rec.image_id in seen_ids:
                raise FormatError(f"{where}: duplicate image id '{rec.image_id}'")
            seen_ids.add(rec.image_id)
            if rec.verb not in inv:
                raise FormatError(f"{where}: unknown verb '{rec.verb}'")
            known = {s.sense_id for s in senses(inv, rec.verb)}
            if rec.gold_sense_id not in known:
                raise FormatError(
                    f"{where}: sense '{rec.gold_sense_id}' not among senses of '{rec.verb}'"
                )
            records.append(rec)
    return records


def save_dataset(records, path) -> None:
    from .imagerep import record_to_dict

    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(record_to_dict(rec), ensure_ascii=False) + "\n")


def accuracy(preds: list[Prediction], gold: dict[str, str]) -> float:
    """Fraction of predictions matching their gold sense."""
    if not preds:
        raise InsufficientDataError("accuracy of an empty prediction list is undefined")
    correct = 0
    for p in preds:
        if p.image_id not in gold:
            raise MissingKeyError(f"no gold sense for image '{p.image_id}'")
        correct += p.predicted_sense_id == gold[p.image_id]
    return correct / len(preds)


def _filter_by_class(dataset, inv, verb_class):
    if verb_class == "all":
        return list(dataset)
    return [rec for rec in dataset if inv.verb_class[rec.verb] == verb_class]


def _lesk_context(rec: ImageRecord, stopwords=STOPWORDS) -> set[str]:
    """Word-overlap context: gold object labels plus gold descriptions."""
    tokens: list[str] = []
    for label in rec.objects_gold:
        tokens.extend(tokenize(label, stopwords))
    for text in rec.descriptions_gold:
        tokens.extend(tokenize(text, stopwords))
    return set(tokens)


def _lesk_predict(rec, inv, depictable_only, include_examples) -> str:
    context = _lesk_context(rec)
    candidates = senses(inv, rec.verb, depictable_only=depictable_only)
    best_id, best = None, -1
    for s in candidates:  # rank order; strict > keeps the lowest rank on ties
        overlap = lesk_overlap(context, s, include_examples=include_examples)
        if overlap > best:
            best = overlap
            best_id = s.sense_id
    return best_id


def _baselines(records, inv, depictable_only, include_lesk_examples):
    annotations = [(rec.verb, rec.gold_sense_id) for rec in records]
    fs = mfs = lesk = 0
    for rec in records:
        fs += first_sense(inv, rec.verb, depictable_only) == rec.gold_sense_id
        mfs += most_frequent_sense(annotations, rec.verb, inv) == rec.gold_sense_id
        lesk += (
            _lesk_predict(rec, inv, depictable_only, include_lesk_examples)
            == rec.gold_sense_id
        )
    n = len(records)
    return {"fs": fs / n, "mfs": mfs / n, "lesk": lesk / n}


def run_grid(
    dataset,
    inv: SenseInventory,
    cells=DEFAULT_CELLS,
    setting: str = "gold",
    verb_class: str = "all",
    table=None,
    image_features=None,
    sense_manifest=None,
    sense_features=None,
    cca_model=None,
    lambda_t: float | None = None,
    lambda_c: float | None = None,
    pred_threshold: float = 0.2,
    depictable_only: bool = True,
    include_lesk_examples: bool = False,
    jobs: int = 1,
) -> EvalReport:
    """Accuracy for every requested cell plus the three baselines.

    Deterministic; a cell whose resources are missing (or fail wholesale)
    is reported as absent with its reason, and the run continues.
    """
    if verb_class not in VERB_CLASS_FILTERS:
        raise ValueError(f"verb_class must be one of {VERB_CLASS_FILTERS}")
    records = _filter_by_class(dataset, inv, verb_class)
    if not records:
        raise InsufficientDataError(f"no records for verb class '{verb_class}'")
    # Verbs with a single candidate sense are still evaluated (their images
    # are trivially right or wrong) but counted so reports can flag them.
    trivial = sum(
        1 for rec in records if len(senses(inv, rec.verb, depictable_only)) < 2
    )
    res = DisambigResources(
        table=table,
        image_features=image_features,
        sense_manifest=sense_manifest,
        sense_features=sense_features,
        cca_model=cca_model,
    )
    rows: dict[str, float | None] = {}
    fallbacks: dict[str, int] = {}
    absent: dict[str, str] = {}
    for cell in cells:
        channel, fusion = parse_cell(cell)
        cfg = RepConfig(
            channel=channel,
            setting=setting,
            fusion=fusion,
            lambda_t=lambda_t,
            lambda_c=lambda_c,
            pred_threshold=pred_threshold,
            depictable_only=depictable_only,
        )
        try:
            disambiguator = Disambiguator(inv, cfg, res)
            if jobs > 1:
                with ThreadPoolExecutor(max_workers=jobs) as pool:
                    preds = list(pool.map(disambiguator.predict, records))
            else:
                preds = [disambiguator.predict(rec) for rec in records]
        except VerbsenseError as e:
            rows[cell] = None
            absent[cell] = str(e)
            continue
        rows[cell] = accuracy(preds, {rec.image_id: rec.gold_sense_id for rec in records})
        fallbacks[cell] = sum(p.fallback is not None for p in preds)
    report = EvalReport(
        setting=setting,
        verb_class=verb_class,
        rows=rows,
        baselines=_baselines(records, inv, depictable_only, include_lesk_examples),
        counts={
            "images": len(records),
            "verbs": len({rec.verb for rec in records}),
            "single_candidate_images": trivial,
            "fallbacks": fallbacks,
            "absent": absent,
        },
    )
    return report


def format_report(report: EvalReport) -> str:
    """Human-readable table, one line per cell, baselines on top."""
    lines = [
        f"setting={report.setting} verbs={report.verb_class} "
        f"images={report.counts.get('images')} verb-count={report.counts.get('verbs')}",
        "baselines: "
        + "  ".join(f"{k.upper()}={v:.3f}" for k, v in report.baselines.items()),
    ]
    fallbacks = report.counts.get("fallbacks", {})
    absent = report.counts.get("absent", {})
    for cell, acc in report.rows.items():
        if acc is None:
            lines.append(f"  {cell:<16} absent ({absent.get(cell, 'missing resource')})")
        else:
            note = f"  fallbacks={fallbacks[cell]}" if fallbacks.get(cell) else ""
            lines.append(f"  {cell:<16} {acc:.3f}{note}")
    return "\n".join(lines)
