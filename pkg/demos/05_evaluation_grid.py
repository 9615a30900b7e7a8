#!/usr/bin/env python3
"""Run the full evaluation grid and print the report tables.

One table per verb class and setting: textual channels, the visual
channel, and multimodal fusion cells, next to the first-sense,
most-frequent-sense, and word-overlap baselines. Also writes the
machine-readable report JSON next to the toy data.
"""

import json
import os

from verbsense.cca import fit_cca
from verbsense.disambig import DisambigResources, Disambiguator
from verbsense.embeddings import load_embeddings
from verbsense.evaluation import DEFAULT_CELLS, format_report, run_grid
from verbsense.evaluation import load_dataset
from verbsense.features import load_manifest, read_feature_file
from verbsense.imagerep import RepConfig
from verbsense.inventory import load_inventory

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def main():
    inventory = load_inventory(os.path.join(DATA, "inventory.json"))
    table = load_embeddings(os.path.join(DATA, "embeddings.txt"))
    records = load_dataset(os.path.join(DATA, "dataset.jsonl"), inventory)
    image_feats = read_feature_file(os.path.join(DATA, "image_features.vsdf"))
    sense_feats = read_feature_file(os.path.join(DATA, "sense_features.vsdf"))
    manifest = load_manifest(os.path.join(DATA, "sense_manifest.json"))

    text_side = Disambiguator(
        inventory, RepConfig(channel="C", setting="gold"), DisambigResources(table=table)
    )
    cca_model = fit_cca(
        [(text_side.image_rep(r), image_feats.vector(r.image_id)) for r in records],
        n=6,
        ridge=1e-2,
    )

    reports = {}
    for setting in ("gold", "pred"):
        for verb_class in ("motion", "nonmotion", "all"):
            report = run_grid(
                records,
                inventory,
                cells=DEFAULT_CELLS,
                setting=setting,
                verb_class=verb_class,
                table=table,
                image_features=image_feats,
                sense_features=sense_feats,
                sense_manifest=manifest,
                cca_model=cca_model,
            )
            reports[f"{setting}/{verb_class}"] = report.to_dict()
            print(format_report(report))
            print()

    out = os.path.join(DATA, "grid_report.json")
    with open(out, "w", encoding="utf-8") as f:
        json.dump(reports, f, indent=2)
    print(f"wrote all six reports to {out}")


if __name__ == "__main__":
    main()
