#!/usr/bin/env python3
"""Convert a public VerSe-style export into the engine's file formats.

Inputs:
  --annotations  CSV of image/verb/sense annotations. Expected columns
                 (rename with the --col-* flags if your export differs):
                 image_id, verb, sense_id, dataset (coco|tuhoi).
  --senses       Sense dictionary, either already in this package's
                 inventory JSON format, or a TSV with one sense per line:
                 verb <TAB> verb_class <TAB> sense_id <TAB> depictable(0/1)
                 <TAB> definition <TAB> examples ('||' separated, optional)
                 Sense order within a verb defines rank.

Outputs (in --out-dir): inventory.json and dataset.jsonl, both validated
by loading them back with the package loaders before the script exits.

The annotation CSV is the dataset-defining artifact; records referring to
verbs or senses missing from the dictionary are rejected so that baseline
numbers are computed on exactly the export's contents.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from verbsense.evaluation import load_dataset
from verbsense.imagerep import record_to_dict, ImageRecord
from verbsense.inventory import load_inventory, parse_inventory, save_inventory


def read_senses_tsv(path):
    verbs: dict = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) not in (5, 6):
                raise SystemExit(f"{path}:{lineno}: expected 5 or 6 tab-separated fields")
            verb, verb_class, sense_id, depictable, definition = parts[:5]
            examples = parts[5].split("||") if len(parts) == 6 and parts[5] else []
            verbs.setdefault(verb, {"class": verb_class, "senses": []})
            verbs[verb]["senses"].append(
                {
                    "id": sense_id,
                    "definition": definition,
                    "examples": [e for e in examples if e],
                    "depictable": depictable.strip() in ("1", "true", "True", "yes"),
                }
            )
    return parse_inventory({"verbs": verbs})


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--annotations", required=True)
    parser.add_argument("--senses", required=True)
    parser.add_argument("--out-dir", required=True)
    parser.add_argument("--col-image", default="image_id")
    parser.add_argument("--col-verb", default="verb")
    parser.add_argument("--col-sense", default="sense_id")
    parser.add_argument("--col-dataset", default="dataset")
    args = parser.parse_args()

    if args.senses.endswith(".json"):
        inventory = load_inventory(args.senses)
    else:
        inventory = read_senses_tsv(args.senses)

    records = []
    with open(args.annotations, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        for lineno, row in enumerate(reader, start=2):
            try:
                records.append(
                    ImageRecord(
                        image_id=row[args.col_image].strip(),
                        verb=row[args.col_verb].strip(),
                        gold_sense_id=row[args.col_sense].strip(),
                        source_dataset=row[args.col_dataset].strip().lower(),
                    )
                )
            except KeyError as e:
                raise SystemExit(
                    f"{args.annotations}:{lineno}: missing column {e}; "
                    "use the --col-* flags to map your header names"
                )

    os.makedirs(args.out_dir, exist_ok=True)
    inventory_path = os.path.join(args.out_dir, "inventory.json")
    dataset_path = os.path.join(args.out_dir, "dataset.jsonl")
    save_inventory(inventory, inventory_path)
    with open(dataset_path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(record_to_dict(rec), ensure_ascii=False) + "\n")

    # Validate through the package loaders; fails loudly on any bad reference.
    inventory = load_inventory(inventory_path)
    loaded = load_dataset(dataset_path, inventory)
    classes = {}
    for rec in loaded:
        classes[inventory.verb_class[rec.verb]] = classes.get(
            inventory.verb_class[rec.verb], 0
        ) + 1
    print(f"wrote {inventory_path} ({len(inventory.verbs)} verbs)")
    print(f"wrote {dataset_path} ({len(loaded)} images; per class {classes})")
    print(f"point VERSE_DATA_DIR={args.out_dir} to run the integration test")
    return 0


if __name__ == "__main__":
    sys.exit(main())
