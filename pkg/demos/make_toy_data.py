#!/usr/bin/env python3
"""Regenerate the bundled toy resources under demos/data/.

Four verbs, nine depictable senses, 44 images. Token embeddings cluster
around one latent direction per sense; image features do the same in a
separate visual space. Predicted annotations are noisy copies of the gold
ones (wrong-topic labels, caption drift), so GOLD beats PRED like it
should. Everything is seeded: rerunning this script reproduces the files
byte for byte.
"""

from __future__ import annotations

import json
import os

import numpy as np

from verbsense.evaluation import save_dataset
from verbsense.features import FeatureStore, write_feature_file
from verbsense.imagerep import ImageRecord
from verbsense.inventory import parse_inventory, save_inventory

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "data")

EMB_DIM = 16
FEAT_DIM = 24
IMAGES_PER_SENSE = 5
PROTOS_PER_SENSE = 4

# verb -> (class, [(sense_id, depictable, definition, example, topic words)])
VERBS = {
    "ride": (
        "motion",
        [
            ("ride.01", True, "sit on and travel on a horse or animal",
             "She rides her horse across the field every morning.",
             ["horse", "saddle", "stable", "gallop", "mane", "rider"]),
            ("ride.02", True, "travel by bicycle or in a vehicle",
             "He rides his bicycle along the street to work.",
             ["bicycle", "pedal", "wheel", "helmet", "street", "traffic"]),
        ],
    ),
    "play": (
        "motion",
        [
            ("play.01", True, "participate in a sport or game with a ball",
             "The children play tennis on the court near the park.",
             ["ball", "court", "tennis", "racket", "team", "goal"]),
            ("play.02", True, "perform music on an instrument",
             "A musician plays the guitar on the stage.",
             ["guitar", "piano", "stage", "concert", "melody", "musician"]),
            ("play.03", False, "behave in a deceptive or teasing manner",
             "Do not play games with my patience.",
             ["patience", "trick", "tease"]),
        ],
    ),
    "sit": (
        "nonmotion",
        [
            ("sit.01", True, "rest with the body supported by a seat",
             "An old man sits on the bench in the garden.",
             ["bench", "chair", "garden", "shade", "cushion", "porch"]),
            ("sit.02", True, "pose seated for a portrait or photograph",
             "The family sat for a portrait in the studio.",
             ["portrait", "studio", "camera", "pose", "painter", "easel"]),
        ],
    ),
    "feed": (
        "nonmotion",
        [
            ("feed.01", True, "give food to a person or animal",
             "A farmer feeds hay to the cows in the barn.",
             ["hay", "cow", "barn", "bucket", "grain", "farmer"]),
            ("feed.02", True, "supply material into a machine",
             "She feeds paper into the printer tray.",
             ["paper", "printer", "machine", "tray", "roller", "conveyor"]),
        ],
    ),
}

GENERIC = ["near", "small", "large", "old", "young", "morning", "evening", "two"]


def all_senses():
    for verb, (vclass, entries) in VERBS.items():
        for sense_id, depictable, definition, example, topic in entries:
            yield verb, vclass, sense_id, depictable, definition, example, topic


def build_embeddings(rng):
    """One latent direction per sense; topic tokens scatter around it."""
    directions = {}
    for _, _, sense_id, _, _, _, _ in all_senses():
        d = rng.normal(size=EMB_DIM)
        directions[sense_id] = d / np.linalg.norm(d)
    vectors = {}
    for _, _, sense_id, _, _, _, topic in all_senses():
        for token in topic:
            if token not in vectors:
                vectors[token] = 2.2 * directions[sense_id] + 1.1 * rng.normal(size=EMB_DIM)
    for token in GENERIC:
        vectors[token] = 0.8 * rng.normal(size=EMB_DIM)
    return vectors, directions


def write_embeddings(vectors, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{len(vectors)} {EMB_DIM}\n")
        for token in sorted(vectors):
            values = " ".join(f"{x:.6f}" for x in vectors[token])
            f.write(f"{token} {values}\n")


def build_inventory():
    doc = {"verbs": {}}
    for verb, (vclass, entries) in VERBS.items():
        doc["verbs"][verb] = {
            "class": vclass,
            "senses": [
                {"id": sid, "definition": definition, "examples": [example],
                 "depictable": depictable}
                for sid, depictable, definition, example, _ in entries
            ],
        }
    return parse_inventory(doc)


def make_description(rng, topic, n_words=5):
    words = list(rng.choice(topic, size=min(2, len(topic)), replace=False))
    words += list(rng.choice(GENERIC, size=n_words - len(words), replace=True))
    rng.shuffle(words)
    return "a scene with " + " ".join(words)


def build_dataset(rng, visual_directions):
    topics = {sid: topic for _, _, sid, _, _, _, topic in all_senses()}
    all_topic_words = sorted({w for t in topics.values() for w in t})
    records = []
    image_features = {}
    for verb, _, sense_id, depictable, _, _, topic in all_senses():
        if not depictable:
            continue
        for i in range(IMAGES_PER_SENSE):
            image_id = f"{sense_id}_img{i}"
            gold_objects = tuple(rng.choice(topic, size=2, replace=False))
            pred_objects = [(label, round(float(rng.uniform(0.4, 0.95)), 3))
                            for label in gold_objects[:1]]
            # detector noise: a wrong-topic label and a low-score distractor
            pred_objects.append(
                (str(rng.choice(all_topic_words)), round(float(rng.uniform(0.25, 0.6)), 3))
            )
            pred_objects.append(
                (str(rng.choice(all_topic_words)), round(float(rng.uniform(0.01, 0.15)), 3))
            )
            gold_desc = tuple(make_description(rng, topic) for _ in range(2))
            # caption drift: one on-topic line, one wrong-topic line
            wrong_topic = topics[str(rng.choice([s for s in topics if s != sense_id]))]
            pred_desc = (
                make_description(rng, topic),
                make_description(rng, wrong_topic),
            )
            records.append(
                ImageRecord(
                    image_id=image_id,
                    verb=verb,
                    gold_sense_id=sense_id,
                    source_dataset="coco" if rng.random() < 0.7 else "tuhoi",
                    objects_gold=gold_objects,
                    objects_pred=tuple(pred_objects),
                    descriptions_gold=gold_desc,
                    descriptions_pred=pred_desc,
                )
            )
            image_features[image_id] = (
                2.0 * visual_directions[sense_id] + 1.2 * rng.normal(size=FEAT_DIM)
            )
    return records, image_features


def main():
    rng = np.random.default_rng(12)
    os.makedirs(DATA, exist_ok=True)

    vectors, _ = build_embeddings(rng)
    write_embeddings(vectors, os.path.join(DATA, "embeddings.txt"))

    inventory = build_inventory()
    save_inventory(inventory, os.path.join(DATA, "inventory.json"))

    visual_directions = {}
    for _, _, sense_id, _, _, _, _ in all_senses():
        d = rng.normal(size=FEAT_DIM)
        visual_directions[sense_id] = d / np.linalg.norm(d)

    records, image_features = build_dataset(rng, visual_directions)
    save_dataset(records, os.path.join(DATA, "dataset.jsonl"))
    write_feature_file(
        FeatureStore.from_entries(FEAT_DIM, image_features),
        os.path.join(DATA, "image_features.vsdf"),
    )

    manifest = {}
    proto_features = {}
    for _, _, sense_id, depictable, _, _, _ in all_senses():
        if not depictable:
            continue
        keys = []
        for j in range(PROTOS_PER_SENSE):
            key = f"proto_{sense_id}_{j}"
            proto_features[key] = (
                2.0 * visual_directions[sense_id] + 0.9 * rng.normal(size=FEAT_DIM)
            )
            keys.append(key)
        manifest[sense_id] = keys
    write_feature_file(
        FeatureStore.from_entries(FEAT_DIM, proto_features),
        os.path.join(DATA, "sense_features.vsdf"),
    )
    with open(os.path.join(DATA, "sense_manifest.json"), "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)

    print(f"wrote toy resources to {DATA}:")
    print(f"  {len(vectors)} token vectors (dim {EMB_DIM})")
    print(f"  {len(inventory.verbs)} verbs, "
          f"{sum(len(v) for v in inventory.verbs.values())} senses")
    print(f"  {len(records)} images (dim {FEAT_DIM} features), "
          f"{len(proto_features)} sense prototypes")


if __name__ == "__main__":
    main()
