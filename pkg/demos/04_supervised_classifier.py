#!/usr/bin/env python3
"""Train per-verb logistic-regression sense classifiers and compare them
with the unsupervised scorer on the same held-out images.

Uses the qualification rule (enough annotated images, at least two senses
observed), a per-sense stratified split, and the O+C text features.
"""

import os

import numpy as np

from verbsense.disambig import DisambigResources, Disambiguator
from verbsense.embeddings import load_embeddings
from verbsense.evaluation import load_dataset
from verbsense.imagerep import RepConfig
from verbsense.inventory import load_inventory
from verbsense.supervised import (
    predict_lr,
    select_supervised_verbs,
    split_train_test,
    train_lr,
)

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def main():
    inventory = load_inventory(os.path.join(DATA, "inventory.json"))
    table = load_embeddings(os.path.join(DATA, "embeddings.txt"))
    records = load_dataset(os.path.join(DATA, "dataset.jsonl"), inventory)

    verbs = select_supervised_verbs(records, inventory, min_images=10)
    print(f"verbs qualifying for supervised training (>=10 images, >=2 senses): {verbs}\n")

    cfg = RepConfig(channel="O+C", setting="gold")
    featurizer = Disambiguator(inventory, cfg, DisambigResources(table=table))
    train_recs, test_recs = split_train_test(
        [r for r in records if r.verb in set(verbs)], ratio=0.8, seed=0
    )
    print(f"split: {len(train_recs)} train / {len(test_recs)} test (seed 0, ratio 0.8)\n")

    print(f"{'verb':<8} {'n_tr':>4} {'n_te':>4} {'supervised':>10} {'unsupervised':>12}")
    total_sup = total_unsup = total = 0
    for verb in verbs:
        classes = tuple(sorted({r.gold_sense_id for r in records if r.verb == verb}))
        index = {c: i for i, c in enumerate(classes)}
        tr = [r for r in train_recs if r.verb == verb]
        te = [r for r in test_recs if r.verb == verb]
        model = train_lr(
            [(featurizer.image_rep(r), index[r.gold_sense_id]) for r in tr],
            l2=1e-3, epochs=400, lr=0.5, seed=0, verb=verb, classes=classes,
        )
        sup = sum(
            predict_lr(model, featurizer.image_rep(r))[0] == r.gold_sense_id for r in te
        )
        unsup = sum(
            featurizer.predict(r).predicted_sense_id == r.gold_sense_id for r in te
        )
        print(f"{verb:<8} {len(tr):>4} {len(te):>4} {sup / len(te):>10.3f} "
              f"{unsup / len(te):>12.3f}")
        total_sup += sup
        total_unsup += unsup
        total += len(te)
    print(f"{'all':<8} {'':>4} {total:>4} {total_sup / total:>10.3f} "
          f"{total_unsup / total:>12.3f}")
    print("\nThe classifier sees sense-labeled training images; the unsupervised")
    print("scorer only sees the dictionary. Both use identical feature vectors.")


if __name__ == "__main__":
    main()
