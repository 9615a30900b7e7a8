#!/usr/bin/env python3
"""Build textual and visual representations for every verb sense.

The textual side averages word vectors over the content words of a sense's
definition and examples; the visual side mean-pools stored feature vectors
of the sense's prototype images. Shows the nearest vocabulary tokens of
each textual sense vector as a sanity check.
"""

import os

import numpy as np

from verbsense.embeddings import load_embeddings
from verbsense.features import load_manifest, read_feature_file
from verbsense.inventory import load_inventory, senses
from verbsense.senserep import build_text_sense_rep, build_visual_sense_rep, sense_tokens

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def nearest_tokens(vec, table, k=4):
    scored = [
        (tok, float(vec @ v / (np.linalg.norm(vec) * np.linalg.norm(v))))
        for tok, v in table.vectors.items()
    ]
    return sorted(scored, key=lambda p: -p[1])[:k]


def main():
    inventory = load_inventory(os.path.join(DATA, "inventory.json"))
    table = load_embeddings(os.path.join(DATA, "embeddings.txt"))
    manifest = load_manifest(os.path.join(DATA, "sense_manifest.json"))
    store = read_feature_file(os.path.join(DATA, "sense_features.vsdf"))

    print(f"embedding table: {len(table.vectors)} tokens, dim {table.dim}")
    print(f"sense prototype store: {len(store)} vectors, dim {store.dim}\n")

    for verb in sorted(inventory.verbs):
        print(f"verb '{verb}' ({inventory.verb_class[verb]})")
        for sense in senses(inventory, verb):
            tokens = sense_tokens(sense, table)
            text_vec = build_text_sense_rep(sense, table)
            line = (
                f"  [{sense.rank}] {sense.sense_id}"
                f"{'' if sense.depictable else ' (not depictable)'}: "
                f"{len(tokens)} content tokens -> |s_text|={np.linalg.norm(text_vec):.2f}"
            )
            if sense.sense_id in manifest:
                visual_vec = build_visual_sense_rep(sense.sense_id, manifest, store)
                line += (
                    f", {len(manifest[sense.sense_id])} prototype images "
                    f"-> |s_visual|={np.linalg.norm(visual_vec):.2f}"
                )
            print(line)
            neighbors = ", ".join(f"{t} ({s:.2f})" for t, s in nearest_tokens(text_vec, table))
            print(f"      nearest tokens: {neighbors}")
        print()


if __name__ == "__main__":
    main()
