#!/usr/bin/env python3
"""Fuse the textual and visual views: normalized concatenation vs CCA.

Fits a CCA model on (description embedding, image feature) pairs from the
toy dataset, inspects the canonical correlations, verifies them against a
brute-force generalized-eigenvalue solve, then compares multimodal cells
under both fusion strategies and both lambda weightings.
"""

import os

import numpy as np
import scipy.linalg

from verbsense.cca import fit_cca, project, split_keys
from verbsense.disambig import DisambigResources, Disambiguator
from verbsense.embeddings import load_embeddings
from verbsense.evaluation import load_dataset, run_grid
from verbsense.features import load_manifest, read_feature_file
from verbsense.imagerep import RepConfig
from verbsense.inventory import load_inventory

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def brute_force_correlations(X, Y, n, ridge):
    dx, dy = X.shape[1], Y.shape[1]
    cov = np.cov(X.T, Y.T, ddof=1)
    cxx = cov[:dx, :dx] + ridge * np.eye(dx)
    cyy = cov[dx:, dx:] + ridge * np.eye(dy)
    cxy = cov[:dx, dx:]
    A = np.block([[np.zeros((dx, dx)), cxy], [cxy.T, np.zeros((dy, dy))]])
    B = np.block([[cxx, np.zeros((dx, dy))], [np.zeros((dy, dx)), cyy]])
    return np.sort(scipy.linalg.eigh(A, B, eigvals_only=True))[::-1][:n]


def main():
    inventory = load_inventory(os.path.join(DATA, "inventory.json"))
    table = load_embeddings(os.path.join(DATA, "embeddings.txt"))
    records = load_dataset(os.path.join(DATA, "dataset.jsonl"), inventory)
    image_feats = read_feature_file(os.path.join(DATA, "image_features.vsdf"))
    sense_feats = read_feature_file(os.path.join(DATA, "sense_features.vsdf"))
    manifest = load_manifest(os.path.join(DATA, "sense_manifest.json"))

    # One (text, visual) pair per image: description embedding + feature vector
    text_side = Disambiguator(
        inventory, RepConfig(channel="C", setting="gold"), DisambigResources(table=table)
    )
    by_id = {r.image_id: r for r in records}
    train_ids, dev_ids, test_ids = split_keys(by_id, seed=0)
    pairs = [
        (text_side.image_rep(by_id[i]), image_feats.vector(i).astype(float))
        for i in train_ids
    ]
    n, ridge = 6, 1e-2
    model = fit_cca(pairs, n=n, ridge=ridge, seed=0)
    print(f"fit CCA on {len(pairs)} train pairs "
          f"({len(dev_ids)} dev / {len(test_ids)} test held out), n={n}, ridge={ridge}")
    print("canonical correlations:", " ".join(f"{c:.3f}" for c in model.correlations))

    X = np.vstack([p[0] for p in pairs])
    Y = np.vstack([p[1] for p in pairs])
    oracle = brute_force_correlations(X, Y, n, ridge)
    print("generalized-eigenvalue check:", " ".join(f"{c:.3f}" for c in oracle))
    print(f"max deviation: {np.max(np.abs(oracle - model.correlations)):.2e}\n")

    sample = records[0]
    projected = project(model, text_side.image_rep(sample), "text")
    print(f"projected text rep of {sample.image_id}: dim {projected.shape[0]}, "
          f"first three {np.round(projected[:3], 3)}\n")

    print("=== multimodal cells, GOLD setting ===\n")
    gold_kwargs = dict(
        dataset=records, inv=inventory, table=table, image_features=image_feats,
        sense_features=sense_feats, sense_manifest=manifest, cca_model=model,
    )
    report = run_grid(cells=("C", "CNN", "concat:CNN+C", "cca:CNN+C"), **gold_kwargs)
    for cell, acc in report.rows.items():
        print(f"  {cell:<16} {acc:.3f}")

    print("\nlambda sweep for cca:CNN+C (text weight / visual weight):")
    for lt in (0.3, 0.5, 0.7):
        report = run_grid(
            cells=("cca:CNN+C",), lambda_t=lt, lambda_c=round(1 - lt, 2), **gold_kwargs
        )
        print(f"  lambda_t={lt:.1f} lambda_c={1 - lt:.1f} -> {report.rows['cca:CNN+C']:.3f}")


if __name__ == "__main__":
    main()
