"""Shared builders for randomized test instances."""

from __future__ import annotations

import numpy as np

from verbsense.features import FeatureStore
from verbsense.inventory import SenseInventory, parse_inventory

WORDS = (
    "horse guitar piano ball field court stage dirt water grass rider crowd "
    "strings keys net racket saddle bow drum kitchen window ladder bucket "
    "fence rope candle mirror engine wheel garden bridge tower valley river"
).split()


def random_inventory(rng: np.random.Generator) -> SenseInventory:
    data = {"verbs": {}}
    n_verbs = int(rng.integers(1, 5))
    for v in range(n_verbs):
        lemma = f"verb{v}"
        n_senses = int(rng.integers(1, 6))
        senses = []
        for s in range(n_senses):
            n_def = int(rng.integers(1, 6))
            n_ex = int(rng.integers(0, 3))
            senses.append(
                {
                    "id": f"{lemma}.{s + 1:02d}",
                    "definition": " ".join(rng.choice(WORDS, size=n_def)),
                    "examples": [
                        " ".join(rng.choice(WORDS, size=int(rng.integers(1, 7))))
                        for _ in range(n_ex)
                    ],
                    "depictable": bool(rng.integers(0, 2)),
                }
            )
        data["verbs"][lemma] = {
            "class": "motion" if rng.integers(0, 2) else "nonmotion",
            "senses": senses,
        }
    return parse_inventory(data)


def random_store(rng: np.random.Generator, max_keys=8, max_dim=16) -> FeatureStore:
    dim = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(0, max_keys + 1))
    entries = {}
    for i in range(n):
        key = f"key_{i}_{'αβγ'[int(rng.integers(0, 3))] if rng.integers(0, 2) else 'x'}"
        entries[key] = rng.normal(size=dim).astype(np.float32)
    return FeatureStore.from_entries(dim, entries)
