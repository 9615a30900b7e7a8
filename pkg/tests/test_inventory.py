import json

import numpy as np
import pytest

from helpers import random_inventory
from verbsense.errors import FormatError, UnknownVerbError
from verbsense.inventory import (
    get_sense,
    inventory_to_dict,
    load_inventory,
    parse_inventory,
    save_inventory,
    sense_rank,
    senses,
)


def write_inventory(tmp_path, data):
    path = tmp_path / "inventory.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


class TestLoadInventory:
    def test_touch_fixture(self, tmp_path, touch_inventory_dict):
        inv = load_inventory(write_inventory(tmp_path, touch_inventory_dict))
        entries = senses(inv, "touch")
        assert len(entries) == 6
        assert entries[0].rank == 1
        assert entries[0].definition.startswith("make physical contact")

    def test_singleton_inventory(self, tmp_path):
        data = {
            "verbs": {
                "jump": {
                    "class": "motion",
                    "senses": [
                        {
                            "id": "jump.01",
                            "definition": "propel oneself upward",
                            "examples": [],
                            "depictable": True,
                        }
                    ],
                }
            }
        }
        inv = load_inventory(write_inventory(tmp_path, data))
        assert list(inv.verbs) == ["jump"]
        assert len(senses(inv, "jump")) == 1
        assert inv.verb_class["jump"] == "motion"

    def test_duplicate_sense_id_rejected(self, tmp_path):
        data = {
            "verbs": {
                "run": {
                    "class": "motion",
                    "senses": [
                        {"id": "run.01", "definition": "a", "examples": [], "depictable": True},
                        {"id": "run.01", "definition": "b", "examples": [], "depictable": True},
                    ],
                }
            }
        }
        with pytest.raises(FormatError, match="duplicate sense id"):
            load_inventory(write_inventory(tmp_path, data))

    def test_empty_definition_rejected(self, tmp_path):
        data = {
            "verbs": {
                "run": {
                    "class": "motion",
                    "senses": [
                        {"id": "run.01", "definition": "  ", "examples": [], "depictable": True}
                    ],
                }
            }
        }
        with pytest.raises(FormatError, match="definition"):
            load_inventory(write_inventory(tmp_path, data))

    def test_missing_class_rejected(self, tmp_path):
        data = {
            "verbs": {
                "run": {
                    "senses": [
                        {"id": "run.01", "definition": "x", "examples": [], "depictable": True}
                    ]
                }
            }
        }
        with pytest.raises(FormatError, match="class"):
            load_inventory(write_inventory(tmp_path, data))

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"verbs": {\n  broken\n}}', encoding="utf-8")
        with pytest.raises(FormatError, match="line 2"):
            load_inventory(path)


class TestSenses:
    def test_all_senses_in_rank_order(self, touch_inventory):
        entries = senses(touch_inventory, "touch", depictable_only=False)
        assert [s.rank for s in entries] == [1, 2, 3, 4, 5, 6]

    def test_depictable_filter(self, touch_inventory):
        entries = senses(touch_inventory, "touch", depictable_only=True)
        assert [s.rank for s in entries] == [1, 3]
        assert [s.sense_id for s in entries] == ["touch.01", "touch.03"]

    def test_unknown_verb(self, touch_inventory):
        with pytest.raises(UnknownVerbError):
            senses(touch_inventory, "zzz")

    def test_filtered_is_subsequence(self, touch_inventory):
        full = [s.sense_id for s in senses(touch_inventory, "touch")]
        filtered = [s.sense_id for s in senses(touch_inventory, "touch", depictable_only=True)]
        it = iter(full)
        assert all(sid in it for sid in filtered)

    def test_sense_rank_lookup(self, touch_inventory):
        assert sense_rank(touch_inventory, "touch", "touch.03") == 3
        assert get_sense(touch_inventory, "touch", "touch.06").depictable is False
        with pytest.raises(UnknownVerbError):
            sense_rank(touch_inventory, "touch", "touch.99")


class TestRoundTrip:
    def test_save_load_identity(self, tmp_path, touch_inventory):
        path = tmp_path / "out.json"
        save_inventory(touch_inventory, path)
        assert load_inventory(path) == touch_inventory

    def test_random_inventories_round_trip(self, tmp_path):
        rng = np.random.default_rng(7)
        for i in range(25):
            inv = random_inventory(rng)
            path = tmp_path / f"inv_{i}.json"
            save_inventory(inv, path)
            assert load_inventory(path) == inv

    def test_to_dict_matches_source(self, touch_inventory_dict):
        inv = parse_inventory(touch_inventory_dict)
        assert inventory_to_dict(inv) == touch_inventory_dict
