"""Sense inventory: verbs with ordered sense entries.

The dictionary is a JSON file:

    {"verbs": {"<lemma>": {"class": "motion" | "nonmotion",
                           "senses": [{"id": str, "definition": str,
                                       "examples": [str], "depictable": bool},
                                      ...]}}}

Sense order in the array defines rank (1 = first-listed sense). The loaded
inventory is immutable after load and safe for concurrent reads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import FormatError, UnknownVerbError

VERB_CLASSES = ("motion", "nonmotion")


@dataclass(frozen=True)
class SenseEntry:
    sense_id: str
    rank: int
    definition: str
    examples: tuple[str, ...]
    depictable: bool


@dataclass
class SenseInventory:
    verbs: dict[str, list[SenseEntry]]
    verb_class: dict[str, str]

    def __contains__(self, verb: str) -> bool:
        return verb in self.verbs


def parse_inventory(data) -> SenseInventory:
    """Validate a decoded inventory document and build a SenseInventory."""
    if not isinstance(data, dict) or not isinstance(data.get("verbs"), dict):
        raise FormatError("inventory root must be an object with a 'verbs' map")
    verbs: dict[str, list[SenseEntry]] = {}
    classes: dict[str, str] = {}
    for lemma, entry in data["verbs"].items():
        if not isinstance(entry, dict):
            raise FormatError(f"verb '{lemma}': entry must be an object")
        vclass = entry.get("class")
        if vclass not in VERB_CLASSES:
            raise FormatError(
                f"verb '{lemma}': field 'class' must be one of {VERB_CLASSES}, got {vclass!r}"
            )
        raw_senses = entry.get("senses")
        if not isinstance(raw_senses, list) or not raw_senses:
            raise FormatError(f"verb '{lemma}': field 'senses' must be a non-empty array")
        senses_list: list[SenseEntry] = []
        seen_ids: set[str] = set()
        for i, s in enumerate(raw_senses):
            where = f"verb '{lemma}' sense [{i}]"
            if not isinstance(s, dict):
                raise FormatError(f"{where}: must be an object")
            sid = s.get("id")
            if not isinstance(sid, str) or not sid:
                raise FormatError(f"{where}: field 'id' must be a non-empty string")
            if sid in seen_ids:
                raise FormatError(f"{where}: duplicate sense id '{sid}'")
            seen_ids.add(sid)
            definition = s.get("definition")
            if not isinstance(definition, str) or not definition.strip():
                raise FormatError(f"{where}: field 'definition' must be non-empty")
            examples = s.get("examples", [])
            if not isinstance(examples, list) or any(not isinstance(e, str) for e in examples):
                raise FormatError(f"{where}: field 'examples' must be an array of strings")
            depictable = s.get("depictable")
            if not isinstance(depictable, bool):
                raise FormatError(f"{where}: field 'depictable' must be a boolean")
            senses_list.append(
                SenseEntry(
                    sense_id=sid,
                    rank=i + 1,
                    definition=definition,
                    examples=tuple(examples),
                    depictable=depictable,
                )
            )
        verbs[lemma] = senses_list
        classes[lemma] = vclass
    return SenseInventory(verbs=verbs, verb_class=classes)


def load_inventory(path) -> SenseInventory:
    """Load and validate an inventory JSON file."""
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    return parse_inventory(data)


def inventory_to_dict(inv: SenseInventory) -> dict:
    return {
        "verbs": {
            lemma: {
                "class": inv.verb_class[lemma],
                "senses": [
                    {
                        "id": s.sense_id,
                        "definition": s.definition,
                        "examples": list(s.examples),
                        "depictable": s.depictable,
                    }
                    for s in sorted(entries, key=lambda s: s.rank)
                ],
            }
            for lemma, entries in inv.verbs.items()
        }
    }


def save_inventory(inv: SenseInventory, path) -> None:
    """Serialize back to the inventory JSON format (round-trips with load)."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(inventory_to_dict(inv), f, ensure_ascii=False, indent=2)
        f.write("\n")


def senses(inv: SenseInventory, verb: str, depictable_only: bool = False) -> list[SenseEntry]:
    """Sense entries of a verb in rank order, optionally depictable ones only."""
    if verb not in inv.verbs:
        raise UnknownVerbError(f"verb '{verb}' not in inventory")
    entries = sorted(inv.verbs[verb], key=lambda s: s.rank)
    if depictable_only:
        entries = [s for s in entries if s.depictable]
    return entries


def get_sense(inv: SenseInventory, verb: str, sense_id: str) -> SenseEntry:
    for s in senses(inv, verb):
        if s.sense_id == sense_id:
            return s
    raise UnknownVerbError(f"verb '{verb}' has no sense '{sense_id}'")


def sense_rank(inv: SenseInventory, verb: str, sense_id: str) -> int:
    return get_sense(inv, verb, sense_id).rank
