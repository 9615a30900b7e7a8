import numpy as np
import pytest

from verbsense.embeddings import EmbeddingTable
from verbsense.inventory import parse_inventory

TOUCH_SENSES = [
    {
        "id": "touch.01",
        "definition": "make physical contact with, possibly with the effect of physically manipulating",
        "examples": ["They touched their fingertips together and smiled."],
        "depictable": True,
    },
    {
        "id": "touch.02",
        "definition": "affect someone emotionally",
        "examples": ["The president's speech touched a chord with voters."],
        "depictable": False,
    },
    {
        "id": "touch.03",
        "definition": "be or come in contact without control",
        "examples": ["They sat so close that their arms touched."],
        "depictable": True,
    },
    {
        "id": "touch.04",
        "definition": "make reference to, involve oneself with",
        "examples": ["They had discussions that touched on the situation."],
        "depictable": False,
    },
    {
        "id": "touch.05",
        "definition": "achieve a value or quality",
        "examples": ["Nothing can touch cotton for durability."],
        "depictable": False,
    },
    {
        "id": "touch.06",
        "definition": "tinge; repair or improve the appearance of",
        "examples": ["He touched up the paintings to get the colors right."],
        "depictable": False,
    },
]


@pytest.fixture
def touch_inventory_dict():
    return {"verbs": {"touch": {"class": "nonmotion", "senses": TOUCH_SENSES}}}


@pytest.fixture
def touch_inventory(touch_inventory_dict):
    return parse_inventory(touch_inventory_dict)


@pytest.fixture
def cat_dog_table():
    return EmbeddingTable(
        dim=2,
        vectors={
            "cat": np.array([1.0, 0.0]),
            "dog": np.array([0.0, 1.0]),
        },
    )
