import json
import os

import pytest

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")

IMAGE_IDS = ("img_blue", "img_green", "img_red")


@pytest.fixture
def manifest_path(tmp_path):
    doc = {
        "images": {
            "img_red": os.path.join(FIXTURES, "red_square.png"),
            "img_green": os.path.join(FIXTURES, "green_circleish.png"),
            "img_blue": os.path.join(FIXTURES, "blue_stripes.png"),
        }
    }
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


@pytest.fixture
def manifest_with_corrupt(tmp_path):
    doc = {
        "images": {
            "img_red": os.path.join(FIXTURES, "red_square.png"),
            "img_bad": os.path.join(FIXTURES, "corrupt.png"),
            "img_blue": os.path.join(FIXTURES, "blue_stripes.png"),
        }
    }
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


@pytest.fixture
def empty_manifest(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text('{"images": {}}', encoding="utf-8")
    return str(path)
