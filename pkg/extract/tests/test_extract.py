import json

import numpy as np
import pytest

from vsdextract.backends import (
    ImageReadError,
    StubCaptionBackend,
    StubFeatureBackend,
    StubObjectBackend,
    caption_backend,
)
from vsdextract.extract import (
    export_embeddings,
    extract_image_features,
    extract_pred_descriptions,
    extract_pred_objects,
)
from vsdextract.manifest import ManifestError, load_manifest


class TestManifest:
    def test_load_and_resolve(self, manifest_path):
        manifest = load_manifest(manifest_path)
        assert set(manifest.images) == {"img_red", "img_green", "img_blue"}
        assert manifest.feature_backend == "stub"
        assert manifest.pred_threshold == 0.2

    def test_missing_image_file(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text('{"images": {"x": "no/such/file.png"}}', encoding="utf-8")
        with pytest.raises(ManifestError, match="no such file"):
            load_manifest(str(path))

    def test_bad_threshold(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text('{"images": {}, "pred_threshold": 3}', encoding="utf-8")
        with pytest.raises(ManifestError, match="pred_threshold"):
            load_manifest(str(path))


class TestFeatures:
    def test_three_images_default_dim(self, manifest_path, tmp_path):
        out = tmp_path / "features.vsdf"
        produced, errors = extract_image_features(
            load_manifest(manifest_path), StubFeatureBackend(), out
        )
        assert produced == 3 and errors == []
        data = out.read_bytes()
        assert data[:4] == b"VSDF"
        dim = int.from_bytes(data[8:12], "little")
        count = int.from_bytes(data[12:16], "little")
        assert dim == 4096 and count == 3

    def test_empty_manifest_header_only(self, empty_manifest, tmp_path):
        out = tmp_path / "features.vsdf"
        produced, errors = extract_image_features(
            load_manifest(empty_manifest), StubFeatureBackend(dim=16), out
        )
        assert produced == 0 and errors == []
        assert out.stat().st_size == 16  # magic + version + dim + count

    def test_corrupt_image_recorded_others_proceed(self, manifest_with_corrupt, tmp_path):
        out = tmp_path / "features.vsdf"
        produced, errors = extract_image_features(
            load_manifest(manifest_with_corrupt), StubFeatureBackend(dim=8), out
        )
        assert produced == 2
        assert [image_id for image_id, _ in errors] == ["img_bad"]

    def test_deterministic_across_runs(self, manifest_path, tmp_path):
        manifest = load_manifest(manifest_path)
        out1, out2 = tmp_path / "a.vsdf", tmp_path / "b.vsdf"
        extract_image_features(manifest, StubFeatureBackend(dim=32), out1)
        extract_image_features(manifest, StubFeatureBackend(dim=32), out2)
        assert out1.read_bytes() == out2.read_bytes()


class TestObjects:
    def test_scores_in_unit_interval(self, manifest_path, tmp_path):
        out = tmp_path / "objects.jsonl"
        produced, errors = extract_pred_objects(
            load_manifest(manifest_path), StubObjectBackend(), out
        )
        assert produced == 3 and not errors
        lines = [json.loads(l) for l in out.read_text().splitlines()]
        assert len(lines) == 3
        for line in lines:
            assert line["objects"], "expected at least one prediction"
            for label, score in line["objects"]:
                assert isinstance(label, str)
                assert 0.0 <= score <= 1.0

    def test_two_image_manifest_two_lines(self, tmp_path, manifest_path):
        manifest = load_manifest(manifest_path)
        manifest.images.pop("img_red")
        out = tmp_path / "objects.jsonl"
        produced, _ = extract_pred_objects(manifest, StubObjectBackend(), out)
        assert produced == 2
        assert len(out.read_text().splitlines()) == 2

    def test_deterministic(self, manifest_path, tmp_path):
        manifest = load_manifest(manifest_path)
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        extract_pred_objects(manifest, StubObjectBackend(), a)
        extract_pred_objects(manifest, StubObjectBackend(), b)
        assert a.read_text() == b.read_text()


class TestDescriptions:
    def test_default_three_per_image(self, manifest_path, tmp_path):
        out = tmp_path / "captions.jsonl"
        produced, errors = extract_pred_descriptions(
            load_manifest(manifest_path), StubCaptionBackend(), out
        )
        assert produced == 3 and not errors
        for line in out.read_text().splitlines():
            assert len(json.loads(line)["descriptions"]) == 3

    def test_k_one(self, manifest_path, tmp_path):
        out = tmp_path / "captions.jsonl"
        extract_pred_descriptions(
            load_manifest(manifest_path), StubCaptionBackend(), out, k=1
        )
        for line in out.read_text().splitlines():
            assert len(json.loads(line)["descriptions"]) == 1

    def test_empty_manifest(self, empty_manifest, tmp_path):
        out = tmp_path / "captions.jsonl"
        produced, errors = extract_pred_descriptions(
            load_manifest(empty_manifest), StubCaptionBackend(), out
        )
        assert produced == 0 and not errors
        assert out.read_text() == ""

    def test_plugin_spec(self, manifest_path, tmp_path):
        backend = caption_backend("caption_plugin:describe")
        out = tmp_path / "captions.jsonl"
        produced, errors = extract_pred_descriptions(
            load_manifest(manifest_path), backend, out, k=2
        )
        assert produced == 3 and not errors
        first = json.loads(out.read_text().splitlines()[0])
        assert first["descriptions"] == ["plugin caption 0", "plugin caption 1"]


class TestBackendErrors:
    def test_corrupt_image_raises(self):
        import os

        from conftest import FIXTURES

        with pytest.raises(ImageReadError):
            StubFeatureBackend(dim=4).features(os.path.join(FIXTURES, "corrupt.png"))


class TestExportEmbeddings:
    def test_text_format_export(self, tmp_path):
        src = tmp_path / "w2v.txt"
        src.write_text("3 2\nCat 1.0 0.0\ncat 9.0 9.0\nDog 0.0 1.0\n", encoding="utf-8")
        out = tmp_path / "emb.txt"
        count, dim = export_embeddings(src, out)
        assert (count, dim) == (2, 2)  # lowercase dedup, first wins
        lines = out.read_text().splitlines()
        assert lines[0] == "2 2"
        assert lines[1].startswith("cat 1.0")

    def test_binary_format_export(self, tmp_path):
        src = tmp_path / "w2v.bin"
        with open(src, "wb") as f:
            f.write(b"2 3\n")
            f.write(b"alpha ")
            f.write(np.array([1.5, -2.0, 0.25], dtype="<f4").tobytes())
            f.write(b"beta ")
            f.write(np.array([0.5, 0.5, 0.5], dtype="<f4").tobytes())
        out = tmp_path / "emb.txt"
        count, dim = export_embeddings(src, out)
        assert (count, dim) == (2, 3)
        lines = out.read_text().splitlines()
        assert lines[0] == "2 3"
        token, *values = lines[1].split(" ")
        assert token == "alpha"
        assert [float(v) for v in values] == [1.5, -2.0, 0.25]

    def test_limit(self, tmp_path):
        src = tmp_path / "w2v.txt"
        src.write_text("3 1\na 1\nb 2\nc 3\n", encoding="utf-8")
        out = tmp_path / "emb.txt"
        count, _ = export_embeddings(src, out, limit=2)
        assert count == 2
