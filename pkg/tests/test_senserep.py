import numpy as np
import pytest

from verbsense.errors import MissingKeyError, NoCoverageError
from verbsense.features import FeatureStore
from verbsense.inventory import SenseEntry
from verbsense.senserep import (
    build_text_sense_rep,
    build_visual_sense_rep,
    sense_tokens,
)


def entry(definition, examples=(), sense_id="v.01", rank=1):
    return SenseEntry(
        sense_id=sense_id,
        rank=rank,
        definition=definition,
        examples=tuple(examples),
        depictable=True,
    )


class TestTextSenseRep:
    def test_definition_plus_example_pooled(self, cat_dog_table):
        vec = build_text_sense_rep(entry("cat", ["dog"]), cat_dog_table)
        np.testing.assert_allclose(vec, [0.5, 0.5])

    def test_all_stopwords_raises(self, cat_dog_table):
        with pytest.raises(NoCoverageError):
            build_text_sense_rep(entry("the of and", ["to a"]), cat_dog_table)

    def test_duplicate_tokens_kept(self, cat_dog_table):
        vec = build_text_sense_rep(entry("cat cat"), cat_dog_table)
        np.testing.assert_array_equal(vec, [1.0, 0.0])
        # and they shift the mean when mixed with another token
        vec2 = build_text_sense_rep(entry("cat cat dog"), cat_dog_table)
        np.testing.assert_allclose(vec2, [2.0 / 3.0, 1.0 / 3.0])

    def test_examples_weigh_like_definition_tokens(self, cat_dog_table):
        pooled = sense_tokens(entry("cat dog", ["dog dog"]), cat_dog_table)
        assert pooled == ["cat", "dog", "dog", "dog"]

    def test_output_dim_matches_table(self, cat_dog_table):
        vec = build_text_sense_rep(entry("cat dog"), cat_dog_table)
        assert vec.shape == (cat_dog_table.dim,)


class TestVisualSenseRep:
    @pytest.fixture
    def store(self):
        return FeatureStore.from_entries(2, {"a": [2.0, 0.0], "b": [0.0, 2.0]})

    def test_mean_over_listed_images(self, store):
        vec = build_visual_sense_rep("s1", {"s1": ["a", "b"]}, store)
        np.testing.assert_allclose(vec, [1.0, 1.0])

    def test_single_image_identity(self, store):
        vec = build_visual_sense_rep("s1", {"s1": ["a"]}, store)
        np.testing.assert_allclose(vec, [2.0, 0.0])

    def test_unknown_image_key(self, store):
        with pytest.raises(MissingKeyError, match="nope"):
            build_visual_sense_rep("s1", {"s1": ["nope"]}, store)

    def test_sense_missing_from_manifest(self, store):
        with pytest.raises(MissingKeyError, match="s2"):
            build_visual_sense_rep("s2", {"s1": ["a"]}, store)

    def test_empty_image_list(self, store):
        with pytest.raises(MissingKeyError, match="no images"):
            build_visual_sense_rep("s1", {"s1": []}, store)

    def test_permutation_invariant(self, store):
        forward = build_visual_sense_rep("s1", {"s1": ["a", "b"]}, store)
        backward = build_visual_sense_rep("s1", {"s1": ["b", "a"]}, store)
        np.testing.assert_allclose(forward, backward, atol=1e-12)

    def test_output_dim_matches_store(self, store):
        vec = build_visual_sense_rep("s1", {"s1": ["a"]}, store)
        assert vec.shape == (store.dim,)
