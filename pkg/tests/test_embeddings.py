import numpy as np
import pytest
from hypothesis import given, strategies as st

from verbsense.embeddings import (
    EmbeddingTable,
    embed_text,
    load_embeddings,
    tokenize,
    tokenize_content,
)
from verbsense.errors import FormatError, NoCoverageError


def write(tmp_path, text):
    path = tmp_path / "vectors.txt"
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadEmbeddings:
    def test_basic_parse(self, tmp_path):
        table = load_embeddings(write(tmp_path, "2 2\ncat 1 0\ndog 0 1\n"))
        assert table.dim == 2
        assert set(table.vectors) == {"cat", "dog"}
        np.testing.assert_array_equal(table.vectors["cat"], [1.0, 0.0])

    def test_row_dimension_mismatch(self, tmp_path):
        with pytest.raises(FormatError, match="line 2"):
            load_embeddings(write(tmp_path, "2 2\ncat 1 0 5\ndog 0 1\n"))

    def test_empty_file(self, tmp_path):
        with pytest.raises(FormatError, match="empty"):
            load_embeddings(write(tmp_path, ""))

    def test_count_mismatch(self, tmp_path):
        with pytest.raises(FormatError, match="declares 3"):
            load_embeddings(write(tmp_path, "3 2\ncat 1 0\ndog 0 1\n"))

    def test_duplicate_token(self, tmp_path):
        with pytest.raises(FormatError, match="duplicate"):
            load_embeddings(write(tmp_path, "2 2\ncat 1 0\nCat 0 1\n"))

    def test_non_numeric_value(self, tmp_path):
        with pytest.raises(FormatError, match="line 2"):
            load_embeddings(write(tmp_path, "1 2\ncat 1 x\n"))


class TestTokenize:
    def test_stopwords_removed(self):
        assert tokenize("They touched their fingertips.") == ["touched", "fingertips"]

    def test_empty_input(self):
        assert tokenize("") == []

    def test_case_folding_of_stopwords(self):
        assert tokenize("The THE the") == []

    def test_short_tokens_dropped(self):
        assert tokenize("x go stage") == ["go", "stage"]

    def test_table_stopwords_respected(self, cat_dog_table):
        table = EmbeddingTable(
            dim=2, vectors=dict(cat_dog_table.vectors), stopwords=frozenset({"cat"})
        )
        assert tokenize_content("cat dog", table) == ["dog"]


class TestEmbedText:
    def test_mean_of_two(self, cat_dog_table):
        vec, coverage = embed_text(["cat", "dog"], cat_dog_table)
        np.testing.assert_allclose(vec, [0.5, 0.5])
        assert coverage == 2

    def test_singleton_identity(self, cat_dog_table):
        vec, coverage = embed_text(["cat"], cat_dog_table)
        np.testing.assert_array_equal(vec, [1.0, 0.0])
        assert coverage == 1

    def test_all_oov_raises(self, cat_dog_table):
        with pytest.raises(NoCoverageError):
            embed_text(["xyz"], cat_dog_table)

    def test_empty_raises(self, cat_dog_table):
        with pytest.raises(NoCoverageError):
            embed_text([], cat_dog_table)

    def test_oov_tokens_skipped(self, cat_dog_table):
        vec, coverage = embed_text(["cat", "qqq", "dog"], cat_dog_table)
        np.testing.assert_allclose(vec, [0.5, 0.5])
        assert coverage == 2

    @given(st.permutations(["cat", "dog", "cat", "dog", "dog"]))
    def test_permutation_invariant(self, tokens):
        table = EmbeddingTable(
            dim=2, vectors={"cat": np.array([1.0, 0.25]), "dog": np.array([-0.5, 1.0])}
        )
        base, _ = embed_text(["cat", "dog", "cat", "dog", "dog"], table)
        vec, _ = embed_text(tokens, table)
        np.testing.assert_allclose(vec, base, atol=1e-12)

    def test_full_duplication_leaves_mean_unchanged(self, cat_dog_table):
        tokens = ["cat", "dog", "dog"]
        once, _ = embed_text(tokens, cat_dog_table)
        twice, coverage = embed_text(tokens + tokens, cat_dog_table)
        np.testing.assert_allclose(twice, once, atol=1e-12)
        assert coverage == 6

    def test_output_dim_and_finiteness(self, cat_dog_table):
        vec, _ = embed_text(["cat", "dog"], cat_dog_table)
        assert vec.shape == (cat_dog_table.dim,)
        assert np.all(np.isfinite(vec))
