"""Word-embedding table and text-to-vector averaging.

The table is read from a plain-text file: first line ``<count> <dim>``,
then one line per token, ``<token> <f1> ... <fdim>`` (space-separated
decimals, UTF-8). Tokens are lowercase by contract.

Text is reduced to content tokens (lowercased, split on non-alphanumeric,
short tokens and stopwords dropped) and represented by the arithmetic mean
of the in-vocabulary token vectors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, NoCoverageError
from .stopwords import STOPWORDS

_TOKEN_RE = re.compile(r"[a-z0-9]+")

MIN_TOKEN_LEN = 2


@dataclass
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray]
    stopwords: frozenset = field(default=STOPWORDS)

    def __contains__(self, token: str) -> bool:
        return token in self.vectors


def load_embeddings(path) -> EmbeddingTable:
    """Parse an embedding text file into an EmbeddingTable."""
    with open(path, encoding="utf-8") as f:
        header = f.readline()
        if not header.strip():
            raise FormatError(f"{path}: empty embedding file")
        parts = header.split()
        if len(parts) != 2:
            raise FormatError(f"{path}: line 1: header must be '<count> <dim>'")
        try:
            count, dim = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise FormatError(f"{path}: line 1: non-integer header field") from e
        if count < 0 or dim < 1:
            raise FormatError(f"{path}: line 1: bad header values {count} {dim}")
        vectors: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            fields = line.rstrip("\n").split(" ")
            token = fields[0].lower()
            if len(fields) - 1 != dim:
                raise FormatError(
                    f"{path}: line {lineno}: expected {dim} values, got {len(fields) - 1}"
                )
            try:
                vec = np.array([float(x) for x in fields[1:]], dtype=np.float64)
            except ValueError as e:
                raise FormatError(f"{path}: line {lineno}: non-numeric value") from e
            if not np.all(np.isfinite(vec)):
                raise FormatError(f"{path}: line {lineno}: non-finite value")
            if token in vectors:
                raise FormatError(f"{path}: line {lineno}: duplicate token '{token}'")
            vectors[token] = vec
    if not vectors:
        raise FormatError(f"{path}: empty embedding file")
    if len(vectors) != count:
        raise FormatError(
            f"{path}: header declares {count} tokens but file has {len(vectors)}"
        )
    return EmbeddingTable(dim=dim, vectors=vectors)


def tokenize(text: str, stopwords: frozenset = STOPWORDS) -> list[str]:
    """Lowercased content tokens: split on non-alphanumeric, drop short
    tokens and stopwords. Order preserved; out-of-vocabulary tokens kept."""
    tokens = _TOKEN_RE.findall(text.lower())
    return [t for t in tokens if len(t) >= MIN_TOKEN_LEN and t not in stopwords]


def tokenize_content(text: str, table: EmbeddingTable) -> list[str]:
    return tokenize(text, table.stopwords)


def embed_text(tokens, table: EmbeddingTable) -> tuple[np.ndarray, int]:
    """Arithmetic mean of the vectors of in-vocabulary tokens.

    Returns (vector, coverage) where coverage counts the tokens actually
    used. Duplicated tokens contribute once per occurrence (multiset mean).
    Raises NoCoverageError when no token is in vocabulary, so callers can
    fall back deterministically instead of silently scoring a zero vector.
    """
    tokens = list(tokens)
    rows = [table.vectors[t] for t in tokens if t in table.vectors]
    if not rows:
        raise NoCoverageError(
            f"none of {len(tokens)} token(s) found in the embedding table"
        )
    return np.mean(np.vstack(rows), axis=0), len(rows)
