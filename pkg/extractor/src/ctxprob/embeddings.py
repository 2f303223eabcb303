"""Static embedding export in word2vec text format.

Two sources: subset an existing word2vec file, or the deterministic hashed
source that gives every word-like token a stable unit-scale vector (and
punctuation-only tokens an all-zero vector, which the consumer filters).
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .wordspans import word_spans

DEFAULT_DIM = 300


def _hashed_vector(token: str, dim: int) -> np.ndarray:
    if not word_spans(token):  # punctuation-only tokens get zero vectors
        return np.zeros(dim)
    digest = hashlib.sha256(token.encode("utf-8")).digest()
    seed = int.from_bytes(digest[:8], "little")
    rng = np.random.default_rng(seed)
    return rng.standard_normal(dim)


def export_embeddings(vocab: list[str], out_path: str | Path,
                      source_path: str | Path | None = None,
                      dim: int = DEFAULT_DIM) -> int:
    """Write one vector per requested token; returns the number written.

    With a source file, tokens are looked up there (missing tokens come out
    all-zero, matching how absent vocabulary behaves downstream); otherwise
    the hashed source supplies them. Repeated exports are byte-identical.
    """
    source: dict[str, str] = {}
    if source_path is not None:
        with open(source_path, encoding="utf-8") as handle:
            header = handle.readline().split()
            if len(header) != 2:
                raise ValueError(f"{source_path}: expected '<count> <dim>' header")
            dim = int(header[1])
            for line in handle:
                parts = line.rstrip("\n").split(" ", 1)
                if len(parts) == 2:
                    source[parts[0]] = parts[1]

    lines = [f"{len(vocab)} {dim}"]
    for token in vocab:
        if source_path is not None:
            values = source.get(token) or " ".join(["0"] * dim)
            lines.append(f"{token} {values}")
        else:
            vec = _hashed_vector(token, dim)
            lines.append(token + " " + " ".join(f"{x:.6f}" for x in vec))
    Path(out_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return len(vocab)
