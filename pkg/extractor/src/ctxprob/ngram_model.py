"""Deterministic count-based sentence scorers, trained from a bundled corpus.

Not a neural model: an interpolated neighbor-count scorer over subword
pieces that fills the same contract as a pretrained network (probability of
the true piece at a position, given bidirectional or left-only context).
It exists so extraction runs reproducibly with no downloads; pass a real
model id to use the transformers backend instead.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .subwords import BOS, EOS, SubwordTokenizer
from .wordspans import word_spans

SMOOTHING = 0.1
MASKED_WEIGHTS = (0.4, 0.4, 0.2)  # left bigram, right bigram, unigram
CAUSAL_WEIGHTS = (0.7, 0.3)       # left bigram, unigram


def bundled_corpus_text() -> str:
    return (resources.files("ctxprob") / "data" / "pretrain_corpus.txt").read_text("utf-8")


@dataclass
class NgramScorer:
    """Scores each subword position from neighbor counts; single precision out."""

    tokenizer: SubwordTokenizer
    mode: str
    unigram: Counter
    left: dict[str, Counter]
    right: dict[str, Counter]
    total: int
    vocab_size: int

    @classmethod
    def train(cls, sentences: list[str], mode: str) -> "NgramScorer":
        chunks = [w for line in sentences for w, _, _ in word_spans(line)]
        punct_chunks = [c for line in sentences for c in line.split()]
        tokenizer = SubwordTokenizer.train(chunks + punct_chunks)
        unigram: Counter = Counter()
        left: dict[str, Counter] = {}
        right: dict[str, Counter] = {}
        for line in sentences:
            pieces = [p for p, _, _ in tokenizer.tokenize_with_offsets(line)]
            seq = [BOS, *pieces, EOS]
            for i in range(1, len(seq) - 1):
                tok = seq[i]
                unigram[tok] += 1
                left.setdefault(seq[i - 1], Counter())[tok] += 1
                right.setdefault(seq[i + 1], Counter())[tok] += 1
        return cls(tokenizer=tokenizer, mode=mode, unigram=unigram, left=left,
                   right=right, total=sum(unigram.values()),
                   vocab_size=len(tokenizer.vocab) + 3)

    @classmethod
    def pretrained(cls, mode: str) -> "NgramScorer":
        lines = [ln.strip() for ln in bundled_corpus_text().splitlines()
                 if ln.strip() and not ln.startswith("#")]
        return cls.train(lines, mode=mode)

    def _cond(self, table: dict[str, Counter], context: str, token: str) -> float:
        counts = table.get(context)
        seen = counts[token] if counts else 0
        ctx_total = sum(counts.values()) if counts else 0
        return (seen + SMOOTHING) / (ctx_total + SMOOTHING * self.vocab_size)

    def _uni(self, token: str) -> float:
        return (self.unigram[token] + SMOOTHING) / (self.total + SMOOTHING * self.vocab_size)

    def score(self, text: str) -> list[tuple[int, int, float]]:
        """(char_start, char_end, probability) per subword of the text."""
        pieces = self.tokenizer.tokenize_with_offsets(text)
        seq = [BOS, *[p for p, _, _ in pieces], EOS]
        out = []
        for pos, (piece, start, end) in enumerate(pieces, start=1):
            if self.mode == "masked":
                w_l, w_r, w_u = MASKED_WEIGHTS
                prob = (w_l * self._cond(self.left, seq[pos - 1], piece)
                        + w_r * self._cond(self.right, seq[pos + 1], piece)
                        + w_u * self._uni(piece))
            else:
                w_l, w_u = CAUSAL_WEIGHTS
                prob = (w_l * self._cond(self.left, seq[pos - 1], piece)
                        + w_u * self._uni(piece))
            out.append((start, end, float(np.float32(prob))))
        return out

    def subword_count(self, text: str) -> int:
        return len(self.tokenizer.tokenize_with_offsets(text)) + 2  # BOS/EOS
