"""Greedy longest-match subword tokenizer with character offsets.

The vocabulary holds whole lowercased words plus every character seen in
training, so any text tokenizes: known words come out whole, unknown words
fall apart into known pieces, and characters never seen at all become the
unknown marker (with their span preserved for alignment).
"""

from __future__ import annotations

from dataclasses import dataclass, field

UNK = "[UNK]"
BOS = "[BOS]"
EOS = "[EOS]"
SPECIALS = (UNK, BOS, EOS)

MAX_PIECE_LEN = 24


@dataclass
class SubwordTokenizer:
    vocab: set[str] = field(default_factory=set)

    @classmethod
    def train(cls, chunks: list[str]) -> "SubwordTokenizer":
        """Vocabulary from whitespace-free chunks: whole forms plus characters."""
        vocab: set[str] = set()
        for chunk in chunks:
            lowered = chunk.lower()
            if len(lowered) <= MAX_PIECE_LEN:
                vocab.add(lowered)
            vocab.update(lowered)
        return cls(vocab=vocab)

    def tokenize_with_offsets(self, text: str) -> list[tuple[str, int, int]]:
        """(piece, start, end) over the text; whitespace separates chunks and a
        piece never crosses a chunk boundary."""
        pieces: list[tuple[str, int, int]] = []
        i = 0
        n = len(text)
        while i < n:
            if text[i].isspace():
                i += 1
                continue
            end = i
            while end < n and not text[end].isspace():
                end += 1
            pieces.extend(self._tokenize_chunk(text, i, end))
            i = end
        return pieces

    def _tokenize_chunk(self, text: str, start: int, end: int):
        out = []
        i = start
        while i < end:
            match_len = 0
            limit = min(end - i, MAX_PIECE_LEN)
            lowered = text[i:i + limit].lower()
            if len(lowered) != limit:  # length-changing casefolds break offsets
                lowered = "".join(c.lower() if len(c.lower()) == 1 else c
                                  for c in text[i:i + limit])
            for length in range(limit, 0, -1):
                if lowered[:length] in self.vocab:
                    match_len = length
                    break
            if match_len == 0:
                out.append((UNK, i, i + 1))
                i += 1
            else:
                out.append((lowered[:match_len], i, i + match_len))
                i += match_len
        return out
