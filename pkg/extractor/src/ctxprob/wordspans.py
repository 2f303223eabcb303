"""Punctuation-aware word segmentation with character spans."""

from __future__ import annotations

import unicodedata

_INTERNAL_MARKS = {"'", "’", "-", "‐", "‑"}


def _is_word_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("L", "M", "N")


def word_spans(text: str) -> list[tuple[str, int, int]]:
    """(surface, start, end) for every word; punctuation-only runs are skipped.

    Apostrophes and hyphens stay inside a word when flanked by word
    characters, mirroring how the downstream consumer segments words.
    """
    spans: list[tuple[str, int, int]] = []
    start: int | None = None
    n = len(text)
    for i, ch in enumerate(text):
        if _is_word_char(ch):
            if start is None:
                start = i
        elif (ch in _INTERNAL_MARKS and start is not None
              and i + 1 < n and _is_word_char(text[i + 1])):
            continue
        else:
            if start is not None:
                spans.append((text[start:i], start, i))
                start = None
    if start is not None:
        spans.append((text[start:], start, n))
    return spans
