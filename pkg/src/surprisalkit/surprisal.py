"""Sentence- and text-level surprisal under three conditions, with reduction indices.

Conditions: frequency-based (context-free unigram), contextual (model
conditioned on the sentence), and contextual over reversed word order. A
sentence missing any condition is excluded from all three, so the per-word
normalizations stay comparable over the same word mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .conllu import Document
from .providers import ContextualStore, FrequencyTable, check_alignment

CONDITIONS = ("freq", "ctx", "ctx_rev")


@dataclass
class SentenceSurprisal:
    sent_idx: int
    n_words: int
    s_freq_bits: float
    s_ctx_bits: float | None = None
    s_ctx_rev_bits: float | None = None

    @property
    def included(self) -> bool:
        return (self.s_ctx_bits is not None and self.s_ctx_rev_bits is not None
                and self.n_words > 0)


@dataclass
class TextSurprisalSummary:
    doc_id: str
    language: str
    n_sentences_included: int
    n_words_total: int
    t_freq: float
    t_ctx: float
    t_ctx_rev: float
    diff_fb: float
    diff_rev: float


@dataclass
class DocumentExclusion:
    doc_id: str
    reason: str


def sentence_freq_surprisal(words: list[str], table: FrequencyTable) -> float:
    """Sum of per-word floored-frequency surprisal, in bits."""
    if not words:
        raise ValueError("cannot score an empty word list")
    return -sum(math.log2(table.lookup(w)) for w in words)


def text_normalized_surprisal(sentences: list[SentenceSurprisal], condition: str) -> float:
    """Summed sentence surprisal of one condition per word, over included sentences."""
    if condition not in CONDITIONS:
        raise ValueError(f"condition must be one of {CONDITIONS}")
    included = [s for s in sentences if s.included]
    if not included:
        raise ValueError("no included sentences")
    total_words = sum(s.n_words for s in included)
    if condition == "freq":
        total = sum(s.s_freq_bits for s in included)
    elif condition == "ctx":
        total = sum(s.s_ctx_bits for s in included)
    else:
        total = sum(s.s_ctx_rev_bits for s in included)
    return total / total_words


def reduction_indices(t_freq: float, t_ctx: float, t_ctx_rev: float) -> tuple[float, float]:
    """Normalized reduction from frequency to context, and cost of reversal.

    Both lie in (-inf, 1]: positive when context compresses (or reversal
    inflates) per-word surprisal, zero when it makes no difference.
    """
    if t_freq <= 0:
        raise ValueError("frequency surprisal per word must be positive")
    if t_ctx_rev <= 0:
        raise ValueError("reversed contextual surprisal per word must be positive")
    return (t_freq - t_ctx) / t_freq, (t_ctx_rev - t_ctx) / t_ctx_rev


def score_sentences(doc: Document, table: FrequencyTable,
                    store: ContextualStore) -> list[SentenceSurprisal]:
    """Per-sentence surprisal under all conditions the store can pair up."""
    report = check_alignment(store, doc)
    scored: list[SentenceSurprisal] = []
    for sent in doc.sentences:
        words = sent.words
        if not words:
            continue
        row = SentenceSurprisal(
            sent_idx=sent.sent_idx,
            n_words=len(words),
            s_freq_bits=sentence_freq_surprisal(words, table))
        if sent.sent_idx in report.usable_sent_idxs:
            row.s_ctx_bits = store.get(doc.doc_id, sent.sent_idx, "orig").total_bits()
            row.s_ctx_rev_bits = store.get(doc.doc_id, sent.sent_idx, "rev").total_bits()
        scored.append(row)
    return scored


def summarize_text(doc: Document, table: FrequencyTable,
                   store: ContextualStore) -> TextSurprisalSummary | DocumentExclusion:
    """Text-level normalized surprisal triple and reduction indices.

    Sentences without a matching orig and rev contextual record are excluded
    from every condition (paired exclusion). A document with no usable
    sentence comes back as an exclusion record rather than a summary.
    """
    sentences = score_sentences(doc, table, store)
    if not any(s.included for s in sentences):
        return DocumentExclusion(doc_id=doc.doc_id, reason="no paired contextual data")
    t_freq = text_normalized_surprisal(sentences, "freq")
    t_ctx = text_normalized_surprisal(sentences, "ctx")
    t_ctx_rev = text_normalized_surprisal(sentences, "ctx_rev")
    if t_freq <= 0 or t_ctx_rev <= 0:
        return DocumentExclusion(doc_id=doc.doc_id, reason="degenerate zero surprisal")
    diff_fb, diff_rev = reduction_indices(t_freq, t_ctx, t_ctx_rev)
    included = [s for s in sentences if s.included]
    return TextSurprisalSummary(
        doc_id=doc.doc_id,
        language=doc.language,
        n_sentences_included=len(included),
        n_words_total=sum(s.n_words for s in included),
        t_freq=t_freq,
        t_ctx=t_ctx,
        t_ctx_rev=t_ctx_rev,
        diff_fb=diff_fb,
        diff_rev=diff_rev)
