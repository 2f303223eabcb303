"""Extraction jobs: score sentences, align subwords to words, emit records.

The output is JSON Lines, one record per sentence and variant, with
word-aligned surprisal in bits. Probabilities are floored so every value is
finite, alignment uses character offsets, over-long sentences are omitted
and listed in a sidecar file, and the output file is written atomically.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from .wordspans import word_spans

PROBABILITY_FLOOR = 1e-9
VARIANTS = ("orig", "rev")


@dataclass
class ExtractionJob:
    model_id: str
    mode: str  # masked | causal
    input_paths: list[str]
    output_path: str
    variants: tuple[str, ...] = VARIANTS
    max_subwords: int = 512

    def __post_init__(self):
        if self.mode not in ("masked", "causal"):
            raise ValueError(f"mode must be masked or causal, got {self.mode!r}")
        if self.max_subwords < 8:
            raise ValueError("max_subwords must be >= 8")
        for v in self.variants:
            if v not in VARIANTS:
                raise ValueError(f"unknown variant {v!r}")


@dataclass
class SentenceEntry:
    doc_id: str
    sent_idx: int
    text: str


@dataclass
class ExtractionResult:
    records_written: int
    exclusions: list[tuple[str, int, str]] = field(default_factory=list)


def read_input_documents(paths: list[str]) -> list[SentenceEntry]:
    """Sentence-per-line text files with `# doc: <id>` headers."""
    entries: list[SentenceEntry] = []
    for path in paths:
        doc_id = Path(path).stem
        sent_idx = 0
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("doc:"):
                    doc_id = body[len("doc:"):].strip()
                    sent_idx = 0
                continue
            entries.append(SentenceEntry(doc_id=doc_id, sent_idx=sent_idx, text=line))
            sent_idx += 1
    return entries


def _nine_digits(value: float) -> float:
    return float(f"{value:.9g}")


def align_bits_to_words(scored: list[tuple[int, int, float]],
                        spans: list[tuple[str, int, int]]) -> list[float] | None:
    """Sum per-subword bits into the word whose span overlaps each subword.

    Subwords overlapping no word span carry punctuation and are skipped.
    Returns None when some word receives no subword (alignment failure).
    """
    totals = [0.0] * len(spans)
    covered = [False] * len(spans)
    w = 0
    for start, end, bits in scored:
        while w < len(spans) and spans[w][2] <= start:
            w += 1
        j = w
        while j < len(spans) and spans[j][1] < end:
            if max(start, spans[j][1]) < min(end, spans[j][2]):
                totals[j] += bits
                covered[j] = True
            j += 1
    if not all(covered):
        return None
    return totals


def score_sentence_variant(scorer, text: str,
                           spans: list[tuple[str, int, int]]) -> list[float] | None:
    scored = []
    for start, end, prob in scorer.score(text):
        prob = max(prob, PROBABILITY_FLOOR)
        scored.append((start, end, -math.log2(prob)))
    return align_bits_to_words(scored, spans)


def run_extraction(job: ExtractionJob, scorer) -> ExtractionResult:
    entries = read_input_documents(job.input_paths)
    lines: list[str] = []
    exclusions: list[tuple[str, int, str]] = []

    for entry in entries:
        spans = word_spans(entry.text)
        if not spans:
            exclusions.append((entry.doc_id, entry.sent_idx, "no words"))
            continue
        words = [s for s, _, _ in spans]
        variant_inputs: dict[str, tuple[str, list]] = {}
        if "orig" in job.variants:
            variant_inputs["orig"] = (entry.text, spans)
        if "rev" in job.variants:
            rev_text = " ".join(reversed(words))
            variant_inputs["rev"] = (rev_text, word_spans(rev_text))

        too_long = [v for v, (text, _) in variant_inputs.items()
                    if scorer.subword_count(text) > job.max_subwords]
        if too_long:
            exclusions.append((entry.doc_id, entry.sent_idx,
                               f"exceeds {job.max_subwords} subwords"))
            continue

        records = {}
        failed = None
        for variant, (text, vspans) in variant_inputs.items():
            bits = score_sentence_variant(scorer, text, vspans)
            if bits is None:
                failed = variant
                break
            records[variant] = {
                "doc_id": entry.doc_id,
                "sent_idx": entry.sent_idx,
                "variant": variant,
                "model_id": job.model_id,
                "mode": job.mode,
                "words": [s for s, _, _ in vspans],
                "word_surprisal_bits": [_nine_digits(b) for b in bits],
            }
        if failed is not None:
            exclusions.append((entry.doc_id, entry.sent_idx,
                               f"alignment failure on {failed} variant"))
            continue
        for variant in job.variants:
            lines.append(json.dumps(records[variant], ensure_ascii=False))

    out = Path(job.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.with_name(out.name + ".tmp")
    tmp.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    os.replace(tmp, out)

    sidecar = out.with_name(out.name + ".exclusions.tsv")
    side_lines = ["doc_id\tsent_idx\treason"]
    side_lines += [f"{d}\t{i}\t{r}" for d, i, r in exclusions]
    sidecar.write_text("\n".join(side_lines) + "\n", encoding="utf-8")
    return ExtractionResult(records_written=len(lines), exclusions=exclusions)


def make_scorer(model_id: str, mode: str, device: str = "cpu"):
    if model_id.startswith("builtin:"):
        from .ngram_model import NgramScorer
        return NgramScorer.pretrained(mode=mode)
    from .hf_backend import HfScorer
    return HfScorer(model_id, mode=mode, device=device)
