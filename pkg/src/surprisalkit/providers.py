"""Word probability providers: frequency tables and precomputed contextual files."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .conllu import Document

PROBABILITY_FLOOR = 1e-9

VARIANTS = ("orig", "rev")
MODES = ("masked", "causal")


@dataclass
class FrequencyTable:
    """Relative frequencies with a fixed floor so surprisal is always finite."""

    entries: dict[str, float]
    language: str = "und"
    floor: float = PROBABILITY_FLOOR

    def lookup(self, token: str) -> float:
        """Floored relative frequency; unknown tokens get exactly the floor."""
        return max(self.entries.get(token.lower(), 0.0), self.floor)


def freq_lookup(table: FrequencyTable, token: str) -> float:
    return table.lookup(token)


def build_freq_table(tokens: Iterable[str], language: str = "und") -> FrequencyTable:
    """Relative frequencies from a token stream, case-folded at build time."""
    counts = Counter(t.lower() for t in tokens)
    total = sum(counts.values())
    if total == 0:
        raise ValueError("cannot build a frequency table from an empty corpus")
    return FrequencyTable(
        entries={tok: c / total for tok, c in counts.items()}, language=language)


def write_freq_table(table: FrequencyTable, path: str | Path,
                     source: str = "", total_count: int | None = None) -> None:
    lines = [f"# language: {table.language}"]
    if source:
        lines.append(f"# source: {source}")
    if total_count is not None:
        lines.append(f"# total_count: {total_count}")
    for tok, freq in sorted(table.entries.items(), key=lambda kv: (-kv[1], kv[0])):
        lines.append(f"{tok}\t{freq!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_freq_table(path: str | Path) -> FrequencyTable:
    language = "und"
    entries: dict[str, float] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("language:"):
                    language = body.split(":", 1)[1].strip()
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}, line {line_no}: expected token<TAB>frequency")
            try:
                freq = float(parts[1])
            except ValueError:
                raise ValueError(f"{path}, line {line_no}: bad frequency {parts[1]!r}") from None
            if freq <= 0:
                raise ValueError(f"{path}, line {line_no}: frequency must be > 0")
            entries[parts[0]] = freq
    return FrequencyTable(entries=entries, language=language)


@dataclass(frozen=True)
class ContextualRecord:
    """One sentence variant's word-aligned contextual surprisal, in bits."""

    doc_id: str
    sent_idx: int
    variant: str
    model_id: str
    mode: str
    words: tuple[str, ...]
    word_surprisal_bits: tuple[float, ...]

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if len(self.words) != len(self.word_surprisal_bits):
            raise ValueError(
                f"{self.key()}: {len(self.words)} words but "
                f"{len(self.word_surprisal_bits)} surprisal values")
        for s in self.word_surprisal_bits:
            if not math.isfinite(s) or s < 0:
                raise ValueError(f"{self.key()}: surprisal {s!r} is not a finite non-negative value")

    def key(self) -> tuple[str, int, str]:
        return (self.doc_id, self.sent_idx, self.variant)

    def total_bits(self) -> float:
        return sum(self.word_surprisal_bits)


@dataclass
class ContextualStore:
    """Keyed collection of contextual records; immutable once loaded."""

    records: dict[tuple[str, int, str], ContextualRecord] = field(default_factory=dict)

    def add(self, record: ContextualRecord) -> None:
        key = record.key()
        if key in self.records:
            raise ValueError(f"duplicate contextual record for {key}")
        self.records[key] = record

    def get(self, doc_id: str, sent_idx: int, variant: str) -> ContextualRecord | None:
        return self.records.get((doc_id, sent_idx, variant))

    def __len__(self) -> int:
        return len(self.records)


_RECORD_FIELDS = {
    "doc_id": str, "sent_idx": int, "variant": str, "model_id": str, "mode": str,
}


def record_from_json(obj: dict) -> ContextualRecord:
    for name, typ in _RECORD_FIELDS.items():
        if name not in obj:
            raise ValueError(f"record missing field {name!r}")
        if not isinstance(obj[name], typ):
            raise ValueError(f"record field {name!r} has wrong type")
    words = obj.get("words")
    bits = obj.get("word_surprisal_bits")
    if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
        raise ValueError("record field 'words' must be an array of strings")
    if not isinstance(bits, list) or not all(isinstance(b, (int, float)) for b in bits):
        raise ValueError("record field 'word_surprisal_bits' must be an array of numbers")
    return ContextualRecord(
        doc_id=obj["doc_id"], sent_idx=obj["sent_idx"], variant=obj["variant"],
        model_id=obj["model_id"], mode=obj["mode"],
        words=tuple(words), word_surprisal_bits=tuple(float(b) for b in bits))


def load_contextual(path: str | Path) -> ContextualStore:
    """Read a JSON Lines contextual probability file; unknown fields ignored."""
    store = ContextualStore()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}, line {line_no}: not valid JSON ({exc})") from None
            try:
                store.add(record_from_json(obj))
            except ValueError as exc:
                raise ValueError(f"{path}, line {line_no}: {exc}") from None
    return store


def dump_contextual(store: ContextualStore, path: str | Path) -> None:
    """Serialize a store as JSON Lines, sorted by key for reproducible bytes."""
    lines = []
    for key in sorted(store.records):
        rec = store.records[key]
        lines.append(json.dumps({
            "doc_id": rec.doc_id, "sent_idx": rec.sent_idx, "variant": rec.variant,
            "model_id": rec.model_id, "mode": rec.mode, "words": list(rec.words),
            "word_surprisal_bits": list(rec.word_surprisal_bits),
        }, ensure_ascii=False))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


@dataclass(frozen=True)
class AlignmentFlag:
    sent_idx: int
    issue: str
    position: int | None = None


@dataclass
class AlignmentReport:
    """Per-sentence contextual coverage; flagged sentences get paired exclusion."""

    doc_id: str
    flags: list[AlignmentFlag]
    usable_sent_idxs: set[int]

    @property
    def fully_covered(self) -> bool:
        return not self.flags


def check_alignment(store: ContextualStore, doc: Document) -> AlignmentReport:
    """Check that each sentence has orig and rev records matching its words.

    Word comparison is case-insensitive; the rev record must list the
    sentence's non-punctuation words in reverse order.
    """
    flags: list[AlignmentFlag] = []
    usable: set[int] = set()
    for sent in doc.sentences:
        words = [w.lower() for w in sent.words]
        sent_flags: list[AlignmentFlag] = []
        for variant, expected in (("orig", words), ("rev", words[::-1])):
            rec = store.get(doc.doc_id, sent.sent_idx, variant)
            if rec is None:
                sent_flags.append(AlignmentFlag(sent.sent_idx, f"missing {variant} record"))
                continue
            got = [w.lower() for w in rec.words]
            if len(got) != len(expected):
                sent_flags.append(AlignmentFlag(
                    sent.sent_idx, f"{variant} record has {len(got)} words, sentence has {len(expected)}"))
            else:
                for pos, (a, b) in enumerate(zip(got, expected)):
                    if a != b:
                        sent_flags.append(AlignmentFlag(
                            sent.sent_idx, f"{variant} word mismatch", position=pos))
                        break
        if sent_flags:
            flags.extend(sent_flags)
        else:
            usable.add(sent.sent_idx)
    return AlignmentReport(doc_id=doc.doc_id, flags=flags, usable_sent_idxs=usable)
