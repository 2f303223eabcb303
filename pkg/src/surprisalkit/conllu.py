"""CoNLL-U ingestion, corpus filtering, punctuation pruning, and word order utilities."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field


class ConlluParseError(ValueError):
    """Malformed CoNLL-U input; carries the 1-based line number when known."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class Token:
    surface: str
    index: int  # 1-based position within the sentence
    head: int   # 0 for the root, otherwise the 1-based index of the head
    deprel: str

    @property
    def is_punct(self) -> bool:
        return self.deprel == "punct"

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"token index must be >= 1, got {self.index}")
        if self.head < 0:
            raise ValueError(f"head must be >= 0, got {self.head}")
        if self.head == self.index:
            raise ValueError(f"token {self.index} cannot be its own head")


@dataclass
class Sentence:
    tokens: list[Token]
    sent_idx: int = 0

    @property
    def words(self) -> list[str]:
        """Non-punctuation surfaces in order; the unit that surprisal sums over."""
        return [t.surface for t in self.tokens if not t.is_punct]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass
class DependencyTree:
    """Punctuation-free, consecutively reindexed rooted tree."""

    nodes: list[Token]
    root: int

    def __post_init__(self):
        n = len(self.nodes)
        if n == 0:
            raise ValueError("empty tree")
        for pos, tok in enumerate(self.nodes, start=1):
            if tok.index != pos:
                raise ValueError(f"node indices not consecutive at position {pos}")
            if tok.head > n:
                raise ValueError(f"node {pos} has head {tok.head} > {n}")
        roots = [t.index for t in self.nodes if t.head == 0]
        if roots != [self.root]:
            raise ValueError(f"expected single root {self.root}, found {roots}")
        # every non-root node must reach the root in < n head steps
        for tok in self.nodes:
            cur, steps = tok.index, 0
            while cur != 0:
                cur = self.nodes[cur - 1].head
                steps += 1
                if steps > n:
                    raise ValueError(f"cyclic head relation involving node {tok.index}")

    def __len__(self) -> int:
        return len(self.nodes)

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {t.index: [] for t in self.nodes}
        for t in self.nodes:
            if t.head != 0:
                out[t.head].append(t.index)
        return out

    def as_sentence(self, sent_idx: int = 0) -> Sentence:
        return Sentence(tokens=list(self.nodes), sent_idx=sent_idx)


@dataclass
class Document:
    doc_id: str
    language: str
    sentences: list[Sentence] = field(default_factory=list)

    def __post_init__(self):
        if not self.doc_id:
            raise ValueError("doc_id must be nonempty")


@dataclass
class CorpusFilter:
    """Document- and sentence-level length bounds, in words (non-punct) and tokens."""

    min_avg_sentence_len: float = 10.0
    max_avg_sentence_len: float = 50.0
    max_sentence_len: int = 100
    min_sentence_len: int = 3

    def __post_init__(self):
        if self.min_avg_sentence_len > self.max_avg_sentence_len:
            raise ValueError("min_avg_sentence_len > max_avg_sentence_len")
        if self.min_sentence_len > self.max_sentence_len:
            raise ValueError("min_sentence_len > max_sentence_len")


def parse_conllu(data: bytes | str, language: str = "und", doc_id: str | None = None) -> list[Document]:
    """Parse CoNLL-U content into Documents.

    A new document starts at every ``# newdoc`` comment; content before the first
    ``# newdoc`` (or a file without any) forms one document. Multiword-token
    ranges and empty nodes are skipped, other comments ignored.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConlluParseError(f"input is not valid UTF-8: {exc}") from exc
    else:
        text = data

    default_id = doc_id or "doc"
    docs: list[Document] = []
    cur_doc: Document | None = None
    pending: list[tuple[Token, int]] = []  # (token, line_no)
    n_unnamed = 0

    def ensure_doc(name: str | None = None) -> Document:
        nonlocal cur_doc, n_unnamed
        if name is None:
            if cur_doc is None:
                n_unnamed += 1
                name = default_id if n_unnamed == 1 else f"{default_id}-{n_unnamed}"
                cur_doc = Document(doc_id=name, language=language)
                docs.append(cur_doc)
            return cur_doc
        n_unnamed += 1
        if not name:
            name = default_id if n_unnamed == 1 else f"{default_id}-{n_unnamed}"
        cur_doc = Document(doc_id=name, language=language)
        docs.append(cur_doc)
        return cur_doc

    def close_sentence():
        nonlocal pending
        if not pending:
            return
        doc = ensure_doc()
        n = len(pending)
        roots = 0
        for tok, line_no in pending:
            if tok.head > n:
                raise ConlluParseError(
                    f"head {tok.head} exceeds sentence length {n}", line_no)
            if tok.head == 0:
                roots += 1
        if roots > 1:
            raise ConlluParseError(
                f"sentence ending here has {roots} root tokens", pending[-1][1])
        doc.sentences.append(
            Sentence(tokens=[t for t, _ in pending], sent_idx=len(doc.sentences)))
        pending = []

    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            close_sentence()
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("newdoc"):
                close_sentence()
                rest = body[len("newdoc"):].strip()
                name = None
                if rest.startswith("id"):
                    rest = rest[2:].strip()
                    if rest.startswith("="):
                        name = rest[1:].strip()
                ensure_doc(name if name else "")
            continue
        fields = line.split("\t")
        if len(fields) < 8:
            raise ConlluParseError(
                f"expected >= 8 tab-separated columns, got {len(fields)}", line_no)
        tok_id = fields[0]
        if "-" in tok_id or "." in tok_id:
            continue  # multiword-token range or empty node
        try:
            index = int(tok_id)
        except ValueError:
            raise ConlluParseError(f"non-integer token id {tok_id!r}", line_no) from None
        try:
            head = int(fields[6])
        except ValueError:
            raise ConlluParseError(f"non-integer head field {fields[6]!r}", line_no) from None
        expected = len(pending) + 1
        if index != expected:
            raise ConlluParseError(
                f"token id {index} out of order (expected {expected})", line_no)
        try:
            tok = Token(surface=fields[1], index=index, head=head, deprel=fields[7])
        except ValueError as exc:
            raise ConlluParseError(str(exc), line_no) from None
        pending.append((tok, line_no))

    close_sentence()
    return [d for d in docs if d.sentences]


def prune_punctuation(sentence: Sentence) -> DependencyTree | None:
    """Remove punct tokens, reattach their dependents to the punct's head, reindex.

    Returns None when the sentence is entirely punctuation. Exactly one root is
    guaranteed: with no marked root the first remaining token is promoted; when
    the marked root is pruned its first remaining dependent becomes the root and
    any siblings attach to it.
    """
    toks = sentence.tokens
    if not toks:
        raise ValueError("empty sentence")
    keep = [t for t in toks if not t.is_punct]
    if not keep:
        return None

    def resolve(head: int) -> int:
        steps = 0
        while head != 0 and toks[head - 1].is_punct:
            head = toks[head - 1].head
            steps += 1
            if steps > len(toks):
                raise ValueError("cyclic head relation among punctuation tokens")
        return head

    new_index = {t.index: i + 1 for i, t in enumerate(keep)}
    resolved = [resolve(t.head) for t in keep]
    root_positions = [i for i, h in enumerate(resolved) if h == 0]

    nodes: list[Token] = []
    if not root_positions:
        root_pos = 0
    else:
        root_pos = root_positions[0]
    root_new = root_pos + 1
    for i, t in enumerate(keep):
        if i == root_pos:
            head, deprel = 0, t.deprel if t.head == 0 else "root"
        elif resolved[i] == 0:
            head, deprel = root_new, t.deprel
        else:
            head, deprel = new_index[resolved[i]], t.deprel
        nodes.append(Token(surface=t.surface, index=i + 1, head=head, deprel=deprel))
    return DependencyTree(nodes=nodes, root=root_new)


def reverse_words(words: list[str]) -> list[str]:
    """Word sequence in reverse order; the multiset of words is unchanged."""
    return list(reversed(words))


_INTERNAL_MARKS = {"'", "’", "-", "‐", "‑"}


def _is_word_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("L", "M", "N")


def tokenize_words(text: str, language: str = "und") -> list[str]:
    """Unicode word segmentation with punctuation-only segments dropped, lowercased.

    Apostrophes and hyphens are kept when flanked by word characters. Scripts
    without word boundaries are not re-segmented; CoNLL-U tokens are preferred
    wherever they exist.
    """
    del language  # segmentation is language-neutral by design
    words: list[str] = []
    current: list[str] = []
    n = len(text)
    for i, ch in enumerate(text):
        if _is_word_char(ch):
            current.append(ch)
        elif ch in _INTERNAL_MARKS and current and i + 1 < n and _is_word_char(text[i + 1]):
            current.append(ch)
        else:
            if current:
                words.append("".join(current).lower())
                current = []
    if current:
        words.append("".join(current).lower())
    return words


def apply_filter(doc: Document, flt: CorpusFilter) -> tuple[Document | None, str | None]:
    """Apply corpus bounds; returns (document, None) or (None, rejection reason).

    Sentences under the token minimum are dropped first; the document-level
    average and maximum bounds are then evaluated on what remains, counting
    non-punctuation words.
    """
    kept = [s for s in doc.sentences if len(s.tokens) >= flt.min_sentence_len]
    if not kept:
        return None, "no sentences at or above the minimum token length"
    lengths = [len(s.words) for s in kept]
    longest = max(lengths)
    if longest > flt.max_sentence_len:
        return None, f"sentence of {longest} words exceeds maximum {flt.max_sentence_len}"
    avg = sum(lengths) / len(lengths)
    if not (flt.min_avg_sentence_len <= avg <= flt.max_avg_sentence_len):
        return None, (f"average sentence length {avg:.2f} outside "
                      f"[{flt.min_avg_sentence_len}, {flt.max_avg_sentence_len}]")
    renumbered = [Sentence(tokens=s.tokens, sent_idx=i) for i, s in enumerate(kept)]
    return Document(doc_id=doc.doc_id, language=doc.language, sentences=renumbered), None
