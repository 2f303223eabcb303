"""Synthetic corpus builder: CoNLL-U, frequency table, contextual file, embeddings.

Contextual surprisal is planted below frequency surprisal by a per-word
factor, and reversed-order surprisal above contextual, so directional
pipeline properties have known ground truth.
"""

import json
import math
from pathlib import Path

import numpy as np

from surprisalkit.conllu import parse_conllu
from surprisalkit.providers import build_freq_table, write_freq_table

STOPWORDS = ["the", "a", "of", "and", "to"]


def zipf_vocab(n_items: int) -> list[str]:
    content = [f"word{i:03d}" for i in range(n_items - len(STOPWORDS))]
    return STOPWORDS + content


def sample_sentence(rng, vocab, weights, length):
    return [vocab[int(i)] for i in rng.choice(len(vocab), size=length, p=weights)]


def sentence_conllu_rows(words, rng, with_period=False):
    rows = []
    n = len(words)
    for i, word in enumerate(words, start=1):
        if i == 1:
            head, rel = 0, "root"
        else:
            head, rel = int(rng.integers(max(1, i - 4), i)), "dep"
        rows.append(f"{i}\t{word}\t_\t_\t_\t_\t{head}\t{rel}\t_\t_")
    if with_period:
        rows.append(f"{n + 1}\t.\t_\t_\t_\t_\t1\tpunct\t_\t_")
    return rows


def build_corpus(tmp_path: Path, n_docs: int = 10, seed: int = 7,
                 vocab_size: int = 300, sentences_per_doc=(4, 7),
                 words_per_sentence=(10, 16),
                 ctx_factor=(0.4, 0.8), rev_factor=(1.1, 1.4),
                 drop_rev_for: set[str] = frozenset(),
                 embed_dim: int = 16, latent_dim: int = 3) -> dict:
    """Write all pipeline inputs into tmp_path; returns the config dict."""
    rng = np.random.default_rng(seed)
    vocab = zipf_vocab(vocab_size)
    ranks = np.arange(1, len(vocab) + 1, dtype=np.float64)
    weights = (1.0 / ranks) / np.sum(1.0 / ranks)

    doc_sentences: dict[str, list[list[str]]] = {}
    conllu_lines: list[str] = []
    for d in range(n_docs):
        doc_id = f"doc{d:03d}"
        conllu_lines.append(f"# newdoc id = {doc_id}")
        n_sents = int(rng.integers(sentences_per_doc[0], sentences_per_doc[1] + 1))
        sents = []
        for s in range(n_sents):
            length = int(rng.integers(words_per_sentence[0], words_per_sentence[1] + 1))
            words = sample_sentence(rng, vocab, weights, length)
            sents.append(words)
            conllu_lines.extend(sentence_conllu_rows(words, rng, with_period=(s % 2 == 0)))
            conllu_lines.append("")
        doc_sentences[doc_id] = sents
    conllu_path = tmp_path / "corpus.conllu"
    conllu_path.write_text("\n".join(conllu_lines), encoding="utf-8")

    all_tokens = [w.lower() for sents in doc_sentences.values() for ws in sents for w in ws]
    table = build_freq_table(all_tokens, language="xx")
    freq_path = tmp_path / "freq.tsv"
    write_freq_table(table, freq_path, total_count=len(all_tokens))

    ctx_path = tmp_path / "contextual.jsonl"
    with open(ctx_path, "w", encoding="utf-8") as fh:
        for doc_id, sents in doc_sentences.items():
            for sent_idx, words in enumerate(sents):
                freq_bits = [-math.log2(table.lookup(w)) for w in words]
                factors = rng.uniform(ctx_factor[0], ctx_factor[1], size=len(words))
                ctx_bits = [b * f for b, f in zip(freq_bits, factors)]
                rev_mult = rng.uniform(rev_factor[0], rev_factor[1], size=len(words))
                rev_bits = [b * m for b, m in zip(ctx_bits, rev_mult)][::-1]
                fh.write(json.dumps({
                    "doc_id": doc_id, "sent_idx": sent_idx, "variant": "orig",
                    "model_id": "synthetic", "mode": "masked",
                    "words": [w.lower() for w in words],
                    "word_surprisal_bits": ctx_bits}) + "\n")
                if doc_id in drop_rev_for:
                    continue
                fh.write(json.dumps({
                    "doc_id": doc_id, "sent_idx": sent_idx, "variant": "rev",
                    "model_id": "synthetic", "mode": "masked",
                    "words": [w.lower() for w in words[::-1]],
                    "word_surprisal_bits": rev_bits}) + "\n")

    # embeddings drawn from a low-dimensional latent space
    latent = rng.normal(size=(len(vocab), latent_dim))
    mix = rng.normal(size=(latent_dim, embed_dim))
    matrix = latent @ mix + 0.01 * rng.normal(size=(len(vocab), embed_dim))
    emb_path = tmp_path / "vectors.txt"
    with open(emb_path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(vocab)} {embed_dim}\n")
        for word, vec in zip(vocab, matrix):
            fh.write(word + " " + " ".join(f"{x:.6f}" for x in vec) + "\n")

    stop_path = tmp_path / "stopwords.txt"
    stop_path.write_text("\n".join(STOPWORDS) + "\n", encoding="utf-8")

    config = {
        "language": "xx",
        "conllu_paths": [str(conllu_path)],
        "freq_table_path": str(freq_path),
        "contextual_path": str(ctx_path),
        "embeddings_path": str(emb_path),
        "stopwords_path": str(stop_path),
        "filter": {"min_avg_sentence_len": 5, "max_avg_sentence_len": 50,
                   "max_sentence_len": 100, "min_sentence_len": 3},
        "id_params": {"min_points": 16},
        "output_dir": str(tmp_path / "out"),
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return {"config_path": config_path, "config": config,
            "conllu_path": conllu_path, "freq_path": freq_path,
            "ctx_path": ctx_path, "doc_sentences": doc_sentences}
