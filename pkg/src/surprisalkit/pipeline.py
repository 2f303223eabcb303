"""End-to-end document analysis: parse, filter, score, and tabulate.

Every stage boundary is a file with a documented schema; tables are
tab-separated UTF-8 with one header row, floats printed to 6 significant
digits, and missing values left empty.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path

from .conllu import CorpusFilter, Document, apply_filter, parse_conllu
from .intdim import (MIN_TOKEN_POINTS, MLE_DEFAULT_K, EmbeddingTable,
                     build_token_matrix, load_embeddings, load_stopwords,
                     text_id_estimates)
from .providers import (ContextualStore, FrequencyTable, load_contextual,
                        read_freq_table)
from .surprisal import DocumentExclusion, summarize_text
from .treemetrics import average_tree_metrics, compute_tree_metrics, prune_and_score

METRICS_COLUMNS = [
    "doc_id", "language",
    "n_sentences_included", "n_words_total",
    "t_freq", "t_ctx", "t_ctx_rev", "diff_fb", "diff_rev",
    "n_sentences", "mean_mhd", "mean_omega", "omega_defined_count",
    "mean_sub_unevenness", "mean_b2",
    "n_tokens",
    "gride_token", "gride_token_norm", "gride_token_scale",
    "gride_embed", "gride_embed_scale",
    "mle_token", "mle_token_norm", "mle_embed",
]

EXCLUSION_COLUMNS = ["doc_id", "reason"]


@dataclass
class IdParams:
    min_points: int = MIN_TOKEN_POINTS
    mle_k: int = MLE_DEFAULT_K


@dataclass
class PipelineConfig:
    language: str
    conllu_paths: list[str]
    freq_table_path: str
    contextual_path: str
    embeddings_path: str | None = None
    stopwords_path: str | None = None
    filter: CorpusFilter = field(default_factory=CorpusFilter)
    id_params: IdParams = field(default_factory=IdParams)
    output_dir: str = "."
    seed: int = 0
    mla_max_nodes: int = 64

    def validate_paths(self) -> None:
        paths = [*self.conllu_paths, self.freq_table_path, self.contextual_path]
        if self.embeddings_path:
            paths.append(self.embeddings_path)
        if self.stopwords_path:
            paths.append(self.stopwords_path)
        for p in paths:
            if not Path(p).exists():
                raise FileNotFoundError(p)


def load_config(path: str | Path) -> PipelineConfig:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if not obj.get("language"):
        raise ValueError("config: language must be nonempty")
    flt = CorpusFilter(**obj.get("filter", {}))
    idp = IdParams(**obj.get("id_params", {}))
    return PipelineConfig(
        language=obj["language"],
        conllu_paths=list(obj["conllu_paths"]),
        freq_table_path=obj["freq_table_path"],
        contextual_path=obj["contextual_path"],
        embeddings_path=obj.get("embeddings_path"),
        stopwords_path=obj.get("stopwords_path"),
        filter=flt,
        id_params=idp,
        output_dir=obj.get("output_dir", "."),
        seed=int(obj.get("seed", 0)),
        mla_max_nodes=int(obj.get("mla_max_nodes", 64)))


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_table(path: str | Path, columns: list[str], rows: list[dict]) -> None:
    lines = ["\t".join(columns)]
    for row in rows:
        lines.append("\t".join(format_value(row.get(c)) for c in columns))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_table(path: str | Path) -> tuple[list[str], list[dict]]:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln != ""]
    if not lines:
        raise ValueError(f"{path}: empty table")
    columns = lines[0].split("\t")
    rows = []
    for ln in lines[1:]:
        cells = ln.split("\t")
        rows.append({c: (cells[i] if i < len(cells) else "") for i, c in enumerate(columns)})
    return columns, rows


def analyze_document(doc: Document, table: FrequencyTable, store: ContextualStore,
                     embeddings: EmbeddingTable | None, stopwords: set[str],
                     id_params: IdParams, mla_max_nodes: int = 64,
                     ) -> tuple[dict | None, list[dict]]:
    """One metrics row for an accepted document, plus its exclusion notes."""
    exclusions: list[dict] = []
    row: dict = {"doc_id": doc.doc_id, "language": doc.language}

    summary = summarize_text(doc, table, store)
    if isinstance(summary, DocumentExclusion):
        exclusions.append({"doc_id": doc.doc_id, "reason": summary.reason})
        return None, exclusions
    row.update(
        n_sentences_included=summary.n_sentences_included,
        n_words_total=summary.n_words_total,
        t_freq=summary.t_freq, t_ctx=summary.t_ctx, t_ctx_rev=summary.t_ctx_rev,
        diff_fb=summary.diff_fb, diff_rev=summary.diff_rev)

    per_sentence = prune_and_score(doc, max_nodes=mla_max_nodes)
    if per_sentence:
        avg = average_tree_metrics(per_sentence)
        row.update(
            n_sentences=avg.n_sentences, mean_mhd=avg.mean_mhd,
            mean_omega=avg.mean_omega, omega_defined_count=avg.omega_defined_count,
            mean_sub_unevenness=avg.mean_sub_unevenness, mean_b2=avg.mean_b2)
    else:
        exclusions.append({"doc_id": doc.doc_id,
                           "reason": "no sentence with a non-empty dependency tree"})

    if embeddings is not None:
        matrix = build_token_matrix(doc, embeddings, stopwords,
                                    min_points=id_params.min_points)
        if matrix is None:
            exclusions.append({"doc_id": doc.doc_id,
                               "reason": "too few embeddable tokens for dimension estimates"})
        else:
            row["n_tokens"] = len(matrix.tokens)
            for est in text_id_estimates(matrix, mle_k=id_params.mle_k):
                if est.estimator == "gride" and est.manifold == "token":
                    row.update(gride_token=est.value, gride_token_norm=est.normalized_value,
                               gride_token_scale=est.scale)
                elif est.estimator == "gride":
                    row.update(gride_embed=est.value, gride_embed_scale=est.scale)
                elif est.manifold == "token":
                    row.update(mle_token=est.value, mle_token_norm=est.normalized_value)
                else:
                    row.update(mle_embed=est.value)
    return row, exclusions


def _analyze_one(args) -> tuple[dict | None, list[dict]]:
    return analyze_document(*args)


def run_analyze(config: PipelineConfig, jobs: int = 1) -> tuple[list[dict], list[dict]]:
    """Full pipeline over all configured CoNLL-U inputs.

    Returns (metrics rows, exclusion rows); row order follows input order and
    is independent of the worker count.
    """
    config.validate_paths()
    table = read_freq_table(config.freq_table_path)
    store = load_contextual(config.contextual_path)
    embeddings = load_embeddings(config.embeddings_path) if config.embeddings_path else None
    stopwords = load_stopwords(config.stopwords_path) if config.stopwords_path else set()

    documents: list[Document] = []
    exclusions: list[dict] = []
    for path in config.conllu_paths:
        data = Path(path).read_bytes()
        for doc in parse_conllu(data, language=config.language, doc_id=Path(path).stem):
            accepted, reason = apply_filter(doc, config.filter)
            if accepted is None:
                exclusions.append({"doc_id": doc.doc_id, "reason": reason})
            else:
                documents.append(accepted)

    tasks = [(doc, table, store, embeddings, stopwords, config.id_params,
              config.mla_max_nodes) for doc in documents]
    if jobs > 1 and len(tasks) > 1:
        with Pool(processes=jobs) as pool:
            results = pool.map(_analyze_one, tasks)
    else:
        results = [_analyze_one(t) for t in tasks]

    rows: list[dict] = []
    for row, notes in results:
        exclusions.extend(notes)
        if row is not None:
            rows.append(row)
    return rows, exclusions
