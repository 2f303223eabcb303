"""Toolkit for measuring how sentence context compresses lexical uncertainty.

Submodules: conllu (corpus ingestion and trees), providers (probability
sources), surprisal (per-text surprisal and reduction indices), treemetrics
(dependency-tree descriptors), intdim (intrinsic dimensionality), stats
(rank tests, FDR, meta-analysis), pipeline and cli (orchestration).
"""

from .conllu import (CorpusFilter, DependencyTree, Document, Sentence, Token,
                     apply_filter, parse_conllu, prune_punctuation,
                     reverse_words, tokenize_words)
from .intdim import (EmbeddingTable, IdEstimate, TokenMatrix, build_token_matrix,
                     feature_manifold, gride_estimate, gride_scale_sweep,
                     load_embeddings, load_stopwords, mle_estimate,
                     normalize_token_id, text_id_estimates)
from .providers import (ContextualRecord, ContextualStore, FrequencyTable,
                        build_freq_table, check_alignment, dump_contextual,
                        freq_lookup, load_contextual, read_freq_table,
                        write_freq_table)
from .stats import (CorrelationResult, FriedmanResult, MetaResult, PosthocResult,
                    fdr_bh, fdr_two_stage, forest_data, friedman_test, meta_reml,
                    siegel_posthoc, spearman)
from .surprisal import (DocumentExclusion, SentenceSurprisal, TextSurprisalSummary,
                        reduction_indices, sentence_freq_surprisal, summarize_text,
                        text_normalized_surprisal)
from .treemetrics import (MlaBudgetExceeded, TreeMetrics, TreeMetricsSummary,
                          average_tree_metrics, b2_index, compute_tree_metrics,
                          mean_hierarchical_distance, min_linear_arrangement,
                          omega, prune_and_score, random_baseline,
                          subtree_unevenness, total_dependency_length)

__version__ = "0.1.0"
