"""Intrinsic dimensionality of a text's lexical embedding cloud.

Two estimators over two manifolds. The ratio estimator maximizes the
likelihood of distance ratios between the k-th and 2k-th nearest neighbors;
the local maximum-likelihood estimator averages per-point inverse log-ratio
estimates. The token manifold treats unique token vectors as points; the
feature manifold treats embedding dimensions as points in token space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.spatial.distance import cdist

from .conllu import Document

MIN_TOKEN_POINTS = 32
MLE_DEFAULT_K = 15


@dataclass
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray]

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("embedding width must be >= 2")

    def get(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Read word2vec text format: a `count dim` header then one vector per line."""
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: expected '<count> <dim>' header")
        count, dim = int(header[0]), int(header[1])
        vectors: dict[str, np.ndarray] = {}
        for line_no, line in enumerate(handle, start=2):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < dim + 1:
                raise ValueError(f"{path}, line {line_no}: expected token and {dim} values")
            vectors[parts[0]] = np.array([float(x) for x in parts[1:dim + 1]], dtype=np.float64)
    if len(vectors) != count:
        raise ValueError(f"{path}: header says {count} vectors, found {len(vectors)}")
    return EmbeddingTable(dim=dim, vectors=vectors)


def load_stopwords(path: str | Path) -> set[str]:
    out = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word:
            out.add(word)
    return out


@dataclass
class TokenMatrix:
    """Unique in-vocabulary token vectors, z-scored per embedding feature."""

    tokens: list[str]
    values: np.ndarray  # n_tokens x n_features


@dataclass
class IdEstimate:
    estimator: str   # "gride" | "mle"
    manifold: str    # "token" | "feature"
    scale: int
    value: float
    normalized_value: float | None = None


def build_token_matrix(doc: Document, emb: EmbeddingTable, stopwords: set[str],
                       min_points: int = MIN_TOKEN_POINTS) -> TokenMatrix | None:
    """Unique non-stopword in-vocabulary tokens of a document, z-scored.

    Tokens are lowercased and stripped; all-zero raw vectors are dropped along
    with zero-variance columns. Returns None when fewer than ``min_points``
    tokens survive, which callers record as a missing value.
    """
    seen: set[str] = set()
    tokens: list[str] = []
    rows: list[np.ndarray] = []
    for sent in doc.sentences:
        for word in sent.words:
            tok = word.strip().lower()
            if not tok or tok in stopwords or tok in seen:
                continue
            seen.add(tok)
            vec = emb.get(tok)
            if vec is None or not np.any(vec):
                continue
            tokens.append(tok)
            rows.append(vec)
    if len(rows) < min_points:
        return None
    matrix = np.vstack(rows)
    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0)
    keep = std > 0
    if not np.any(keep):
        return None
    matrix = (matrix[:, keep] - mean[keep]) / std[keep]
    return TokenMatrix(tokens=tokens, values=matrix)


def feature_manifold(matrix: TokenMatrix) -> np.ndarray:
    """Embedding dimensions as points in token-count-dimensional space."""
    return matrix.values.T


def sorted_neighbor_distances(points: np.ndarray) -> np.ndarray:
    """Row-sorted Euclidean distances to every other point, self excluded.

    Exact all-pairs computation; duplicate points are collapsed beforehand so
    nearest-neighbor ratios stay defined.
    """
    points = np.asarray(points, dtype=np.float64)
    points = np.unique(points, axis=0)
    dists = cdist(points, points)
    dists = np.sort(dists, axis=1)
    return dists[:, 1:]  # drop the self column


def _gride_neg_loglik(d: float, log_mu: np.ndarray, k: int) -> float:
    n = log_mu.size
    # log(mu^d - 1) = d log mu + log1p(-exp(-d log mu)), stable for mu > 1
    ll = n * math.log(d) - ((2 * k - 1) * d + 1) * float(np.sum(log_mu))
    if k > 1:
        ll += (k - 1) * float(np.sum(d * log_mu + np.log1p(-np.exp(-d * log_mu))))
    return -ll


def gride_estimate(points: np.ndarray, k: int,
                   sorted_dists: np.ndarray | None = None) -> float:
    """Generalized-ratio dimension estimate at neighborhood rank k.

    Likelihood of the ratios r_2k / r_k is maximized over (1e-3, 2D] by
    bounded scalar search. Points whose ratio is exactly 1 (tied distances)
    are dropped; at least two informative ratios are required.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    points = np.asarray(points, dtype=np.float64)
    if sorted_dists is None:
        sorted_dists = sorted_neighbor_distances(points)
    n = sorted_dists.shape[0]
    if n < 2 * k + 2:
        raise ValueError(f"need at least {2 * k + 2} distinct points for k={k}, have {n}")
    r_k = sorted_dists[:, k - 1]
    r_2k = sorted_dists[:, 2 * k - 1]
    valid = r_k > 0
    mu = r_2k[valid] / r_k[valid]
    log_mu = np.log(mu[mu > 1.0])
    if log_mu.size < 2:
        raise ValueError("all neighbor ratios degenerate (tied distances)")
    ambient = points.shape[1] if points.ndim == 2 else sorted_dists.shape[1]
    upper = 2.0 * max(ambient, 1)
    res = minimize_scalar(
        _gride_neg_loglik, args=(log_mu, k), bounds=(1e-3, upper),
        method="bounded", options={"xatol": 1e-9})
    return float(res.x)


def gride_scale_sweep(points: np.ndarray,
                      sorted_dists: np.ndarray | None = None) -> tuple[float, int]:
    """Dimension estimate with the neighborhood rank chosen by plateau search.

    Estimates are computed at ranks k = 1, 2, 4, ... up to N/4; the chosen
    rank minimizes |d(k) - d(2k)| over pairs where both are estimable. With no
    such pair the smallest rank's estimate is returned.
    """
    points = np.asarray(points, dtype=np.float64)
    if sorted_dists is None:
        sorted_dists = sorted_neighbor_distances(points)
    n = sorted_dists.shape[0]
    if n < 6:
        raise ValueError(f"need at least 6 distinct points, have {n}")
    scales = []
    k = 1
    while k <= n // 4:
        scales.append(k)
        k *= 2
    estimates: dict[int, float] = {}

    def estimate_at(k: int) -> float:
        if k not in estimates:
            estimates[k] = gride_estimate(points, k, sorted_dists=sorted_dists)
        return estimates[k]

    candidates = [k for k in scales if n >= 4 * k + 2]
    if not candidates:
        k = scales[0]
        return estimate_at(k), k
    best_k = min(candidates, key=lambda k: abs(estimate_at(k) - estimate_at(2 * k)))
    return estimate_at(best_k), best_k


def mle_estimate(points: np.ndarray, k: int = MLE_DEFAULT_K,
                 sorted_dists: np.ndarray | None = None,
                 inverse_average: bool = False) -> float:
    """Local likelihood dimension estimate from within-neighborhood log-ratios.

    Per point, the estimate is the inverse mean of log(r_k / r_j) over
    j < k; the global value averages the local ones, or with
    ``inverse_average`` averages their inverses and inverts (the small-sample
    correction some references prefer).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    points = np.asarray(points, dtype=np.float64)
    if sorted_dists is None:
        sorted_dists = sorted_neighbor_distances(points)
    n = sorted_dists.shape[0]
    if n < k + 1:
        raise ValueError(f"need at least {k + 1} distinct points for k={k}, have {n}")
    r_k = sorted_dists[:, k - 1]
    valid = r_k > 0
    ratios = np.log(r_k[valid, None] / sorted_dists[valid, :k - 1])
    mean_log = ratios.mean(axis=1)
    ok = mean_log > 0
    if not np.any(ok):
        raise ValueError("all neighborhoods degenerate (tied distances)")
    local = 1.0 / mean_log[ok]
    if inverse_average:
        return float(1.0 / np.mean(1.0 / local))
    return float(np.mean(local))


def normalize_token_id(value: float, n_rows: int) -> float:
    """Token-manifold estimates scale with sample size; divide by point count."""
    if n_rows <= 0:
        raise ValueError("n_rows must be positive")
    return value / n_rows


def text_id_estimates(matrix: TokenMatrix, mle_k: int = MLE_DEFAULT_K) -> list[IdEstimate]:
    """Both estimators on both manifolds for one text's token matrix.

    Normalization by point count applies to the token manifold only. The
    local-likelihood neighborhood shrinks when a manifold has fewer points
    than it asks for; the scale actually used is recorded on the estimate.
    """
    out: list[IdEstimate] = []
    token_points = matrix.values
    n_tokens = token_points.shape[0]
    token_dists = sorted_neighbor_distances(token_points)
    feature_points = feature_manifold(matrix)
    feature_dists = sorted_neighbor_distances(feature_points)

    g_tok, k_tok = gride_scale_sweep(token_points, sorted_dists=token_dists)
    out.append(IdEstimate("gride", "token", k_tok, g_tok,
                          normalized_value=normalize_token_id(g_tok, n_tokens)))
    g_feat, k_feat = gride_scale_sweep(feature_points, sorted_dists=feature_dists)
    out.append(IdEstimate("gride", "feature", k_feat, g_feat))

    k_tok_mle = min(mle_k, token_dists.shape[0] - 1)
    m_tok = mle_estimate(token_points, k=k_tok_mle, sorted_dists=token_dists)
    out.append(IdEstimate("mle", "token", k_tok_mle, m_tok,
                          normalized_value=normalize_token_id(m_tok, n_tokens)))
    k_feat_mle = min(mle_k, feature_dists.shape[0] - 1)
    m_feat = mle_estimate(feature_points, k=k_feat_mle, sorted_dists=feature_dists)
    out.append(IdEstimate("mle", "feature", k_feat_mle, m_feat))
    return out
