"""Rank statistics, FDR control, and random-effects pooling.

Friedman's within-block rank test with the Siegel-Castellan pairwise z
procedure, Spearman correlation with Fisher-z confidence intervals, one- and
two-stage step-up FDR adjustment, and restricted-maximum-likelihood pooling
of correlations across independent studies with Cochran's heterogeneity Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps
from scipy.optimize import minimize_scalar


@dataclass
class FriedmanResult:
    n_blocks: int
    k_conditions: int
    statistic: float
    df: int
    p_value: float
    mean_ranks: list[float]
    labels: list[str]


@dataclass
class PosthocResult:
    pairs: list[tuple[str, str, float, float, float]]  # (a, b, z, p_raw, p_fdr)


@dataclass
class CorrelationResult:
    rho: float
    n: int
    p_value: float
    ci_low: float
    ci_high: float


@dataclass
class MetaResult:
    pooled_rho: float
    ci_low: float
    ci_high: float
    tau2: float
    q_statistic: float
    q_df: int
    q_p_value: float
    per_study: list[tuple[str, float, int, float]]  # (label, rho, n, weight)
    excluded: list[tuple[str, str]] = field(default_factory=list)


def friedman_test(blocks: np.ndarray, labels: list[str] | None = None) -> FriedmanResult:
    """Within-block rank test that the k conditions share one distribution.

    Average ranks on ties; the statistic is divided by the tie-correction
    factor 1 - sum(t^3 - t) / (n k (k^2 - 1)), which is 1 without ties. With
    every block fully tied the statistic is 0 and p is 1.
    """
    blocks = np.asarray(blocks, dtype=np.float64)
    if blocks.ndim != 2:
        raise ValueError("blocks must be a 2-d array (blocks x conditions)")
    n, k = blocks.shape
    if n < 2 or k < 2:
        raise ValueError(f"need at least 2 blocks and 2 conditions, got {n}x{k}")
    if not np.all(np.isfinite(blocks)):
        raise ValueError("blocks contain missing or non-finite cells")
    ranks = np.vstack([sps.rankdata(row, method="average") for row in blocks])
    mean_ranks = ranks.mean(axis=0)
    q = 12.0 * n / (k * (k + 1)) * float(np.sum((mean_ranks - (k + 1) / 2.0) ** 2))
    tie_sum = 0.0
    for row in blocks:
        _, counts = np.unique(row, return_counts=True)
        tie_sum += float(np.sum(counts.astype(np.float64) ** 3 - counts))
    correction = 1.0 - tie_sum / (n * k * (k * k - 1))
    if correction <= 0:
        statistic, p = 0.0, 1.0
    else:
        statistic = q / correction
        p = float(sps.chi2.sf(statistic, k - 1))
    if labels is None:
        labels = [f"cond{j}" for j in range(k)]
    return FriedmanResult(n_blocks=n, k_conditions=k, statistic=statistic,
                          df=k - 1, p_value=p, mean_ranks=mean_ranks.tolist(),
                          labels=list(labels))


def siegel_posthoc(friedman: FriedmanResult) -> PosthocResult:
    """All-pairs z comparisons of Friedman mean ranks, BH-adjusted.

    z = |Rbar_i - Rbar_j| / sqrt(k (k+1) / (6 n)), two-sided normal p.
    """
    n, k = friedman.n_blocks, friedman.k_conditions
    se = math.sqrt(k * (k + 1) / (6.0 * n))
    raw: list[tuple[str, str, float, float]] = []
    for i in range(k):
        for j in range(i + 1, k):
            z = abs(friedman.mean_ranks[i] - friedman.mean_ranks[j]) / se
            p = 2.0 * float(sps.norm.sf(z))
            raw.append((friedman.labels[i], friedman.labels[j], z, min(p, 1.0)))
    adjusted = fdr_bh([r[3] for r in raw])
    return PosthocResult(pairs=[(a, b, z, p, q) for (a, b, z, p), q in zip(raw, adjusted)])


def spearman(x: np.ndarray, y: np.ndarray) -> CorrelationResult | None:
    """Rank correlation with t-distributed p and a Fisher-z 95% interval.

    Pairs with a missing member are deleted first (pairwise-complete). Returns
    None when either rank vector has zero variance, which the caller reports
    as an undefined correlation.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("x and y must have equal length")
    ok = np.isfinite(x) & np.isfinite(y)
    x, y = x[ok], y[ok]
    n = x.size
    if n < 4:
        raise ValueError(f"need at least 4 complete pairs, have {n}")
    rx = sps.rankdata(x, method="average")
    ry = sps.rankdata(y, method="average")
    if np.std(rx) == 0 or np.std(ry) == 0:
        return None
    rho = float(np.corrcoef(rx, ry)[0, 1])
    rho = max(min(rho, 1.0), -1.0)
    if abs(rho) > 1.0 - 1e-14:  # identical rankings up to float noise
        rho = math.copysign(1.0, rho)
    if abs(rho) == 1.0:
        return CorrelationResult(rho=rho, n=n, p_value=0.0, ci_low=rho, ci_high=rho)
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    p = 2.0 * float(sps.t.sf(abs(t), n - 2))
    z = math.atanh(rho)
    half = 1.959963984540054 / math.sqrt(n - 3)
    return CorrelationResult(rho=rho, n=n, p_value=min(p, 1.0),
                             ci_low=math.tanh(z - half), ci_high=math.tanh(z + half))


def fdr_bh(p_values: list[float] | np.ndarray) -> np.ndarray:
    """Step-up false-discovery-rate adjustment, monotone and capped at 1."""
    p = np.asarray(p_values, dtype=np.float64)
    if p.size == 0:
        return p.copy()
    if np.any((p < 0) | (p > 1)):
        raise ValueError("p-values must lie in [0, 1]")
    m = p.size
    order = np.argsort(p, kind="stable")
    scaled = p[order] * m / np.arange(1, m + 1)
    adjusted_sorted = np.minimum.accumulate(scaled[::-1])[::-1]
    adjusted = np.empty(m)
    adjusted[order] = np.minimum(adjusted_sorted, 1.0)
    return adjusted


def fdr_two_stage(p_values: list[float] | np.ndarray,
                  q: float = 0.05) -> tuple[np.ndarray, np.ndarray]:
    """Two-stage step-up adjustment with an estimated true-null count.

    Stage one runs the plain step-up procedure at q / (1 + q); the number of
    non-rejections estimates the true nulls m0. Stage two reruns the step-up
    with m0 in place of m. Adjusted values are rescaled by (1 + q) so the
    rejection rule stays "adjusted <= q"; with zero stage-one rejections this
    reduces to the plain procedure, and m0 = 0 rejects everything.
    """
    p = np.asarray(p_values, dtype=np.float64)
    if p.size == 0:
        return p.copy(), np.zeros(0, dtype=bool)
    if np.any((p < 0) | (p > 1)):
        raise ValueError("p-values must lie in [0, 1]")
    m = p.size
    q_prime = q / (1.0 + q)
    stage1 = fdr_bh(p)
    r1 = int(np.sum(stage1 <= q_prime))
    if r1 == 0:
        adjusted = np.minimum(stage1 * (1.0 + q), 1.0)
        return adjusted, adjusted <= q
    m0 = m - r1
    if m0 == 0:
        return np.zeros(m), np.ones(m, dtype=bool)
    order = np.argsort(p, kind="stable")
    scaled = p[order] * m0 / np.arange(1, m + 1)
    adjusted_sorted = np.minimum.accumulate(scaled[::-1])[::-1]
    adjusted = np.empty(m)
    adjusted[order] = np.minimum(adjusted_sorted * (1.0 + q), 1.0)
    return adjusted, adjusted <= q


def _reml_neg_loglik(tau2: float, y: np.ndarray, v: np.ndarray) -> float:
    w = 1.0 / (v + tau2)
    mu = float(np.sum(w * y) / np.sum(w))
    ll = (-0.5 * float(np.sum(np.log(v + tau2)))
          - 0.5 * math.log(float(np.sum(w)))
          - 0.5 * float(np.sum(w * (y - mu) ** 2)))
    return -ll


def meta_reml(studies: list[tuple[float, int]],
              labels: list[str] | None = None) -> MetaResult:
    """Random-effects pooling of correlations on the Fisher-z scale.

    Each study contributes atanh(rho) with variance 1/(n-3). The
    between-study variance maximizes the restricted likelihood on
    [0, 10 * var(y)] by bounded scalar search; the pooled mean uses inverse
    total-variance weights and is reported back on the correlation scale.
    Heterogeneity Q uses fixed-effect weights with df = m - 1. Studies with
    n <= 3 or |rho| >= 1 are excluded with a diagnostic.
    """
    if labels is None:
        labels = [f"study{i}" for i in range(len(studies))]
    excluded: list[tuple[str, str]] = []
    usable: list[tuple[str, float, int]] = []
    for label, (rho, n) in zip(labels, studies):
        if n <= 3:
            excluded.append((label, f"n={n} too small for Fisher-z variance"))
        elif not abs(rho) < 1:
            excluded.append((label, f"|rho|={abs(rho)} not strictly below 1"))
        else:
            usable.append((label, float(rho), int(n)))
    if len(usable) < 2:
        raise ValueError(f"need at least 2 usable studies, have {len(usable)}")

    y = np.array([math.atanh(rho) for _, rho, _ in usable])
    v = np.array([1.0 / (n - 3) for _, _, n in usable])
    m = y.size

    spread = float(np.var(y))
    if spread == 0.0:
        tau2 = 0.0
    else:
        tau2_max = 10.0 * spread
        # coarse scan then bounded refinement; the restricted likelihood is
        # smooth but can peak at the boundary
        grid = np.linspace(0.0, tau2_max, 65)
        values = [_reml_neg_loglik(t, y, v) for t in grid]
        at = int(np.argmin(values))
        lo = grid[max(at - 1, 0)]
        hi = grid[min(at + 1, grid.size - 1)]
        if lo == hi:
            tau2 = float(lo)
        else:
            res = minimize_scalar(_reml_neg_loglik, args=(y, v), bounds=(lo, hi),
                                  method="bounded", options={"xatol": 1e-10})
            tau2 = float(res.x)
        if _reml_neg_loglik(0.0, y, v) <= _reml_neg_loglik(tau2, y, v):
            tau2 = 0.0

    w = 1.0 / (v + tau2)
    mu = float(np.sum(w * y) / np.sum(w))
    se = math.sqrt(1.0 / float(np.sum(w)))
    half = 1.959963984540054 * se

    w_fixed = 1.0 / v
    mu_fixed = float(np.sum(w_fixed * y) / np.sum(w_fixed))
    q_stat = float(np.sum(w_fixed * (y - mu_fixed) ** 2))
    q_df = m - 1
    q_p = float(sps.chi2.sf(q_stat, q_df))

    return MetaResult(
        pooled_rho=math.tanh(mu),
        ci_low=math.tanh(mu - half),
        ci_high=math.tanh(mu + half),
        tau2=tau2,
        q_statistic=q_stat,
        q_df=q_df,
        q_p_value=q_p,
        per_study=[(label, rho, n, float(wi))
                   for (label, rho, n), wi in zip(usable, w)],
        excluded=excluded)


def forest_data(meta: MetaResult) -> list[dict]:
    """Forest-plot rows: one per study with its Fisher-z interval, then pooled."""
    rows = []
    for label, rho, n, _ in meta.per_study:
        z = math.atanh(rho)
        half = 1.959963984540054 / math.sqrt(n - 3)
        rows.append({"label": label, "rho": rho,
                     "ci_low": math.tanh(z - half), "ci_high": math.tanh(z + half),
                     "marker": "study"})
    rows.append({"label": "pooled", "rho": meta.pooled_rho,
                 "ci_low": meta.ci_low, "ci_high": meta.ci_high, "marker": "pooled"})
    return rows
