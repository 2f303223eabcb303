"""Pooling one correlation across many languages with random effects.

Each language contributes a Spearman coefficient and its sample size. The
coefficients move to the z scale, a between-study variance is fitted by
restricted maximum likelihood, and the pooled effect comes back with a
confidence interval plus a heterogeneity test. Forest rows are what a
plotting tool needs, nothing more.
"""

import numpy as np

from surprisalkit import forest_data, meta_reml

rng = np.random.default_rng(8)
true_effect = 0.25
languages = [f"lang{i:02d}" for i in range(12)]
studies = []
for _ in languages:
    n = int(rng.integers(40, 400))
    # per-study correlation scattered around the common effect
    z = np.arctanh(true_effect) + rng.normal(0, 0.08) + rng.normal(0, 1 / np.sqrt(n - 3))
    studies.append((float(np.tanh(z)), n))

meta = meta_reml(studies, labels=languages)
print(f"pooled correlation: {meta.pooled_rho:.3f} "
      f"[{meta.ci_low:.3f}, {meta.ci_high:.3f}]  (true effect {true_effect})")
print(f"between-study variance: {meta.tau2:.5f}")
print(f"heterogeneity: Q={meta.q_statistic:.2f} on {meta.q_df} df, p={meta.q_p_value:.3f}")

print("\nforest rows:")
for row in forest_data(meta):
    marker = "■" if row["marker"] == "pooled" else "·"
    print(f"  {marker} {row['label']:<8} {row['rho']:+.3f} "
          f"[{row['ci_low']:+.3f}, {row['ci_high']:+.3f}]")
