"""Analytic power of a two-sided two-sample t-test, effect 1.5 sd, alpha 0.05.

Used to sanity-check the bootstrap curve on the synthetic cohort: at 60
participants per group the expected fraction significant is ~1.
"""
import numpy as np
from scipy import stats

for n in (5, 10, 20, 60):
    df = 2 * n - 2
    nc = 1.5 * np.sqrt(n / 2)
    c = stats.t.ppf(0.975, df)
    print(n, 1 - stats.nct.cdf(c, df, nc) + stats.nct.cdf(-c, df, nc))
