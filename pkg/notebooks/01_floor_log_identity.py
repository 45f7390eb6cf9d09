# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # The odd floor-log sum
#
# For every positive integer x, summing floor(log2(x/n)) over odd n <= x
# gives floor(x/2). This notebook evaluates both sides exactly and shows why
# floors are taken from integers rather than from floating logarithms.

# %%
import math

import numpy as np

from primelab import identities as ids
from primelab.exact_math import floor_log2_ratio

# %% [markdown]
# ## Single points
#
# At x = 10 the odd n are 1, 3, 5, 7, 9 with floors 3, 1, 1, 0, 0.

# %%
for x in (1, 9, 10, 1000, 123457):
    print(x, ids.odd_floor_sum(x), ids.rhs_general(x), ids.count_evens(x))

# %% [markdown]
# ## Why integer floors
#
# floor(log2(x/n)) is the bit length of x // n, minus one. A float log can land
# on the wrong side of an integer when x/n is a power of two or within a few
# ulps of one. Count how often the naive float route disagrees.

# %%
rng = np.random.default_rng(0)
bad = 0
trials = 20000
for _ in range(trials):
    k = int(rng.integers(1, 40))
    n = int(rng.integers(10**5, 10**7))
    x = (n << k) - 1  # just below n * 2**k, so the true floor is k - 1
    naive = math.floor((math.log(x) - math.log(n)) / math.log(2))
    assert floor_log2_ratio(x, n).k == k - 1
    bad += naive != k - 1
print(f"float floor wrong one below a power of two: {bad} / {trials}")

# %% [markdown]
# ## Every x up to a million
#
# The batch route counts, for each odd n, the doublings n * 2**j that fit
# below x. One event table plus a cumulative sum covers all x at once.

# %%
limit = 10**6
lhs = ids.odd_floor_sum_table(limit)[1:]
xs = np.arange(1, limit + 1)
print("mismatches:", int(np.count_nonzero(lhs != xs // 2)))
