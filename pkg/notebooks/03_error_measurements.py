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
# # Measuring the asymptotic claims
#
# The exact identities hold; the estimators built from them carry error terms
# that can only be measured. This notebook looks at four of them.

# %%
import math

import numpy as np

from primelab import identities as ids
from primelab import runs
from primelab.sieve import build_omega_table, build_prime_table

primes = build_prime_table(10**6)
omegas = build_omega_table(10**6, primes.primes)

# %% [markdown]
# ## The fractional-part sum
#
# Summing {log2(x/n)} over all n <= x and subtracting x/log 2 - x - log x/log 4
# leaves a residual. Legendre's formula gives sum floor(log2(x/n)) = x - s2(x),
# with s2 the binary digit sum, so the residual tracks s2(x) - log2 sqrt(2 pi).
# It is not bounded: it reaches its running maximum at x = 2**k - 1.

# %%
x = np.arange(1, 10**6 + 1)
residual = ids.frac_sum_table(10**6) - (x / math.log(2) - x - np.log(x) / math.log(4))
digit_sum = np.array([bin(v).count("1") for v in x.tolist()])
print("max |residual - (s2 - log2 sqrt(2 pi))|, x >= 10:",
      np.abs(residual - digit_sum + 0.5 * math.log2(2 * math.pi))[9:].max())
for lo, hi in ((10**2, 10**3), (10**3, 10**4), (10**4, 10**5), (10**5, 10**6)):
    sel = (x >= lo) & (x <= hi)
    print(f"sup |residual| on [{lo}, {hi}]: {np.abs(residual[sel]).max():.3f}")

# %% [markdown]
# The odd-only variant appears where the corollary is substituted into the
# estimate for H - G + T. Its residual against x/log 4 - x/2 - log x/log 16
# is shown alongside.

# %%
odd = ids.frac_sum_table(10**6, "odd_only")
odd_main = x / math.log(4) - x / 2 - np.log(x) / math.log(16)
for v in (10, 1000, 65535, 10**6):
    print(v, round(residual[v - 1], 4), round(odd[v - 1] - odd_main[v - 1], 4))

# %% [markdown]
# ## pi - Theta
#
# The claimed error is O(1/log x), so (pi - Theta) log x should stay bounded.
# On a geometric grid it instead grows by about log(10)/4 per decade, which
# means pi - Theta settles near 1/4.

# %%
config = runs.ScanConfig("scan", "theta-estimate", 10, 10**6, points=13)
_, recs = runs.run_scan(config, primes, omegas)
for r in recs:
    print(f"{r.x:>8} pi={r.pi:>6} Theta={r.estimate:12.4f} raw={r.raw_error:+.4f} scaled={r.scaled_error:+.4f}")

# %% [markdown]
# For comparison, the classical estimate theta(x)/log x misses pi(x) by the
# integral of theta(t)/(t log^2 t), which grows like x/log^2 x.

# %%
for r in recs[::3]:
    print(r.x, round(r.pi - r.theta / math.log(r.x), 3), round(r.raw_error, 4))

# %% [markdown]
# ## nu, R and eta
#
# nu substitutes x for theta(x). R and eta estimate the two integrals; their
# scan records report integral minus estimate through raw_error (R) and
# scaled_error (eta). Since R = Theta - theta/log x and eta = R log x, both
# integral errors coincide with the pi - Theta error above.

# %%
for label in ("nu", "r", "eta"):
    cfg = runs.ScanConfig("scan", label, 10, 10**6, points=5)
    _, rs = runs.run_scan(cfg, primes, omegas)
    print(label, [(r.x, round(r.raw_error, 3), round(r.scaled_error, 3)) for r in rs])

# %% [markdown]
# ## Dusart's lower bound
#
# Quoted as valid from x = 88783. pi stays at 8596 from 88783 to 88788 while
# the bound climbs past it; the first prime after that, 88789, restores it.

# %%
for v in range(88781, 88791):
    d = ids.dusart_check(v, primes)
    print(v, d.pi, round(d.lower_bound, 4), d.lower_holds)
