"""Numerical checks of the estimates that drive the convergence proof.

Symbol gap, tau quadratures, the linear difference rate and the bilinear
X^{s,b} ratios, each at a size that runs in under half a minute.
"""
# %%
import numpy as np

from kdvlab import cutoff_N, s_airy, s_eps, symbol_gap_bound
from kdvlab import estimates as est

# %% [markdown]
# Below the cutoff the two dispersion symbols differ by at most
# eps^2 |xi|^5 / 8, and at the cutoff that bound equals 2^-8.

# %%
eps = 1e-3
N = float(cutoff_N(eps))
xi = np.linspace(-N, N, 2001)
gap, bound = symbol_gap_bound(eps, xi)
direct = s_eps(eps, xi) - s_airy(xi)
print(f"eps={eps}: largest gap {np.abs(gap).max():.3e} (direct difference {np.abs(direct).max():.3e})")
print(f"bound at the cutoff {bound.max():.6f}, 2^-8 = {2.0**-8:.6f}")
print(est.symbol_bound_suite(samples=20_000))

# %%
for rep in est.tau_integral_suite():
    print(rep.summary())

# %% [markdown]
# Rough random data in H^1: the linear difference in X^{s,b} decays like
# eps^(2s/5) = eps^0.4.

# %%
lin = est.linear_rate_suite(trials=10)
print(f"linear difference slope {lin.slope:.3f} (anchor {lin.anchor})")

# %%
for rep in est.bilinear_suite(trials=10):
    s_gap = rep.params.get("s_prime", rep.params["s"]) - rep.params["s"]
    print(f"{rep.lemma:18s} s'-s={s_gap:3g}  slope {rep.slope:6.3f}  anchor {rep.anchor}  "
          f"{'pass' if rep.passed else 'FAIL'}")
