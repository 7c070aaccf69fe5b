# %% [markdown]
# # Cross-form consistency check
#
# Fitting the same data with all four forms from their own seeds should land
# on the same state up to optimizer tolerance.

# %%
import numpy as np

from tomofit import cross_form_check, rho_from_stokes, sample_counts

data = sample_counts(rho_from_stokes((0.3, 0.4, 0.5)), 10**5, seed=3)
rep = cross_form_check(data, "ABCD")
for f in rep.fits:
    print(f"{f.form.value}: objective {f.objective_value:.6f}, iterations {f.iterations}, seed {f.seed_region.value}")
print("pairwise trace distance:\n", np.array2string(rep.pairwise_trace_distance, precision=2))
print("threshold", round(rep.threshold, 4), "consistent:", rep.consistent)
