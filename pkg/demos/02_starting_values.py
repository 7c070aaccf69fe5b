# %% [markdown]
# # Starting values from Stokes parameters
#
# Each form inverts exactly onto the Stokes density matrix away from its
# singular region. Near the poles Form A and Form B swap roles.

# %%
import numpy as np

from tomofit import classify_region, rho_from_stokes, rho_from_t
from tomofit.seeding import seed_single

s = (0.3, -0.4, 0.5)
for form in "ABCD":
    sr = seed_single(s, form)
    err = np.abs(rho_from_t(sr.params) - rho_from_stokes(s)).max()
    print(f"{form}: t = {np.round(sr.params.t, 4)}, region = {sr.region.value}, error = {err:.1e}")

# %%
for s3 in (-0.9995, -0.5, 0.0, 0.5, 0.9995):
    regions = {f: classify_region((0, 0, s3), f).value for f in "ABCD"}
    print(f"s3 = {s3:+.4f}: {regions}")

# %% [markdown]
# Fallbacks are still physical starting points; the optimizer takes it from
# there.

# %%
sr = seed_single((0, 0, -1), "B")
print(sr.params.t, sr.region.value, sr.notes)
print(rho_from_t(sr.params).real)
