# %% [markdown]
# # Single-qubit maximum-likelihood fit
#
# Simulate counts for the six Pauli projectors, then fit with the A/B policy.

# %%
import numpy as np

from tomofit import fidelity, fit_with_policy, rho_from_stokes, sample_counts, stokes_from_counts

s_true = np.array([0.2, -0.6, 0.7])
s_true *= 0.999 / np.linalg.norm(s_true)  # nearly pure
rho_true = rho_from_stokes(s_true)
data = sample_counts(rho_true, shots_per_setting=10_000, seed=1)
for r in data:
    print(r.setting, r.count, r.shots)

# %%
s_hat = stokes_from_counts(data)
print("raw Stokes estimate:", np.round(s_hat.as_array(), 4), "norm", round(s_hat.norm, 4), "clamped", s_hat.clamped)

fit = fit_with_policy(data)
print("form used:", fit.form.value, "| converged:", fit.converged, "| iterations:", fit.iterations)
print("rho_hat =\n", np.round(fit.rho_hat, 4))
print("fidelity to truth:", round(fidelity(fit.rho_hat, rho_true), 6))
print("min eigenvalue:", np.linalg.eigvalsh(fit.rho_hat).min())
