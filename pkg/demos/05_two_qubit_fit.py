# %% [markdown]
# # Two-qubit reconstruction
#
# 36 tensor-product settings; linear inversion seeds the triangular form.

# %%
import numpy as np

from tomofit import FormId, fit_form, linear_inversion, sample_counts, uhlmann_fidelity
from tomofit.linalg import hermitian_eigenvalues

bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
rho_true = 0.9 * np.outer(bell, bell) + 0.1 * np.eye(4) / 4
data = sample_counts(rho_true, shots_per_setting=10_000, seed=5)

rho_lin = linear_inversion(data)
print("linear inversion eigenvalues:", np.round(hermitian_eigenvalues(rho_lin), 4))

# %%
for form in (FormId.B_multi, FormId.A_multi):
    fit = fit_form(data, form)
    print(f"{form.value}: converged={fit.converged}, iterations={fit.iterations}, "
          f"fidelity={uhlmann_fidelity(fit.rho_hat, rho_true):.5f}")
    print("  eigenvalues:", np.round(hermitian_eigenvalues(fit.rho_hat), 4))
