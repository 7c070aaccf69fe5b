# %% [markdown]
# # T-matrix forms
#
# Four single-qubit layouts, each producing a valid density matrix for any
# non-zero real parameter vector.

# %%
import numpy as np

from tomofit import FormId, TParams, build_T, closed_form_rho, rho_from_t
from tomofit.linalg import hermitian_eigenvalues

t = np.array([1.0, 2.0, 3.0, 4.0])
for form in "ABCD":
    p = TParams(form, 1, t)
    print(f"Form {form}: T =\n{build_T(p)}")
    print(f"  rho =\n{np.round(rho_from_t(p), 4)}")
    print(f"  matches explicit matrix: {np.allclose(rho_from_t(p), closed_form_rho(form, t))}")

# %% [markdown]
# Overall scale is a gauge freedom: multiplying `t` by any non-zero constant
# leaves the state unchanged.

# %%
p = TParams("B", 1, t)
print(np.allclose(rho_from_t(p), rho_from_t(p.scaled(-17.0))))

# %% [markdown]
# The upper-triangular two-qubit layout: diagonal t4..t1, then complex pairs
# by superdiagonal.

# %%
T = build_T(TParams(FormId.B_multi, 2, np.arange(1, 17)))
print(T)
rho = rho_from_t(TParams(FormId.B_multi, 2, np.random.default_rng(0).normal(size=16)))
print("eigenvalues:", np.round(hermitian_eigenvalues(rho), 4), "trace:", np.trace(rho).real)
