"""
Test problems and their spectra
===============================

Four classical first-kind integral equations, discretized to n x n
matrices. All of them are ill-posed: the singular values decay to the
rounding level without a visible gap.
"""

import numpy as np

import nearreg

n = 64
for name in ("phillips", "shaw", "deriv2", "heat"):
    prob = nearreg.make_problem(name, n)
    sigma = nearreg.svd(prob.A).sigma
    # the exact data are consistent with the exact solution
    consistency = np.linalg.norm(prob.A @ prob.x_true - prob.b_true)
    print(f"{name:9s} sigma_1 = {sigma[0]:.3e}  sigma_n = {sigma[-1]:.3e}  "
          f"kappa = {sigma[0] / sigma[-1]:.1e}  |A x - b| = {consistency:.1e}")

# Picard plot in numbers: |u_j^T b| decays faster than sigma_j for exact
# data, then levels off once noise is added.
prob = nearreg.make_problem("shaw", n)
fac = nearreg.svd(prob.A)
b = prob.b_true + nearreg.white_noise(prob.b_true, 1e-3, nearreg.RngStream(0))
coef_exact = np.abs(fac.U.T @ prob.b_true)
coef_noisy = np.abs(fac.U.T @ b)
print("\n j   sigma_j    |u_j.b_exact|  |u_j.b_noisy|")
for j in range(0, 20, 2):
    print(f"{j + 1:2d}  {fac.sigma[j]:.2e}   {coef_exact[j]:.2e}       {coef_noisy[j]:.2e}")
