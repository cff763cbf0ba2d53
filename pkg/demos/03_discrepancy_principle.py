"""
Choosing mu by the discrepancy principle
========================================

With a known noise norm epsilon, pick mu so that the Tikhonov residual
equals eta * epsilon. The same mu is then handed to every modified method;
TSVD gets the smallest k whose residual is below eta * epsilon.
"""

import numpy as np

import nearreg
from nearreg import DiscrepancySpec, RegMethod
from nearreg.select import tikhonov_residual

prob = nearreg.make_problem("phillips", 200)
fac = nearreg.svd(prob.A)
e = nearreg.white_noise(prob.b_true, 1e-3, nearreg.RngStream(seed=1))
sp = nearreg.to_spectral(fac, prob.b_true + e)
spec = DiscrepancySpec(epsilon=float(np.linalg.norm(e)), eta=1.0)

mu = nearreg.discrepancy_mu(sp, spec)
print(f"mu = {mu:.6e}, residual = {tikhonov_residual(sp, mu):.12e}, target = {spec.target:.12e}")

bundle = nearreg.shared_mu_pipeline(sp, spec, [RegMethod.parse(m) for m in ("frmod", "tikhonov", "shiftk", "tsvd")])
for label, method in bundle.methods.items():
    x = nearreg.solve_spectral(sp, method)
    err = nearreg.relative_error(x, prob.x_true)
    print(f"{label:9s} k = {bundle.k_effective[label]!s:5s} relative error = {err:.4e}")

# For comparison: the parameter that would minimize the true error.
for kind in ("tikhonov", "shiftk", "tsvd"):
    best = nearreg.optimal_params(sp, prob.x_true, RegMethod(kind))
    print(f"optimal {kind:9s} error = {best.rel_error:.4e}  ({best.method})")
