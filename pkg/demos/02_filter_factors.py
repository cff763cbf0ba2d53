"""
Filter factors of the regularization families
=============================================

Every method here solves (A^T A + L^T L) x = A^T b with L = D V^T, so the
solution is sum_j phi_j (u_j^T b / sigma_j) v_j. The methods differ only in
the filter factors phi_j.
"""

import numpy as np

from nearreg import RegMethod, filter_factors

sigma = np.logspace(0, -4, 9)
mu = 1e-2

methods = [
    RegMethod("tikhonov", mu=mu),
    RegMethod("frmod", mu=mu),     # phi = 1 for sigma >= mu
    RegMethod("shiftk", mu=mu),    # leading block untouched, Tikhonov on the tail
    RegMethod("cutk", mu=mu),      # same as TSVD with k = #{sigma > mu}
    RegMethod("scaled", mu=mu),
    RegMethod("scaledk", mu=mu),
    RegMethod("theta", mu=mu, theta=0.5),
]

print("sigma_j   " + "".join(f"{m.label:>11s}" for m in methods))
table = np.column_stack([filter_factors(sigma, m) for m in methods])
for s, row in zip(sigma, table):
    print(f"{s:.1e}   " + "".join(f"{v:11.4f}" for v in row))

# The theta family interpolates linearly between ShiftK (theta = 0) and
# ScaledK (theta = 1) once the split index is held fixed.
from nearreg import build_modification

k = build_modification(RegMethod("shiftk", mu=mu), sigma).k_effective
phi = {t: filter_factors(sigma, RegMethod("theta", mu=mu, k=k, theta=t)) for t in (0.0, 0.3, 1.0)}
defect = np.max(np.abs(phi[0.3] - (0.7 * phi[0.0] + 0.3 * phi[1.0])))
print(f"\nsplit index k = {k}; affine defect at theta = 0.3: {defect:.1e}")
