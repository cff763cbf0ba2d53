"""
Colored (violet) noise
======================

Noise whose energy grows along an orthogonal basis: white coefficients are
weighted by logspace(-alpha, 0, m) and mapped back. In the left singular
basis of A the noise concentrates on the components that regularization
suppresses anyway.
"""

import numpy as np

import nearreg
from nearreg import ExperimentConfig, emit_report, run_experiment
from nearreg.linalg import dct_matrix

prob = nearreg.make_problem("deriv2", 200)
U = nearreg.svd(prob.A).U
rng = nearreg.RngStream(seed=0).generator()

for alpha in (0.0, 1.0, 2.0):
    e = nearreg.colored_noise(U, alpha, 0.01, prob.b_true, rng)
    c = U.T @ e
    print(f"alpha = {alpha}: energy in first/last quarter of U-coefficients = "
          f"{np.sum(c[:50] ** 2):.2e} / {np.sum(c[-50:] ** 2):.2e}")

# The DCT basis gives high-frequency noise independent of A.
e = nearreg.colored_noise(dct_matrix(200), 1.0, 0.01, prob.b_true, rng)
print(f"DCT noise norm / |b| = {np.linalg.norm(e) / np.linalg.norm(prob.b_true):.4f}")

cfg = ExperimentConfig(problem="deriv2", n=200, levels=(0.01, 0.005, 0.001), noise="colored",
                       alpha=1.0, basis="svd", runs=100, seed=1, workers=4)
print()
print(emit_report(run_experiment(cfg), "md"))
