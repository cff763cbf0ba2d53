"""
Monte-Carlo comparison with white noise
=======================================

Mean relative errors over seeded trials for phillips (n = 200). Each trial
draws its own noise stream, so the table is identical for any number of
workers. Pass ``RUNS`` on the command line to trade accuracy for time.
"""

import sys

from nearreg import ExperimentConfig, emit_report, run_experiment

runs = int(sys.argv[1]) if len(sys.argv) > 1 else 100
cfg = ExperimentConfig(problem="phillips", n=200, runs=runs, seed=1, workers=4)
report = run_experiment(cfg)
print(emit_report(report, "md"))

# The same experiment with oracle-optimal parameters instead of the
# discrepancy principle isolates the quality of each filter shape.
cfg = ExperimentConfig(problem="shaw", n=200, levels=(0.001,), runs=runs, seed=1, mode="optimal", workers=4)
print(emit_report(run_experiment(cfg), "md"))
