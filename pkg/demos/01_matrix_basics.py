"""Matrix-level basics: generate, perturb, measure, and extract weights.

Run with: python demos/01_matrix_basics.py
"""

import numpy as np

from pcmfill import (
    MODEST,
    IncompletePcm,
    consistency_report,
    euclidean_distance,
    generate_consistent_pcm,
    kendall_tau,
    llsm_complete,
    llsm_incomplete,
    perturb,
)

rng = np.random.default_rng(42)

# A consistent comparison matrix comes from a ratio of item weights.
pcm, weights = generate_consistent_pcm(4, rng)
print("generating weights:", np.round(weights.w, 4))
print("matrix:\n", np.round(pcm.a, 3))
print("consistency ratio:", consistency_report(pcm).cr)

# Real decision makers are inconsistent; the modest perturbation moves every
# pair's representative entry by a uniform amount up to 1.5.
noisy = perturb(pcm, MODEST, rng)
report = consistency_report(noisy)
print("\nafter perturbation: lambda_max=%.4f CR=%.4f" % (report.lambda_max, report.cr))

complete_w = llsm_complete(noisy)
print("complete-matrix weights:", np.round(complete_w.w, 4))

# Drop three comparisons, keeping a star around item 0, and re-estimate.
mask = np.eye(4, dtype=bool)
a = np.ones((4, 4))
for i, j in [(0, 1), (0, 2), (0, 3)]:
    mask[i, j] = mask[j, i] = True
    a[i, j], a[j, i] = noisy.a[i, j], noisy.a[j, i]
incomplete_w = llsm_incomplete(IncompletePcm(a, mask))
print("star-pattern weights:  ", np.round(incomplete_w.w, 4))

print("\ndistance between the two estimates:",
      round(euclidean_distance(incomplete_w, complete_w), 4))
print("rank agreement (Kendall tau):",
      round(kendall_tau(incomplete_w, complete_w), 4))
