"""Monte Carlo scoring of filling patterns: which 3-comparison layout wins?

Reproduces the star-versus-path comparison for four items at a desk-friendly
sample size.  Run with: python demos/03_score_and_rank.py
"""

from pcmfill import SimConfig, plan_sample_size, run_level_sweep, significant_difference

# The published experiments used one million samples; the margin of error
# scales as 1/sqrt(N), so 20k is plenty to separate these two patterns.
plan = plan_sample_size(sigma_upper=0.05, epsilon=0.0005, alpha=0.01)
print(f"margin 0.0005 at alpha 0.01 needs N = {plan.n_samples:,}")

config = SimConfig(n=4, e=3, n_samples=20_000, master_seed=7)
scores = run_level_sweep(config)

rows = {("star" if s.graph_class.is_star else "path"): s for s in scores.values()}
print(f"\n{'pattern':8s} {'level':8s} {'d_euc':>8s} {'tau':>8s}")
for name, score in rows.items():
    for level, stats in score.levels.items():
        print(f"{name:8s} {level:8s} {stats.mean_d_euc:8.4f} {stats.mean_tau:8.4f}")

verdicts = significant_difference(rows["star"], rows["path"])
print("\nstar vs path verdicts:", verdicts)
