"""
===========================================
Error versus shots for several robustnesses
===========================================

A reduced version of the full sweep (the CLI's ``nmecut sweep`` runs the
500-state default). For each robustness level the mean L2 distance between
the cut estimate and the exact distribution drops like ``1/sqrt(shots)``, and
more entanglement means a lower curve.

If matplotlib is installed the curves are also saved to
``robustness_sweep.png``.
"""

from nmecut.experiment import ExperimentConfig, monotonicity_violations, run_sweep

config = ExperimentConfig(shot_budgets=(64, 256, 1024, 4096, 16384), n_states=100, master_seed=4)
records = run_sweep(config)

budgets = config.shot_budgets
print("R     " + "".join(f"{n:>10d}" for n in budgets))
for r in config.robustness_levels:
    row = [rec for rec in records if rec.robustness == r]
    print(f"{r:<6}" + "".join(f"{rec.mean_l2:10.4f}" for rec in row))

print("monotonicity violations:", monotonicity_violations(records) or "none")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(5, 4))
    for r in config.robustness_levels:
        row = [rec for rec in records if rec.robustness == r]
        ax.errorbar(budgets, [x.mean_l2 for x in row], yerr=[x.stderr_l2 for x in row], label=f"R={r:g}", capsize=2)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("shots")
    ax.set_ylabel("mean L2 error")
    ax.legend()
    fig.tight_layout()
    fig.savefig("robustness_sweep.png", dpi=120)
    print("saved robustness_sweep.png")
