"""Grouped Latin-hypercube design for the first day in the lab.

Temperature and surfactant concentration are costly to change, so the
initial design fixes them per group of five runs: one LHS places the
three (temp, c_ctab) group settings, a second independent LHS spreads
the two pump flows inside each group.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from gelflow import DEFAULT_BOUNDS, grouped_initial_design

from pathlib import Path

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

groups = grouped_initial_design(n_groups=3, per_group=5, bounds=DEFAULT_BOUNDS, seed=7)

print("initial design (15 experiments):")
for g, group in enumerate(groups):
    print(f"  group {g}: T = {group.temp:.1f} C, c_CTAB = {group.c_ctab:.3f} mmol/L")
    for f_i, f_m in group.settings:
        print(f"    F_I = {f_i:.2f}, F_M = {f_m:.2f} mL/min")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.2))
colors = ["tab:blue", "tab:orange", "tab:green"]
for g, group in enumerate(groups):
    ax1.scatter(group.temp, group.c_ctab, s=90, color=colors[g], label=f"group {g}")
    flows = list(zip(*group.settings))
    ax2.scatter(flows[0], flows[1], color=colors[g])
ax1.set_xlim(60, 80), ax1.set_ylim(0.14, 0.41)
ax1.set_xlabel("temperature (C)"), ax1.set_ylabel("c_CTAB (mmol/L)")
ax1.set_title("group settings"), ax1.legend()
ax2.set_xlim(0.1, 0.9), ax2.set_ylim(2, 18)
ax2.set_xlabel("F_I (mL/min)"), ax2.set_ylabel("F_M (mL/min)")
ax2.set_title("flow settings within groups")
fig.tight_layout()
fig.savefig(OUT / "02_design.png", dpi=130)
print(f"wrote {OUT / '02_design.png'}")
