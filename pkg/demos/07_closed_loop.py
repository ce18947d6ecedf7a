"""Close the loop against the virtual laboratory.

Runs the whole campaign unattended: grouped LHS start, then suggestion /
simulated-measurement rounds, tracking the dominated hypervolume of the
measured archive after every iteration.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from gelflow import CampaignConfig, FitConfig, TsemoConfig, VirtualLabConfig
from gelflow.campaign import measured_hypervolume, run_closed_loop

from pathlib import Path

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

config = CampaignConfig(
    tsemo=TsemoConfig(
        spectral_points=1000,
        ga_generations=150,
        ga_population=80,
        seed=5,
        fit=FitConfig(restarts=4, seed=2, nu=1.5),
    ),
    design_seed=5,
)
lab = VirtualLabConfig(seed=5)
final = run_closed_loop(config, lab, iterations=6)

print(f"{len(final.experiments)} experiments over {final.iterations_run} iterations")
print("hypervolume trajectory:", [round(v) for v in final.hv_trajectory])
print(f"final archive hypervolume: {measured_hypervolume(final):.0f}")

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(range(len(final.hv_trajectory)), final.hv_trajectory, marker="o")
ax.set_xlabel("iteration")
ax.set_ylabel("measured-archive hypervolume")
ax.set_title("closed-loop progress on the virtual lab")
fig.tight_layout()
fig.savefig(OUT / "07_closed_loop.png", dpi=130)
print(f"wrote {OUT / '07_closed_loop.png'}")
