"""Walk through the process model on the bundled campaign data.

Loads the packaged experiment table, back-solves the raw measurements
implied by each stored row, recomputes the three objectives, and draws
the classic trade-off view: squared radius deviation over product flow,
colored by temperature excess, with the +/-5 nm target band shaded.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from gelflow import ProcessConstants, load_si_fixture
from gelflow.process import measurement_from_objectives, objectives_from_measurement

from pathlib import Path

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

constants = ProcessConstants()
dataset = load_si_fixture()
print(f"loaded {len(dataset)} experiments over iterations 0..8")

# every stored row reproduces exactly from the implied raw measurement
for row in dataset.rows:
    m = measurement_from_objectives(row.x, row.y, constants)
    y = objectives_from_measurement(row.x, m, constants)
    assert y.sq_radius_dev == row.y.sq_radius_dev
    assert y.temp_dev == row.y.temp_dev
print("objective recomputation: exact for all rows")

Y = dataset.objective_matrix()
flow = -Y[:, 0]
print(f"product flow range: {flow.min():.2f} .. {flow.max():.2f} mL/min")
print(f"radius deviation range: {Y[:, 1].min():.2f} .. {Y[:, 1].max():.2f} nm^2")

fig, ax = plt.subplots(figsize=(7, 5))
ax.axhspan(0, 25, color="0.85", label="target band (+/-5 nm)")
sc = ax.scatter(flow, Y[:, 1], c=Y[:, 2], cmap="viridis", marker="x")
fig.colorbar(sc, label="temperature excess over 60 C (K)")
ax.set_yscale("symlog", linthresh=25)
ax.set_xlabel("product flow (mL/min)")
ax.set_ylabel("squared radius deviation (nm$^2$)")
ax.legend(loc="upper left")
fig.tight_layout()
fig.savefig(OUT / "01_experiments.png", dpi=130)
print(f"wrote {OUT / '01_experiments.png'}")
