"""Deterministic validation of the surrogate optimum.

The multi-objective problem collapses to a single objective: maximize
product flow subject to a ceiling on the radius-deviation mean, with the
temperature ceiling swept separately. Each solve is certified against a
dense tensor grid of both surrogate means. A small grid keeps the demo
fast; the acceptance suite runs the full 33^4 certification.
"""

from gelflow import CampaignConfig, EpsConfig
from gelflow.campaign import replay_fixture
from gelflow.epsopt import export_sweep, sweep
from gelflow.tsemo import train_models

from pathlib import Path

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

state = replay_fixture(CampaignConfig())
models = train_models(state.dataset(), state.config.bounds, state.config.tsemo)

results = sweep(
    models,
    epsilons=[2, 4, 6, 9, 12, 15, 18, 21, 25],
    temp_uppers=[62.0, 80.0],
    config=EpsConfig(grid_resolution=17),
    bounds=state.config.bounds,
)

print(f"{'eps':>5} {'T_ub':>6} {'flow':>7} {'temp':>7} {'c_ctab':>7} {'certified':>9}")
for r in results:
    if r.feasible:
        print(
            f"{r.epsilon:>5.0f} {r.temp_upper:>6.1f} {-r.objective:>7.2f} "
            f"{r.x.temp:>7.2f} {r.x.c_ctab:>7.3f} {str(r.certified):>9}"
        )
    else:
        print(f"{r.epsilon:>5.0f} {r.temp_upper:>6.1f} {'infeasible':>16}")

export_sweep(results, OUT / "06_sweep.csv")
print(f"wrote {OUT / '06_sweep.csv'}")
