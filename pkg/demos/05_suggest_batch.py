"""Propose the next day of experiments.

The suggestion shares one (temperature, surfactant) setting across the
whole batch: the first point maximizes hypervolume improvement on the
sampled front, the grouped dimensions are frozen at its values, and the
remaining four points are picked greedily within the group.
"""

from dataclasses import replace

from gelflow import CampaignConfig
from gelflow.campaign import replay_fixture
from gelflow.tsemo import suggest_batch

from pathlib import Path

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

state = replay_fixture(CampaignConfig())
cfg = replace(state.config.tsemo, ga_population=200, ga_generations=200, seed=3)
record = suggest_batch(state.dataset(), state.config.bounds, cfg)

x0 = record.batch[0]
print(f"suggested group: T = {x0.temp:.2f} C, c_CTAB = {x0.c_ctab:.3f} mmol/L")
print(f"{'F_I':>6} {'F_M':>7} {'pred flow':>10} {'pred dr2':>9} {'sd(flow)':>9} {'sd(dr2)':>8}")
for x, y in zip(record.batch, record.predicted):
    print(
        f"{x.f_i:>6.2f} {x.f_m:>7.2f} {-y.neg_product_flow:>10.2f} "
        f"{y.sq_radius_dev:>9.1f} {y.sigma[0]:>9.2f} {y.sigma[1]:>8.1f}"
    )
print(f"(draw seeds {record.sample_seeds}, GA seed {record.ga_seed})")
