"""Latin-hypercube initial designs with grouped reactor settings.

Temperature and surfactant concentration are expensive to change between
runs, so the initial design fixes them per group: one LHS places the
(temp, c_ctab) group centers, a second independent LHS spreads (f_i, f_m)
within each group.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .process import Bounds, DesignPoint


@dataclass(frozen=True)
class ExperimentGroup:
    """A batch of settings sharing one (temp, c_ctab) pair."""

    temp: float
    c_ctab: float
    settings: tuple[tuple[float, float], ...]  # (f_i, f_m) pairs

    def design_points(self) -> list[DesignPoint]:
        return [
            DesignPoint(f_i=fi, f_m=fm, c_ctab=self.c_ctab, temp=self.temp)
            for fi, fm in self.settings
        ]


def lhs(n: int, d: int, seed: int, centered: bool = False) -> np.ndarray:
    """Latin hypercube sample of n points in [0, 1)^d.

    Each coordinate hits each of the n equal-width bins exactly once.
    Placement within a bin is uniform random by default; ``centered``
    pins points to bin midpoints for reproducibility studies.
    """
    if n < 1 or d < 1:
        raise InvalidInputError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    u = np.full((n, d), 0.5) if centered else rng.random((n, d))
    cells = np.empty((n, d))
    for j in range(d):
        cells[:, j] = rng.permutation(n)
    return (cells + u) / n


def scale_to_bounds(unit: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    return lower + unit * (upper - lower)


def grouped_initial_design(
    n_groups: int,
    per_group: int,
    bounds: Bounds,
    seed: int,
    centered: bool = False,
) -> list[ExperimentGroup]:
    """Grouped LHS: n_groups (temp, c_ctab) centers, per_group (f_i, f_m) each.

    Returns n_groups * per_group experiments in total; every expanded
    DesignPoint lies within ``bounds``.
    """
    if n_groups < 1 or per_group < 1:
        raise InvalidInputError(
            f"need n_groups >= 1 and per_group >= 1, got {n_groups}, {per_group}"
        )
    lo, hi = bounds.lower_array, bounds.upper_array
    # dimensions: 0=f_i, 1=f_m, 2=c_ctab, 3=temp
    centers = scale_to_bounds(lhs(n_groups, 2, seed, centered), lo[[3, 2]], hi[[3, 2]])
    groups = []
    for g in range(n_groups):
        flows = scale_to_bounds(
            lhs(per_group, 2, seed + 1 + g, centered), lo[[0, 1]], hi[[0, 1]]
        )
        groups.append(
            ExperimentGroup(
                temp=float(centers[g, 0]),
                c_ctab=float(centers[g, 1]),
                settings=tuple((float(fi), float(fm)) for fi, fm in flows),
            )
        )
    return groups
