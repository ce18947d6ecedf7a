import numpy as np
import pytest

from gelflow.doe import grouped_initial_design, lhs
from gelflow.errors import InvalidInputError
from gelflow.process import DEFAULT_BOUNDS


def bin_occupancy_ok(points, n):
    bins = np.floor(points * n).astype(int)
    return all(sorted(bins[:, j]) == list(range(n)) for j in range(points.shape[1]))


class TestLhs:
    def test_single_point(self):
        pts = lhs(1, 3, seed=0)
        assert pts.shape == (1, 3)
        assert np.all((pts >= 0) & (pts < 1))

    def test_bin_occupancy_5x2(self):
        assert bin_occupancy_ok(lhs(5, 2, seed=1), 5)

    def test_bin_occupancy_sweep(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            n = int(rng.integers(1, 40))
            d = int(rng.integers(1, 6))
            seed = int(rng.integers(0, 1 << 31))
            assert bin_occupancy_ok(lhs(n, d, seed), n)

    def test_deterministic(self):
        assert np.array_equal(lhs(5, 2, seed=7), lhs(5, 2, seed=7))

    def test_centered_places_midpoints(self):
        pts = lhs(4, 2, seed=0, centered=True)
        assert np.allclose((pts * 4) % 1, 0.5)

    def test_invalid_sizes(self):
        with pytest.raises(InvalidInputError):
            lhs(0, 2, seed=0)
        with pytest.raises(InvalidInputError):
            lhs(2, 0, seed=0)


class TestGroupedDesign:
    def test_default_campaign_size(self):
        groups = grouped_initial_design(3, 5, DEFAULT_BOUNDS, seed=0)
        points = [x for g in groups for x in g.design_points()]
        assert len(points) == 15

    def test_minimal(self):
        groups = grouped_initial_design(1, 1, DEFAULT_BOUNDS, seed=0)
        (x,) = groups[0].design_points()
        DEFAULT_BOUNDS.validate(x)

    def test_all_points_within_bounds(self):
        for seed in range(10):
            for g in grouped_initial_design(3, 5, DEFAULT_BOUNDS, seed=seed):
                for x in g.design_points():
                    DEFAULT_BOUNDS.validate(x)

    def test_group_values_shared_and_distinct(self):
        groups = grouped_initial_design(3, 5, DEFAULT_BOUNDS, seed=11)
        temps, cs = set(), set()
        for g in groups:
            xs = g.design_points()
            assert {x.temp for x in xs} == {g.temp}
            assert {x.c_ctab for x in xs} == {g.c_ctab}
            temps.add(g.temp)
            cs.add(g.c_ctab)
        assert len(temps) == 3
        assert len(cs) == 3

    def test_flow_lhs_independent_per_group(self):
        groups = grouped_initial_design(2, 5, DEFAULT_BOUNDS, seed=5)
        a = np.array([s for s in groups[0].settings])
        b = np.array([s for s in groups[1].settings])
        assert not np.allclose(a, b)

    def test_invalid_counts(self):
        with pytest.raises(InvalidInputError):
            grouped_initial_design(0, 5, DEFAULT_BOUNDS, seed=0)
        with pytest.raises(InvalidInputError):
            grouped_initial_design(3, 0, DEFAULT_BOUNDS, seed=0)
