import numpy as np
import pytest

from conftest import brute_force_fronts, mc_hypervolume
from gelflow.errors import InvalidInputError, ObjectiveEvaluationError
from gelflow.moo import (
    ParetoFront,
    crowding_distance,
    dominates,
    hypervolume,
    hypervolume_contributions,
    nondominated_sort,
    nsga2,
    reference_from_points,
)


class TestDominates:
    def test_basic_cases(self):
        assert dominates((1, 2, 3), (2, 2, 3))
        assert not dominates((1, 2), (2, 1))
        assert not dominates((2, 1), (1, 2))
        assert not dominates((1, 2), (1, 2))

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            dominates((1, 2), (1, 2, 3))

    def test_irreflexive_and_transitive(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            a, b, c = rng.integers(0, 4, size=(3, 3)).astype(float)
            assert not dominates(a, a)
            if dominates(a, b) and dominates(b, c):
                assert dominates(a, c)


class TestNondominatedSort:
    def test_known_partition(self):
        fronts = nondominated_sort([(1, 1), (2, 2), (0, 3)])
        assert fronts == [[0, 2], [1]]

    def test_identical_points_single_front(self):
        fronts = nondominated_sort([(1.0, 2.0)] * 5)
        assert fronts == [[0, 1, 2, 3, 4]]

    def test_matches_brute_force(self):
        rng = np.random.default_rng(1)
        for _ in range(40):
            n = int(rng.integers(1, 60))
            k = int(rng.integers(2, 4))
            F = rng.integers(0, 6, size=(n, k)).astype(float)
            got = [sorted(f) for f in nondominated_sort(F)]
            assert got == brute_force_fronts(F)

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            nondominated_sort(np.empty((0, 2)))


class TestCrowdingDistance:
    def test_two_points_infinite(self):
        assert np.all(np.isinf(crowding_distance([(0.0, 1.0), (1.0, 0.0)])))

    def test_collinear_middle_value(self):
        d = crowding_distance([(0.0, 2.0), (1.0, 1.0), (2.0, 0.0)])
        assert np.isinf(d[0]) and np.isinf(d[2])
        assert d[1] == pytest.approx(2.0)

    def test_matches_textbook_recomputation(self):
        rng = np.random.default_rng(2)
        F = rng.random((6, 3))
        d = crowding_distance(F)
        expected = np.zeros(6)
        for j in range(3):
            order = np.argsort(F[:, j], kind="stable")
            span = F[order[-1], j] - F[order[0], j]
            expected[order[0]] = expected[order[-1]] = np.inf
            for pos in range(1, 5):
                if span > 0 and np.isfinite(expected[order[pos]]):
                    expected[order[pos]] += (F[order[pos + 1], j] - F[order[pos - 1], j]) / span
        assert np.allclose(d[np.isfinite(d)], expected[np.isfinite(expected)])
        assert np.array_equal(np.isinf(d), np.isinf(expected))


class TestHypervolume:
    def test_unit_box(self):
        assert hypervolume([(0.0, 0.0)], (1.0, 1.0)) == 1.0

    def test_inclusion_exclusion(self):
        assert hypervolume([(1.0, 2.0), (2.0, 1.0)], (3.0, 3.0)) == pytest.approx(3.0)

    def test_point_beyond_reference_discarded(self):
        assert hypervolume([(0.0, 0.0), (2.0, -5.0)], (1.0, 1.0)) == 1.0

    def test_empty_set(self):
        assert hypervolume(np.empty((0, 2)), (1.0, 1.0)) == 0.0

    def test_matches_monte_carlo_3d(self):
        rng = np.random.default_rng(3)
        P = rng.random((12, 3)) * 3
        ref = P.max(axis=0) + 1
        hv = hypervolume(P, ref)
        mc = mc_hypervolume(P, ref, n_samples=400_000, seed=7)
        assert hv == pytest.approx(mc, rel=0.012)

    def test_matches_monte_carlo_2d(self):
        rng = np.random.default_rng(4)
        P = rng.random((15, 2)) * 2
        ref = P.max(axis=0) + 0.5
        mc = mc_hypervolume(P, ref, n_samples=400_000, seed=8)
        assert hypervolume(P, ref) == pytest.approx(mc, rel=0.012)

    def test_monotone_under_addition(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            P = rng.random((8, 3))
            ref = np.full(3, 1.2)
            base = hypervolume(P, ref)
            extra = rng.random(3)
            assert hypervolume(np.vstack([P, extra]), ref) >= base - 1e-12

    def test_removing_dominated_point_changes_nothing(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            P = rng.random((8, 3))
            ref = np.full(3, 1.2)
            dominated = 0.5 * (P.max(axis=0) + ref)  # dominated by construction
            assert hypervolume(np.vstack([P, dominated]), ref) == pytest.approx(
                hypervolume(P, ref), rel=1e-12
            )

    def test_unsupported_dimension(self):
        with pytest.raises(InvalidInputError):
            hypervolume([(0.0,) * 4], (1.0,) * 4)


class TestHypervolumeContributions:
    def test_single_point(self):
        c = hypervolume_contributions([(1.0, 1.0)], (3.0, 3.0))
        assert c[0] == pytest.approx(4.0)

    def test_duplicates_contribute_zero(self):
        c = hypervolume_contributions([(1.0, 1.0), (1.0, 1.0), (0.0, 2.0)], (3.0, 3.0))
        assert c[0] == 0.0 and c[1] == 0.0 and c[2] > 0

    def test_matches_fine_grid(self):
        P = np.array([(1.0, 2.0), (2.0, 1.0), (0.0, 3.0)])
        ref = np.array([3.0, 3.0])
        res = 1e-3
        xs = np.arange(0, 3, res) + res / 2
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        cells = np.stack([X.ravel(), Y.ravel()], axis=1)
        dom = np.zeros((len(P), len(cells)), dtype=bool)
        for i, p in enumerate(P):
            dom[i] = np.all(p <= cells, axis=1)
        total = dom.any(axis=0)
        grid_contrib = [
            (total & ~dom[np.arange(len(P)) != i].any(axis=0)).sum() * res**2
            for i in range(len(P))
        ]
        c = hypervolume_contributions(P, ref)
        assert np.allclose(c, grid_contrib, atol=1e-2)


def sch(X):
    return np.column_stack([X[:, 0] ** 2, (X[:, 0] - 2) ** 2])


class TestNsga2:
    def test_sch_recovers_pareto_set(self):
        front = nsga2(sch, (np.array([-1000.0]), np.array([1000.0])), pop=100, gens=100, seed=0)
        xs = front.decisions[:, 0]
        assert np.mean((xs >= -0.05) & (xs <= 2.05)) >= 0.95

    def test_single_objective_quadratic(self):
        def quad(X):
            return (X - 0.3) ** 2

        front = nsga2(quad, (np.array([-2.0]), np.array([2.0])), pop=40, gens=60, seed=1)
        assert abs(front.decisions[np.argmin(front.objectives[:, 0]), 0] - 0.3) < 1e-2

    def test_frozen_dimensions_pinned_exactly(self):
        def f(X):
            return np.column_stack([(X[:, 0] - 0.3) ** 2, (X[:, 1] - 0.7) ** 2 + X[:, 2]])

        front = nsga2(
            f, (np.zeros(3), np.ones(3)), pop=24, gens=40, seed=2, frozen={1: 0.25, 2: 0.5}
        )
        assert np.all(front.decisions[:, 1] == 0.25)
        assert np.all(front.decisions[:, 2] == 0.5)

    def test_deterministic_per_seed(self):
        a = nsga2(sch, (np.array([-5.0]), np.array([5.0])), pop=30, gens=30, seed=3)
        b = nsga2(sch, (np.array([-5.0]), np.array([5.0])), pop=30, gens=30, seed=3)
        assert np.array_equal(a.decisions, b.decisions)
        assert np.array_equal(a.objectives, b.objectives)

    def test_front_is_mutually_nondominated(self):
        front = nsga2(sch, (np.array([-5.0]), np.array([5.0])), pop=30, gens=20, seed=4)
        front.validate()

    def test_invalid_population(self):
        with pytest.raises(InvalidInputError):
            nsga2(sch, (np.array([-1.0]), np.array([1.0])), pop=3, gens=5, seed=0)
        with pytest.raises(InvalidInputError):
            nsga2(sch, (np.array([-1.0]), np.array([1.0])), pop=6, gens=0, seed=0)

    def test_objective_failure_names_decision_vector(self):
        def bad(X):
            if np.any(X[:, 0] > 0.5):
                raise RuntimeError("sensor fault")
            return np.column_stack([X[:, 0], -X[:, 0]])

        with pytest.raises(ObjectiveEvaluationError) as err:
            nsga2(bad, (np.zeros(1), np.ones(1)), pop=8, gens=3, seed=5)
        assert err.value.x is not None


class TestParetoFrontType:
    def test_validate_rejects_dominated_member(self):
        front = ParetoFront(
            decisions=np.zeros((2, 1)),
            objectives=np.array([[1.0, 1.0], [2.0, 2.0]]),
            reference=np.array([3.0, 3.0]),
        )
        with pytest.raises(InvalidInputError):
            front.validate()

    def test_reference_rule(self):
        F = np.array([[0.0, 10.0], [1.0, 0.0]])
        ref = reference_from_points(F)
        assert ref[0] == pytest.approx(1.1)
        assert ref[1] == pytest.approx(11.0)
