"""Multi-objective machinery: dominance, NSGA-II, exact hypervolume.

Everything uses the minimization convention. The non-dominated sort runs
through a compiled kernel because the genetic algorithm sorts the merged
parent+offspring population every generation; at a population of 5000
that is the dominant cost of a long run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InvalidInputError, ObjectiveEvaluationError


def dominates(a, b) -> bool:
    """True iff a is component-wise <= b and strictly better somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidInputError(f"objective vectors must match in length: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


@njit(cache=True)
def _ens_ranks(F):
    """Front index per row of F, rows pre-sorted lexicographically.

    Sequential-search ENS: a point can only be dominated by points that
    precede it in lexicographic order, so each point is placed in the
    first existing front holding no dominator.
    """
    n, k = F.shape
    ranks = np.empty(n, np.int64)
    head = np.full(n, -1, np.int64)  # most recently inserted member per front
    prev = np.full(n, -1, np.int64)  # linked list through each front
    nf = 0
    for i in range(n):
        assigned = -1
        for f in range(nf):
            dominated = False
            j = head[f]
            while j >= 0:
                le_all = True
                lt_any = False
                for c in range(k):
                    if F[j, c] > F[i, c]:
                        le_all = False
                        break
                    elif F[j, c] < F[i, c]:
                        lt_any = True
                if le_all and lt_any:
                    dominated = True
                    break
                j = prev[j]
            if not dominated:
                assigned = f
                break
        if assigned == -1:
            assigned = nf
            nf += 1
        ranks[i] = assigned
        prev[i] = head[assigned]
        head[assigned] = i
    return ranks


def nondominated_ranks(points) -> np.ndarray:
    """Front index (0 = non-dominated) for each input point."""
    F = np.asarray(points, dtype=float)
    if F.ndim != 2 or F.shape[0] == 0:
        raise InvalidInputError("need a non-empty 2-D array of objective vectors")
    order = np.lexsort(F.T[::-1])
    ranks_sorted = _ens_ranks(np.ascontiguousarray(F[order]))
    ranks = np.empty(len(F), dtype=np.int64)
    ranks[order] = ranks_sorted
    return ranks


def nondominated_sort(points) -> list[list[int]]:
    """Partition point indices into fronts of mutually non-dominated points."""
    ranks = nondominated_ranks(points)
    fronts = [[] for _ in range(int(ranks.max()) + 1)]
    for i, r in enumerate(ranks):
        fronts[r].append(i)
    return fronts


def nondominated_mask(points) -> np.ndarray:
    return nondominated_ranks(points) == 0


def crowding_distance(front) -> np.ndarray:
    """NSGA-II crowding distance within one front.

    Per objective: boundary points get +inf, interior points the gap
    between their neighbors normalized by the objective range; the
    objective is skipped when its range is zero.
    """
    F = np.atleast_2d(np.asarray(front, dtype=float))
    if F.shape[0] == 0:
        raise InvalidInputError("front must be non-empty")
    n, k = F.shape
    if n <= 2:
        return np.full(n, np.inf)
    dist = np.zeros(n)
    for j in range(k):
        order = np.argsort(F[:, j], kind="stable")
        fj = F[order, j]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = fj[-1] - fj[0]
        if span > 0:
            dist[order[1:-1]] += (fj[2:] - fj[:-2]) / span
    return dist


@dataclass(frozen=True)
class ParetoFront:
    """Mutually non-dominated (decision, objective) pairs with an HV reference."""

    decisions: np.ndarray  # (n, d)
    objectives: np.ndarray  # (n, k)
    reference: np.ndarray  # (k,)

    @property
    def points(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return [(self.decisions[i], self.objectives[i]) for i in range(len(self.objectives))]

    def __len__(self) -> int:
        return self.objectives.shape[0]

    def validate(self) -> None:
        if np.any(self.objectives > self.reference + 1e-12):
            raise InvalidInputError("front contains points beyond the reference")
        ranks = nondominated_ranks(self.objectives)
        if np.any(ranks != 0):
            raise InvalidInputError("front contains dominated points")


def reference_from_points(points, margin: float = 0.1) -> np.ndarray:
    """Reference point rule: per-objective maximum plus ``margin`` of the range."""
    F = np.atleast_2d(np.asarray(points, dtype=float))
    mx = F.max(axis=0)
    span = mx - F.min(axis=0)
    return mx + np.maximum(margin * span, 1e-9)


def _box_bounds(bounds) -> tuple[np.ndarray, np.ndarray]:
    if hasattr(bounds, "lower_array"):
        return bounds.lower_array, bounds.upper_array
    lo, hi = (np.asarray(b, dtype=float) for b in bounds)
    if lo.shape != hi.shape or np.any(lo >= hi):
        raise InvalidInputError("invalid box bounds")
    return lo, hi


def _evaluate(objectives, X: np.ndarray) -> np.ndarray:
    try:
        F = np.asarray(objectives(X), dtype=float)
    except Exception as err:  # identify the offending row for the caller
        for row in X:
            try:
                objectives(row[None, :])
            except Exception:
                raise ObjectiveEvaluationError(
                    f"objective evaluation failed at x={row.tolist()}: {err}", x=row.copy()
                ) from err
        raise ObjectiveEvaluationError(f"objective evaluation failed: {err}") from err
    if F.shape[0] != X.shape[0] or F.ndim != 2:
        raise InvalidInputError(
            f"objective function returned shape {F.shape} for {X.shape[0]} points"
        )
    return F


def _sbx(rng, parents: np.ndarray, lo, hi, eta_c: float, p_c: float) -> np.ndarray:
    half = parents.shape[0] // 2
    c1 = parents[0::2].copy()
    c2 = parents[1::2].copy()
    u = rng.random(c1.shape)
    beta = np.where(
        u <= 0.5,
        (2.0 * u) ** (1.0 / (eta_c + 1.0)),
        (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta_c + 1.0)),
    )
    beta[rng.random(c1.shape) >= 0.5] = 1.0  # each gene crosses with prob 1/2
    beta[rng.random(half) > p_c] = 1.0
    o1 = 0.5 * ((1 + beta) * c1 + (1 - beta) * c2)
    o2 = 0.5 * ((1 - beta) * c1 + (1 + beta) * c2)
    out = np.empty_like(parents)
    out[0::2] = o1
    out[1::2] = o2
    return np.clip(out, lo, hi)


def _polynomial_mutation(rng, X: np.ndarray, lo, hi, eta_m: float, p_m: float) -> np.ndarray:
    u = rng.random(X.shape)
    delta = np.where(
        u < 0.5,
        (2.0 * u) ** (1.0 / (eta_m + 1.0)) - 1.0,
        1.0 - (2.0 * (1.0 - u)) ** (1.0 / (eta_m + 1.0)),
    )
    mask = rng.random(X.shape) < p_m
    return np.clip(X + mask * delta * (hi - lo), lo, hi)


def _truncate_by_crowding(F: np.ndarray, keep: int) -> np.ndarray:
    """Indices of ``keep`` members after iterative worst-crowding removal.

    Removing the most crowded point and then re-evaluating its neighbors
    spreads the cut front noticeably better than the one-shot cut; the
    linked-list-plus-heap form keeps it O(F log F) so the big-population
    runs are unaffected.
    """
    import heapq

    n, k = F.shape
    if keep >= n:
        return np.arange(n)
    orders = [np.argsort(F[:, j], kind="stable") for j in range(k)]
    pos_prev = np.full((n, k), -1, dtype=np.int64)
    pos_next = np.full((n, k), -1, dtype=np.int64)
    spans = np.empty(k)
    for j, order in enumerate(orders):
        spans[j] = F[order[-1], j] - F[order[0], j]
        pos_prev[order[1:], j] = order[:-1]
        pos_next[order[:-1], j] = order[1:]

    def crowd_of(i: int) -> float:
        total = 0.0
        for j in range(k):
            p, q = pos_prev[i, j], pos_next[i, j]
            if p < 0 or q < 0:
                return np.inf
            if spans[j] > 0:
                total += (F[q, j] - F[p, j]) / spans[j]
        return total

    crowd = np.array([crowd_of(i) for i in range(n)])
    version = np.zeros(n, dtype=np.int64)
    heap = [(crowd[i], i, 0) for i in range(n)]
    heapq.heapify(heap)
    alive = np.ones(n, dtype=bool)
    n_alive = n
    while n_alive > keep:
        value, i, ver = heapq.heappop(heap)
        if not alive[i] or ver != version[i]:
            continue
        if np.isinf(value):  # only boundary points left: cut deterministically
            survivors = np.flatnonzero(alive)
            return survivors[:keep]
        alive[i] = False
        n_alive -= 1
        touched = set()
        for j in range(k):
            p, q = pos_prev[i, j], pos_next[i, j]
            if p >= 0:
                pos_next[p, j] = q
                touched.add(int(p))
            if q >= 0:
                pos_prev[q, j] = p
                touched.add(int(q))
        for t in touched:
            if alive[t]:
                crowd[t] = crowd_of(t)
                version[t] += 1
                heapq.heappush(heap, (crowd[t], t, int(version[t])))
    return np.flatnonzero(alive)


def _tournament(rng, ranks: np.ndarray, crowd: np.ndarray, n_pick: int) -> np.ndarray:
    cand = rng.integers(0, len(ranks), size=(n_pick, 2))
    a, b = cand[:, 0], cand[:, 1]
    a_wins = (ranks[a] < ranks[b]) | ((ranks[a] == ranks[b]) & (crowd[a] > crowd[b]))
    return np.where(a_wins, a, b)


def _rank_and_crowd(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ranks = nondominated_ranks(F)
    crowd = np.empty(len(F))
    for r in range(int(ranks.max()) + 1):
        idx = np.flatnonzero(ranks == r)
        crowd[idx] = crowding_distance(F[idx])
    return ranks, crowd


def nsga2(
    objectives,
    bounds,
    pop: int,
    gens: int,
    seed: int,
    frozen: dict[int, float] | None = None,
    eta_c: float = 15.0,
    p_c: float = 0.9,
    eta_m: float = 20.0,
    p_m: float | None = None,
) -> ParetoFront:
    """NSGA-II over a box; returns the final non-dominated set, deduplicated.

    ``objectives`` must be vectorized: an (n, d) array in, an (n, k) array
    of minimization objectives out. ``frozen`` maps dimension indices to
    fixed values that every individual keeps for the whole run.
    """
    if pop < 4 or pop % 2 != 0:
        raise InvalidInputError(f"population must be even and >= 4, got {pop}")
    if gens < 1:
        raise InvalidInputError(f"need gens >= 1, got {gens}")
    lo, hi = _box_bounds(bounds)
    d = lo.shape[0]
    p_m = 1.0 / d if p_m is None else p_m
    frozen = frozen or {}
    for dim, value in frozen.items():
        if not 0 <= dim < d:
            raise InvalidInputError(f"frozen dimension {dim} out of range")
        if not lo[dim] <= value <= hi[dim]:
            raise InvalidInputError(f"frozen value {value} outside bounds for dim {dim}")

    def apply_frozen(X):
        for dim, value in frozen.items():
            X[:, dim] = value
        return X

    rng = np.random.default_rng(seed)
    X = apply_frozen(lo + rng.random((pop, d)) * (hi - lo))
    F = _evaluate(objectives, X)
    ranks, crowd = _rank_and_crowd(F)

    for _ in range(gens):
        parents = X[_tournament(rng, ranks, crowd, pop)]
        off = _sbx(rng, parents, lo, hi, eta_c, p_c)
        off = apply_frozen(_polynomial_mutation(rng, off, lo, hi, eta_m, p_m))
        F_off = _evaluate(objectives, off)

        X_all = np.vstack([X, off])
        F_all = np.vstack([F, F_off])
        all_ranks = nondominated_ranks(F_all)

        sel: list[np.ndarray] = []
        n_sel = 0
        sel_crowd: list[np.ndarray] = []
        sel_ranks: list[np.ndarray] = []
        for r in range(int(all_ranks.max()) + 1):
            idx = np.flatnonzero(all_ranks == r)
            if n_sel + len(idx) <= pop:
                take = np.arange(len(idx))
            else:
                take = _truncate_by_crowding(F_all[idx], pop - n_sel)
                take.sort()
            cd = crowding_distance(F_all[idx[take]]) if len(take) else np.empty(0)
            sel.append(idx[take])
            sel_crowd.append(cd)
            sel_ranks.append(np.full(len(take), r))
            n_sel += len(take)
            if n_sel >= pop:
                break
        pick = np.concatenate(sel)
        X, F = X_all[pick], F_all[pick]
        ranks = np.concatenate(sel_ranks)
        crowd = np.concatenate(sel_crowd)

    front_idx = np.flatnonzero(ranks == 0)
    Ff, Xf = F[front_idx], X[front_idx]
    _, unique_idx = np.unique(Ff, axis=0, return_index=True)
    unique_idx.sort()
    Ff, Xf = Ff[unique_idx], Xf[unique_idx]
    return ParetoFront(decisions=Xf, objectives=Ff, reference=reference_from_points(Ff))


def _hv2d(P: np.ndarray, rx: float, ry: float) -> float:
    order = np.lexsort((P[:, 1], P[:, 0]))
    xs = P[order, 0]
    ys = P[order, 1]
    area = 0.0
    cur_y = ry
    for i in range(len(xs)):
        x_next = xs[i + 1] if i + 1 < len(xs) else rx
        if ys[i] < cur_y:
            cur_y = ys[i]
        area += (x_next - xs[i]) * (ry - cur_y)
    return area


def _hv3d(P: np.ndarray, ref: np.ndarray) -> float:
    order = np.argsort(P[:, 2], kind="stable")
    Ps = P[order]
    zs = Ps[:, 2]
    hv = 0.0
    for i in range(len(zs)):
        z_next = zs[i + 1] if i + 1 < len(zs) else ref[2]
        if z_next > zs[i]:
            hv += _hv2d(Ps[: i + 1, :2], ref[0], ref[1]) * (z_next - zs[i])
    return hv


def hypervolume(points, ref) -> float:
    """Exact hypervolume dominated by ``points`` up to ``ref`` (k = 2 or 3).

    Points with any coordinate beyond the reference are discarded; an
    empty effective set has volume 0.
    """
    ref = np.asarray(ref, dtype=float)
    k = ref.shape[0]
    if k not in (2, 3):
        raise InvalidInputError(f"exact hypervolume implemented for k in (2, 3), got {k}")
    P = np.asarray(points, dtype=float).reshape(-1, k) if np.size(points) else np.empty((0, k))
    if P.shape[0]:
        P = P[np.all(P <= ref, axis=1)]
    if P.shape[0] == 0:
        return 0.0
    P = np.unique(P, axis=0)
    return float(_hv2d(P, ref[0], ref[1]) if k == 2 else _hv3d(P, ref))


def hypervolume_contributions(points, ref) -> np.ndarray:
    """Exclusive hypervolume per point: hv(all) - hv(all minus the point)."""
    P = np.asarray(points, dtype=float)
    total = hypervolume(P, ref)
    out = np.empty(P.shape[0])
    for i in range(P.shape[0]):
        out[i] = total - hypervolume(np.delete(P, i, axis=0), ref)
    return out
