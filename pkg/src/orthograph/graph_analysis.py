"""Brute-force measurement of graph parameters.

Everything here is measurement, independent of the closed-form predictions:
pairwise common-neighbour censuses, exact chromatic number with verified
witnesses, and the automorphism group computed by partition refinement with
vertex individualization plus a deterministic Schreier-Sims order count.

Determinism: all tie-breaking is by vertex id / color id, searches iterate
candidates in ascending order, and no randomness is used, so repeated runs
produce identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ortho_graph import OrthoGraph

# ---------------------------------------------------------------------------
# Pairwise census
# ---------------------------------------------------------------------------


@dataclass
class MeasuredParams:
    """Exact degree and common-neighbour statistics of one graph."""

    vertex_count: int
    degree_counts: dict[int, int]              # degree value -> #vertices
    adj_common: dict[int, int]                 # common-neighbour value -> #adjacent pairs
    nonadj_common: dict[int, int]              # value -> #non-adjacent pairs
    nonadj_same_fiber: Optional[dict[int, int]]
    nonadj_cross_fiber: Optional[dict[int, int]]
    classification: str

    @property
    def regular(self) -> bool:
        return len(self.degree_counts) <= 1

    @property
    def degree(self) -> Optional[int]:
        return next(iter(self.degree_counts)) if len(self.degree_counts) == 1 else None


def _value_counts(values: np.ndarray) -> dict[int, int]:
    vals, counts = np.unique(values, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def common_neighbor_matrix(adj: np.ndarray) -> np.ndarray:
    """|N(u) & N(v)| for all pairs.  float32 products are exact for counts < 2^24."""
    a = adj.astype(np.float32)
    return (a @ a.T).astype(np.int32)


def census(adj: np.ndarray, fiber_ids: Optional[np.ndarray] = None) -> MeasuredParams:
    v = adj.shape[0]
    if v == 0:
        return MeasuredParams(0, {}, {}, {}, None, None, "empty")
    deg = adj.sum(axis=1).astype(np.int64)
    degree_counts = _value_counts(deg)
    C = common_neighbor_matrix(adj)
    upper = np.triu(np.ones((v, v), dtype=bool), 1)
    is_adj = adj[upper]
    cvals = C[upper]
    adj_common = _value_counts(cvals[is_adj])
    nonadj_common = _value_counts(cvals[~is_adj])
    same = cross = None
    if fiber_ids is not None:
        same_fiber = (fiber_ids[:, None] == fiber_ids[None, :])[upper]
        same = _value_counts(cvals[~is_adj & same_fiber])
        cross = _value_counts(cvals[~is_adj & ~same_fiber])

    if not len(degree_counts) <= 1:
        cls = "irregular"
    elif not nonadj_common:
        cls = "complete"
    elif len(adj_common) <= 1 and len(nonadj_common) == 1:
        cls = "srg"
    elif len(adj_common) <= 1 and len(nonadj_common) >= 2:
        cls = "qsrg"
    else:
        cls = "regular"  # regular but with several values on adjacent pairs
    return MeasuredParams(v, degree_counts, adj_common, nonadj_common, same, cross, cls)


def fiber_wreath_check(g: OrthoGraph) -> bool:
    """True iff any within-fiber permutation is an automorphism.

    Equivalent to: distinct vertices in one fiber have identical neighbourhoods.
    """
    for rid in sorted(g.fiber_index):
        members = g.fiber_index[rid]
        if len(members) < 2:
            continue
        rows = g.adj[members]
        if not bool((rows == rows[0]).all()):
            return False
    return True


# ---------------------------------------------------------------------------
# Cliques / independent sets (bitset branch and bound)
# ---------------------------------------------------------------------------


class _Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self) -> bool:
        self.used += 1
        return self.used <= self.limit


def _adj_masks(adj: np.ndarray) -> list[int]:
    v = adj.shape[0]
    masks = []
    for i in range(v):
        m = 0
        for j in np.flatnonzero(adj[i]).tolist():
            m |= 1 << j
        masks.append(m)
    return masks


def max_clique(adj: np.ndarray, node_budget: int = 500_000) -> tuple[list[int], bool]:
    """Largest clique via branch and bound with a greedy colouring bound.

    Returns (clique_vertices, conclusive).  On budget exhaustion the clique
    found so far is returned with conclusive=False.
    """
    v = adj.shape[0]
    if v == 0:
        return [], True
    masks = _adj_masks(adj)
    budget = _Budget(node_budget)
    best: list[int] = []
    conclusive = True

    def expand(r: list[int], p: int) -> None:
        nonlocal best, conclusive
        if not budget.tick():
            conclusive = False
            return
        if p == 0:
            if len(r) > len(best):
                best = r[:]
            return
        # greedy colouring of p: vertices in colour class c can add at most c to r
        order: list[int] = []
        bound: list[int] = []
        remaining = p
        c = 0
        while remaining:
            c += 1
            avail = remaining
            while avail:
                u = (avail & -avail).bit_length() - 1
                order.append(u)
                bound.append(c)
                avail &= ~masks[u]
                avail &= ~(1 << u)
                remaining &= ~(1 << u)
        sub = p
        for idx in range(len(order) - 1, -1, -1):
            if not conclusive:
                return
            if len(r) + bound[idx] <= len(best):
                return
            u = order[idx]
            expand(r + [u], sub & masks[u])
            sub &= ~(1 << u)

    expand([], (1 << v) - 1)
    return sorted(best), conclusive


def max_independent_set(adj: np.ndarray, node_budget: int = 500_000) -> tuple[list[int], bool]:
    comp = ~adj
    np.fill_diagonal(comp, False)
    return max_clique(comp, node_budget)


# ---------------------------------------------------------------------------
# Exact colouring
# ---------------------------------------------------------------------------


@dataclass
class ColoringResult:
    chromatic: Optional[int]          # None when inconclusive
    lower: int
    upper: int
    conclusive: bool
    coloring: list[int]               # proper colouring with `upper` colours
    lower_witness: dict               # {"type": "clique"|"independence-ratio"|"exhaustive-search", ...}
    nodes_used: int


def is_proper_coloring(adj: np.ndarray, coloring) -> bool:
    col = np.asarray(coloring)
    if col.shape[0] != adj.shape[0]:
        return False
    iu, ju = np.nonzero(np.triu(adj, 1))
    return bool((col[iu] != col[ju]).all())


def dsatur_greedy(adj: np.ndarray) -> list[int]:
    v = adj.shape[0]
    colors = [-1] * v
    deg = adj.sum(axis=1)
    neighbor_colors: list[set[int]] = [set() for _ in range(v)]
    for _ in range(v):
        pick, key = -1, None
        for u in range(v):
            if colors[u] != -1:
                continue
            k = (len(neighbor_colors[u]), int(deg[u]), -u)
            if key is None or k > key:
                pick, key = u, k
        c = 0
        while c in neighbor_colors[pick]:
            c += 1
        colors[pick] = c
        for w in np.flatnonzero(adj[pick]).tolist():
            neighbor_colors[w].add(c)
    return colors


def k_colorable(adj: np.ndarray, k: int, node_budget: int = 2_000_000) -> tuple[Optional[list[int]], bool, int]:
    """Exact k-colourability by saturation-ordered backtracking.

    Returns (coloring, conclusive, nodes): (None, True, _) proves no
    k-colouring exists.  New colour indices are introduced in order, which
    kills colour-permutation symmetry.
    """
    v = adj.shape[0]
    if v == 0:
        return [], True, 0
    if k <= 0:
        return None, True, 0
    colors = [-1] * v
    neighbor_colors = [0] * v  # bitmask of colours seen on neighbours
    budget = _Budget(node_budget)
    nbrs = [np.flatnonzero(adj[u]).tolist() for u in range(v)]

    def choose() -> int:
        pick, key = -1, None
        for u in range(v):
            if colors[u] != -1:
                continue
            sat = bin(neighbor_colors[u]).count("1")
            kk = (sat, len(nbrs[u]), -u)
            if key is None or kk > key:
                pick, key = u, kk
        return pick

    def rec(colored: int, used: int) -> Optional[bool]:
        # True = found, False = exhausted, None = budget
        if not budget.tick():
            return None
        if colored == v:
            return True
        u = choose()
        limit = min(used + 1, k)
        for c in range(limit):
            if neighbor_colors[u] >> c & 1:
                continue
            colors[u] = c
            touched = []
            for w in nbrs[u]:
                if not neighbor_colors[w] >> c & 1:
                    neighbor_colors[w] |= 1 << c
                    touched.append(w)
            res = rec(colored + 1, max(used, c + 1))
            if res:
                return True
            for w in touched:
                neighbor_colors[w] &= ~(1 << c)
            colors[u] = -1
            if res is None:
                return None
        return False

    res = rec(0, 0)
    if res is True:
        return colors[:], True, budget.used
    if res is False:
        return None, True, budget.used
    return None, False, budget.used


def chromatic_exact(
    adj: np.ndarray,
    node_budget: int = 2_000_000,
    seed_coloring: Optional[list[int]] = None,
) -> ColoringResult:
    """Exact chromatic number with a verified colouring and a lower-bound witness.

    The upper bound starts from the better of the seed colouring (when given)
    and a saturation-greedy colouring; the lower bound from an exact maximum
    clique and the independence-ratio bound ceil(V / alpha).  Any remaining
    gap is closed by exact k-colourability searches from above.
    """
    v = adj.shape[0]
    if v == 0:
        return ColoringResult(0, 0, 0, True, [], {"type": "empty"}, 0)
    nodes = 0

    candidates = [dsatur_greedy(adj)]
    if seed_coloring is not None:
        if not is_proper_coloring(adj, seed_coloring):
            raise ValueError("seed colouring is not proper")
        candidates.append(list(seed_coloring))
    coloring = min(candidates, key=lambda c: len(set(c)))
    coloring = _normalize_colors(coloring)
    upper = len(set(coloring))

    clique, clique_ok = max_clique(adj, node_budget)
    iset, iset_ok = max_independent_set(adj, node_budget)
    lower = 1
    witness: dict = {"type": "trivial"}
    if clique_ok and len(clique) > lower:
        lower = len(clique)
        witness = {"type": "clique", "vertices": clique}
    if iset_ok:
        ratio = math.ceil(v / len(iset))
        if ratio > lower:
            lower = ratio
            witness = {"type": "independence-ratio", "alpha": len(iset), "witness_set": iset}

    while lower < upper:
        attempt, conclusive, used = k_colorable(adj, upper - 1, node_budget)
        nodes += used
        if not conclusive:
            return ColoringResult(None, lower, upper, False, coloring, witness, nodes)
        if attempt is None:
            witness = {"type": "exhaustive-search", "colors_refuted": upper - 1,
                       "supporting": witness}
            lower = upper
        else:
            coloring = _normalize_colors(attempt)
            upper = len(set(coloring))

    if not is_proper_coloring(adj, coloring):
        raise AssertionError("solver produced an improper colouring")
    return ColoringResult(upper, lower, upper, True, coloring, witness, nodes)


def _normalize_colors(coloring: list[int]) -> list[int]:
    remap: dict[int, int] = {}
    out = []
    for c in coloring:
        if c not in remap:
            remap[c] = len(remap)
        out.append(remap[c])
    return out


# ---------------------------------------------------------------------------
# Automorphism group
# ---------------------------------------------------------------------------


@dataclass
class AutGroupResult:
    order: int
    generators: list[tuple[int, ...]]
    vertex_transitive: bool
    arc_transitive: bool
    conclusive: bool
    nodes_used: int
    method: str = "refinement-search"


def refine_colors(a32: np.ndarray, colors: np.ndarray) -> np.ndarray:
    """Equitable refinement: split colour classes by neighbour counts per class.

    ``a32`` is the adjacency matrix as float32 (counts are exact below 2^24).
    The relabeling only depends on sorted (colour, count-profile) keys, so the
    result is equivariant under graph automorphisms.
    """
    v = a32.shape[0]
    while True:
        k = int(colors.max()) + 1
        onehot = np.zeros((v, k), dtype=np.float32)
        onehot[np.arange(v), colors] = 1.0
        counts = (a32 @ onehot).astype(np.int64)
        keys = [(int(colors[u]), counts[u].tobytes()) for u in range(v)]
        remap = {key: i for i, key in enumerate(sorted(set(keys)))}
        new = np.fromiter((remap[key] for key in keys), dtype=np.int64, count=v)
        if len(remap) == k:
            return new
        colors = new


def _is_automorphism(adj: np.ndarray, perm: np.ndarray) -> bool:
    return bool((adj[np.ix_(perm, perm)] == adj).all())


def _target_cell(colors: np.ndarray) -> Optional[np.ndarray]:
    """Smallest non-singleton colour class, ties broken by colour id."""
    vals, counts = np.unique(colors, return_counts=True)
    nonsingleton = counts > 1
    if not nonsingleton.any():
        return None
    sizes = counts[nonsingleton]
    cands = vals[nonsingleton]
    best = cands[sizes == sizes.min()][0]
    return np.flatnonzero(colors == best)


def _individualize(a32: np.ndarray, colors: np.ndarray, v: int) -> np.ndarray:
    out = colors.copy()
    out[v] = colors.max() + 1
    return refine_colors(a32, out)


def _orbit_reps(n: int, gens: list[np.ndarray]) -> np.ndarray:
    """Connected components of the union of generator graphs, by label propagation."""
    reps = np.arange(n)
    if not gens:
        return reps
    changed = True
    while changed:
        changed = False
        for g in gens:
            m = np.minimum(reps, reps[g])
            if bool((m != reps).any()):
                reps = np.minimum(m, m[g])
                changed = True
    return reps


def _point_orbit(v: int, gens: list[np.ndarray]) -> set[int]:
    orbit = {v}
    frontier = [v]
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                w = int(g[u])
                if w not in orbit:
                    orbit.add(w)
                    nxt.append(w)
        frontier = nxt
    return orbit


class _SearchBudgetExceeded(Exception):
    pass


def automorphism_generators(adj: np.ndarray, node_budget: int = 300_000) -> tuple[list[np.ndarray], list[int], int]:
    """Generators of the automorphism group by individualization-refinement.

    The leftmost path fixes a base leaf; every other explored leaf whose
    refinement trace matches the base trace is compared against it and either
    yields a verified automorphism or is discarded.  Off the base path a
    subtree is abandoned as soon as it contributes one automorphism (one coset
    representative is enough; the stabilizer part is generated along the base
    path).  Sibling candidates already reachable from a tried candidate by the
    generators found so far (restricted to those fixing the current path
    pointwise) are skipped.

    Returns (generators, base_path, nodes).  Every generator found at a leaf
    fixes exactly the individualized prefix its path shares with the base
    path, so the group order is the product over base-path levels of the
    orbit of the individualized vertex under the generators fixing the
    preceding prefix (see group_order_from_search).
    """
    n = adj.shape[0]
    if n == 0:
        return [], [], 0
    a32 = adj.astype(np.float32)
    base_colors = refine_colors(a32, np.zeros(n, dtype=np.int64))
    gens: list[np.ndarray] = []
    base_path: list[int] = []
    base_trace: list[tuple] = []
    base_leaf: Optional[np.ndarray] = None
    budget = _Budget(node_budget)
    identity = np.arange(n)

    def invariant(colors: np.ndarray) -> tuple:
        return tuple(np.bincount(colors).tolist())

    def leaf_labeling(colors: np.ndarray) -> np.ndarray:
        # colour c -> the unique vertex with colour c
        out = np.empty(n, dtype=np.int64)
        out[colors] = identity
        return out

    def fixing_gens(path_arr: np.ndarray) -> list[np.ndarray]:
        return [g for g in gens if bool((g[path_arr] == path_arr).all())]

    def rec(colors: np.ndarray, path: list[int], on_base: bool) -> bool:
        nonlocal base_leaf
        if not budget.tick():
            raise _SearchBudgetExceeded
        depth = len(path)
        inv = invariant(colors)
        if base_leaf is None:
            base_trace.append(inv)
        elif depth >= len(base_trace) or inv != base_trace[depth]:
            return False

        cell = _target_cell(colors)
        if cell is None:
            labeling = leaf_labeling(colors)
            if base_leaf is None:
                base_leaf = labeling
                return False
            perm = np.empty(n, dtype=np.int64)
            perm[base_leaf] = labeling
            if _is_automorphism(adj, perm) and bool((perm != identity).any()):
                gens.append(perm)
                return True
            return False

        found_any = False
        tried: list[int] = []
        path_arr = np.array(path, dtype=np.int64)
        reps = None
        reps_version = -1
        for v in sorted(cell.tolist()):
            if tried:
                if reps_version != len(gens):
                    reps = _orbit_reps(n, fixing_gens(path_arr))
                    reps_version = len(gens)
                if any(reps[v] == reps[u] for u in tried):
                    continue
            tried.append(v)
            child_on_base = base_leaf is None or (
                on_base and len(base_path) > depth and base_path[depth] == v
            )
            if base_leaf is None:
                base_path.append(v)
            child = _individualize(a32, colors, v)
            found = rec(child, path + [v], child_on_base)
            found_any = found_any or found
            if found and not on_base:
                return True
        return found_any

    rec(base_colors, [], True)
    return gens, base_path, budget.used


def group_order_from_search(n: int, gens: list[np.ndarray], base_path: list[int]) -> int:
    """|G| as the product of base-path orbit sizes.

    Valid because the search discovers, for every base-path prefix, coset
    representatives reaching the whole orbit of the next individualized
    vertex under the stabilizer of that prefix.
    """
    order = 1
    for i, v in enumerate(base_path):
        prefix = np.array(base_path[:i], dtype=np.int64)
        fixing = [g for g in gens if bool((g[prefix] == prefix).all())]
        order *= len(_point_orbit(v, fixing))
    return order


# ---- Schreier-Sims -----------------------------------------------------------------


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p . q)(x) = p(q(x))."""
    return tuple(p[q[i]] for i in range(len(p)))


def _inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


class PermGroup:
    """Deterministic Schreier-Sims stabilizer chain over a generator list."""

    def __init__(self, generators: list[tuple[int, ...]], degree: int):
        self.degree = degree
        self.identity = tuple(range(degree))
        self.base: list[int] = []
        self.strong: list[tuple[int, ...]] = []
        self.transversals: list[dict[int, tuple[int, ...]]] = []
        for g in generators:
            if g != self.identity:
                self._add_generator(tuple(g))

    # level generators: strong generators fixing base[:i] pointwise
    def _level_gens(self, i: int) -> list[tuple[int, ...]]:
        return [g for g in self.strong if all(g[b] == b for b in self.base[:i])]

    def _rebuild_transversal(self, i: int) -> None:
        b = self.base[i]
        gens = self._level_gens(i)
        trans = {b: self.identity}
        frontier = [b]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = g[x]
                    if y not in trans:
                        trans[y] = _compose(g, trans[x])
                        nxt.append(y)
            frontier = nxt
        while len(self.transversals) <= i:
            self.transversals.append({})
        self.transversals[i] = trans

    def _sift(self, g: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
        for i, b in enumerate(self.base):
            x = g[b]
            if x not in self.transversals[i]:
                return g, i
            g = _compose(_inverse(self.transversals[i][x]), g)
        return g, len(self.base)

    def _add_generator(self, g: tuple[int, ...]) -> None:
        residue, level = self._sift(g)
        if residue == self.identity:
            return
        if level == len(self.base):
            moved = min(i for i in range(self.degree) if residue[i] != i)
            self.base.append(moved)
            self.transversals.append({})
        self.strong.append(residue)
        for i in range(level + 1):
            if i < len(self.base):
                self._rebuild_transversal(i)
        self._close(level)

    def _close(self, start: int) -> None:
        """Verify the chain with Schreier generators from ``start`` down."""
        i = start
        while i >= 0:
            b = self.base[i]
            gens = self._level_gens(i)
            trans = self.transversals[i]
            dirty = False
            for x in sorted(trans):
                tx = trans[x]
                for s in gens:
                    schreier = _compose(_inverse(trans[s[x]]), _compose(s, tx))
                    residue, level = self._sift(schreier)
                    if residue != self.identity:
                        if level == len(self.base):
                            moved = min(j for j in range(self.degree) if residue[j] != j)
                            self.base.append(moved)
                            self.transversals.append({})
                        self.strong.append(residue)
                        for j in range(level + 1):
                            if j < len(self.base):
                                self._rebuild_transversal(j)
                        dirty = True
                        break
                if dirty:
                    break
            if dirty:
                i = len(self.base) - 1
            else:
                i -= 1

    def order(self) -> int:
        out = 1
        for t in self.transversals:
            out *= len(t)
        return out


def vertex_orbits(n: int, gens: list[np.ndarray]) -> list[list[int]]:
    reps = _orbit_reps(n, gens)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(int(reps[v]), []).append(v)
    return [groups[k] for k in sorted(groups)]


def arc_orbit_count(adj: np.ndarray, gens: list[np.ndarray]) -> int:
    n = adj.shape[0]
    iu, ju = np.nonzero(adj)
    arcs = set(zip(iu.tolist(), ju.tolist()))
    seen: set[tuple[int, int]] = set()
    orbits = 0
    for arc in sorted(arcs):
        if arc in seen:
            continue
        orbits += 1
        frontier = [arc]
        seen.add(arc)
        while frontier:
            nxt = []
            for (u, v) in frontier:
                for g in gens:
                    img = (int(g[u]), int(g[v]))
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            frontier = nxt
    return orbits


def automorphisms(adj: np.ndarray, max_vertices: int = 150, node_budget: int = 300_000) -> AutGroupResult:
    """Full automorphism group: order, verified generators, transitivity flags."""
    n = adj.shape[0]
    if n > max_vertices:
        return AutGroupResult(0, [], False, False, False, 0, method="skipped: vertex budget")
    if n == 0:
        return AutGroupResult(1, [], True, True, True, 0)
    try:
        gens, base_path, nodes = automorphism_generators(adj, node_budget)
    except _SearchBudgetExceeded:
        return AutGroupResult(0, [], False, False, False, node_budget, method="skipped: node budget")
    for g in gens:
        if not _is_automorphism(adj, g):
            raise AssertionError("search emitted a non-automorphism")
    order = group_order_from_search(n, gens, base_path)
    if order <= 1_000_000_000:
        # independent order computation from the same generators; long-base
        # wreath-like groups are skipped, they make the chain huge
        ss = PermGroup([tuple(int(x) for x in g) for g in gens], n).order()
        if ss != order:
            raise AssertionError(f"orbit-product order {order} != stabilizer-chain order {ss}")
    orbits = vertex_orbits(n, gens)
    vt = len(orbits) == 1
    arc_orbits = arc_orbit_count(adj, gens) if adj.any() else 0
    at = arc_orbits == 1 if adj.any() else True
    return AutGroupResult(order, [tuple(int(x) for x in g) for g in gens], vt, at, True, nodes)


def count_automorphisms_backtracking(adj: np.ndarray, limit: int = 10_000_000) -> int:
    """Oracle: count all automorphisms by direct backtracking on images.

    Exponential in general; intended for cross-checking the refinement search
    on small graphs.
    """
    n = adj.shape[0]
    deg = adj.sum(axis=1)
    count = 0
    nodes = 0
    image = [-1] * n
    used = [False] * n

    def rec(u: int) -> None:
        nonlocal count, nodes
        nodes += 1
        if nodes > limit:
            raise _SearchBudgetExceeded
        if u == n:
            count += 1
            return
        for w in range(n):
            if used[w] or deg[w] != deg[u]:
                continue
            ok = True
            for p in range(u):
                if adj[u, p] != adj[w, image[p]]:
                    ok = False
                    break
            if ok:
                image[u] = w
                used[w] = True
                rec(u + 1)
                used[w] = False
                image[u] = -1

    rec(0)
    return count
