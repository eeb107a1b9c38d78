import random

import numpy as np
import pytest

from orthograph.graph_analysis import (
    PermGroup,
    arc_orbit_count,
    automorphisms,
    census,
    chromatic_exact,
    count_automorphisms_backtracking,
    dsatur_greedy,
    fiber_wreath_check,
    is_proper_coloring,
    k_colorable,
    max_clique,
    max_independent_set,
    refine_colors,
    vertex_orbits,
)
from orthograph.ortho_graph import build_graph
from orthograph.quad_forms import FormSpec


def adj_from_edges(n, edges):
    a = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        a[u, v] = a[v, u] = True
    return a


def cycle(n):
    return adj_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    a = ~np.eye(n, dtype=bool)
    return a


def path(n):
    return adj_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def petersen():
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    return adj_from_edges(10, edges)


def random_graph(n, p, seed):
    rng = random.Random(seed)
    return adj_from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------


def test_census_path_is_complete_k2():
    m = census(path(2))
    assert m.classification == "complete"
    assert m.degree == 1
    assert m.adj_common == {0: 1}
    assert m.nonadj_common == {}


def test_census_triangle():
    m = census(complete(3))
    assert m.classification == "complete"
    assert m.adj_common == {1: 3}


def test_census_octahedron_with_fibers():
    g = build_graph(FormSpec(2, 1, 1))
    m = census(g.adj, g.proj_ids)
    assert m.classification == "srg"
    assert m.degree == 4
    assert m.adj_common == {2: 12}
    assert m.nonadj_common == {4: 3}
    assert m.nonadj_same_fiber == {4: 3}
    assert m.nonadj_cross_fiber == {}


def test_census_qsrg_case():
    g = build_graph(FormSpec(2, 2, 0))
    m = census(g.adj, g.proj_ids)
    assert m.classification == "qsrg"
    assert m.degree == 16
    assert set(m.adj_common) == {4}
    assert set(m.nonadj_common) == {8, 16}
    assert set(m.nonadj_same_fiber) == {16}
    assert set(m.nonadj_cross_fiber) == {8}
    # multiplicities: same-fiber pairs are C(4,2) per fiber over 9 fibers
    assert m.nonadj_same_fiber[16] == 9 * 6


def test_census_irregular():
    m = census(path(4))
    assert m.classification == "irregular"


def test_census_empty():
    m = census(np.zeros((0, 0), dtype=bool))
    assert m.classification == "empty"


def test_fiber_wreath_check():
    g = build_graph(FormSpec(2, 1, 1))
    assert fiber_wreath_check(g)
    g2 = build_graph(FormSpec(2, 2, 1))
    assert fiber_wreath_check(g2)


# ---------------------------------------------------------------------------
# cliques / independent sets / colouring
# ---------------------------------------------------------------------------


def test_max_clique_simple():
    cl, ok = max_clique(complete(5))
    assert ok and len(cl) == 5
    cl, ok = max_clique(cycle(5))
    assert ok and len(cl) == 2
    cl, ok = max_clique(petersen())
    assert ok and len(cl) == 2
    g = build_graph(FormSpec(2, 1, 1))
    cl, ok = max_clique(g.adj)
    assert ok and len(cl) == 3
    for u in cl:
        for v in cl:
            assert u == v or g.adj[u, v]


def test_max_independent_set():
    iset, ok = max_independent_set(cycle(5))
    assert ok and len(iset) == 2
    iset, ok = max_independent_set(petersen())
    assert ok and len(iset) == 4
    g = build_graph(FormSpec(2, 1, 1))
    iset, ok = max_independent_set(g.adj)
    assert ok and len(iset) == 2


def test_k_colorable():
    res, ok, _ = k_colorable(complete(4), 3)
    assert ok and res is None
    res, ok, _ = k_colorable(complete(4), 4)
    assert ok and res is not None and is_proper_coloring(complete(4), res)
    res, ok, _ = k_colorable(cycle(5), 2)
    assert ok and res is None
    res, ok, _ = k_colorable(cycle(5), 3)
    assert ok and res is not None


def test_dsatur_greedy_proper():
    for adj in [cycle(7), petersen(), random_graph(12, 0.4, 5)]:
        assert is_proper_coloring(adj, dsatur_greedy(adj))


@pytest.mark.parametrize("adj,chi", [
    (complete(3), 3),
    (cycle(5), 3),
    (cycle(6), 2),
    (petersen(), 3),
    (path(4), 2),
])
def test_chromatic_exact_known(adj, chi):
    res = chromatic_exact(adj)
    assert res.conclusive
    assert res.chromatic == chi
    assert is_proper_coloring(adj, res.coloring)
    assert len(set(res.coloring)) == chi


def test_chromatic_with_seed():
    g = build_graph(FormSpec(2, 1, 1))
    res_graph = g.residue_graph()
    seed_res = chromatic_exact(res_graph.adj)
    seed = [seed_res.coloring[g.proj_ids[u]] for u in range(6)]
    res = chromatic_exact(g.adj, seed_coloring=seed)
    assert res.conclusive and res.chromatic == 3
    with pytest.raises(ValueError):
        chromatic_exact(g.adj, seed_coloring=[0] * 6)


def test_chromatic_lower_witness_valid():
    g = build_graph(FormSpec(1, 2, 2))  # 27 vertices, chromatic 9 via independence ratio
    res = chromatic_exact(g.adj)
    assert res.conclusive and res.chromatic == 9
    w = res.lower_witness
    assert w["type"] == "independence-ratio"
    assert w["alpha"] == 3
    members = w["witness_set"]
    for u in members:
        for v in members:
            assert u == v or not g.adj[u, v]


def test_chromatic_budget_inconclusive():
    adj = random_graph(40, 0.5, 99)
    res = chromatic_exact(adj, node_budget=5)
    assert not res.conclusive
    assert res.chromatic is None
    assert res.lower <= res.upper


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------


def test_refine_colors_splits_by_degree():
    a32 = path(4).astype(np.float32)
    colors = refine_colors(a32, np.zeros(4, dtype=np.int64))
    # ends and middles get different colours
    assert colors[0] == colors[3]
    assert colors[1] == colors[2]
    assert colors[0] != colors[1]


@pytest.mark.parametrize("adj,order", [
    (path(2), 2),
    (complete(3), 6),
    (complete(5), 120),
    (cycle(5), 10),
    (cycle(6), 12),
    (path(4), 2),
    (petersen(), 120),
])
def test_automorphisms_known_orders(adj, order):
    res = automorphisms(adj)
    assert res.conclusive
    assert res.order == order


@pytest.mark.parametrize("seed", range(8))
def test_automorphisms_match_backtracking_oracle_random(seed):
    adj = random_graph(7, 0.45, seed)
    res = automorphisms(adj)
    assert res.conclusive
    assert res.order == count_automorphisms_backtracking(adj)


@pytest.mark.parametrize("spec_args,order", [
    ((1, 2, 0), 72),      # rook graph on 9
    ((1, 2, 1), 720),     # 15-vertex symplectic-type graph
    ((2, 1, 1), 48),      # octahedron
])
def test_automorphisms_match_backtracking_oracle_structured(spec_args, order):
    g = build_graph(FormSpec(*spec_args))
    res = automorphisms(g.adj)
    assert res.conclusive
    assert res.order == order == count_automorphisms_backtracking(g.adj)


def test_automorphism_generators_verified_and_transitivity():
    g = build_graph(FormSpec(2, 1, 1))
    res = automorphisms(g.adj)
    for p in res.generators:
        perm = np.array(p)
        assert (g.adj[np.ix_(perm, perm)] == g.adj).all()
    assert res.vertex_transitive and res.arc_transitive
    # a path on 4 vertices is neither vertex- nor arc-transitive
    res = automorphisms(path(4))
    assert not res.vertex_transitive
    assert not res.arc_transitive


def test_arc_orbits_count_matches_structure():
    res = automorphisms(cycle(4))
    gens = [np.array(p) for p in res.generators]
    assert arc_orbit_count(cycle(4), gens) == 1
    assert len(vertex_orbits(4, gens)) == 1


def test_automorphisms_vertex_budget():
    adj = np.zeros((10, 10), dtype=bool)
    res = automorphisms(adj, max_vertices=5)
    assert not res.conclusive
    assert res.method.startswith("skipped")


def test_disconnected_twins():
    # two isolated vertices plus an edge: |Aut| = 2 * 2 = 4
    adj = adj_from_edges(4, [(0, 1)])
    res = automorphisms(adj)
    assert res.conclusive and res.order == 4
    assert res.order == count_automorphisms_backtracking(adj)


def test_perm_group_orders():
    # symmetric group on 4 points from two generators
    s4 = PermGroup([(1, 0, 2, 3), (1, 2, 3, 0)], 4)
    assert s4.order() == 24
    cyc = PermGroup([(1, 2, 3, 4, 0)], 5)
    assert cyc.order() == 5
    trivial = PermGroup([], 5)
    assert trivial.order() == 1
    klein = PermGroup([(1, 0, 3, 2), (2, 3, 0, 1)], 4)
    assert klein.order() == 4


def test_perm_group_matches_oracle_on_random_generator_sets():
    rng = random.Random(31337)
    for _ in range(12):
        n = rng.randrange(4, 8)
        gens = []
        for _ in range(rng.randrange(1, 4)):
            p = list(range(n))
            rng.shuffle(p)
            gens.append(tuple(p))
        group = PermGroup(gens, n)
        # oracle: BFS closure of the generating set
        seen = {tuple(range(n))}
        frontier = list(seen)
        while frontier:
            nxt = []
            for g in frontier:
                for h in gens:
                    prod = tuple(g[h[i]] for i in range(n))
                    if prod not in seen:
                        seen.add(prod)
                        nxt.append(prod)
            frontier = nxt
        assert group.order() == len(seen)


def test_backtracking_oracle_factorials():
    assert count_automorphisms_backtracking(complete(4)) == 24
    assert count_automorphisms_backtracking(np.zeros((4, 4), dtype=bool)) == 24
    assert count_automorphisms_backtracking(cycle(7)) == 14
