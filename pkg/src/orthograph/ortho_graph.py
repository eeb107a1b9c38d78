"""The orthogonal graph mod 2^n, its residue graph and the fiber structure.

Vertices are the isotropic canonical representatives in lexicographic order;
ids are positions in that order, which makes every downstream report
byte-reproducible.  Adjacency is the unit test on the bilinear form, stored
as a dense boolean matrix (desk-scale vertex counts, so pairwise sweeps stay
cheap word-parallel numpy work).

For n > 1 the graph carries its residue graph (same form over Z_2) plus the
projection of every vertex onto a residue vertex id.  The fiber of a residue
vertex is the set of vertices projecting onto it.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .projective import DEFAULT_VERTEX_CAP, canonicalize, enumerate_vertices
from .quad_forms import FormSpec, bform_matrix


@dataclass
class Fiber:
    """All vertices lying over one residue-graph vertex."""

    base: int                 # residue vertex id
    members: np.ndarray       # sorted vertex ids of the covering graph


@dataclass
class OrthoGraph:
    spec: FormSpec
    verts: np.ndarray                     # (V, dim) canonical representatives, lex order
    adj: np.ndarray                       # (V, V) bool, symmetric, hollow
    residue: Optional["OrthoGraph"]       # None exactly when n == 1
    proj_ids: np.ndarray                  # vertex id -> residue vertex id
    fiber_index: dict[int, np.ndarray] = field(repr=False, default_factory=dict)

    @property
    def num_vertices(self) -> int:
        return int(self.verts.shape[0])

    @property
    def num_edges(self) -> int:
        return int(self.adj.sum()) // 2

    def residue_graph(self) -> "OrthoGraph":
        return self if self.residue is None else self.residue

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adj[v])

    def common_neighbors(self, u: int, v: int) -> int:
        return int(np.count_nonzero(self.adj[u] & self.adj[v]))

    def project_vertex(self, v: int) -> int:
        return int(self.proj_ids[v])

    def fiber_of(self, residue_id: int) -> Fiber:
        return Fiber(base=residue_id, members=self.fiber_index[residue_id])

    def fiber_sizes(self) -> np.ndarray:
        return np.array([len(self.fiber_index[r]) for r in sorted(self.fiber_index)], dtype=np.int64)

    def vertex_id(self, rep) -> int:
        """Id of the class of ``rep`` (canonicalised first)."""
        target = np.array(canonicalize(self.spec, rep), dtype=np.int64)
        lo, hi = 0, self.num_vertices
        # binary search in lexicographic order
        while lo < hi:
            mid = (lo + hi) // 2
            row = self.verts[mid]
            c = _lex_cmp(row, target)
            if c < 0:
                lo = mid + 1
            elif c > 0:
                hi = mid
            else:
                return mid
        raise KeyError(f"{tuple(int(x) for x in target)} is not a vertex")


def _lex_cmp(a: np.ndarray, b: np.ndarray) -> int:
    for x, y in zip(a.tolist(), b.tolist()):
        if x != y:
            return -1 if x < y else 1
    return 0


def _vertex_lookup(verts: np.ndarray) -> dict[tuple, int]:
    return {tuple(row): i for i, row in enumerate(verts.tolist())}


def build_graph(spec: FormSpec, cap: int = DEFAULT_VERTEX_CAP) -> OrthoGraph:
    """Build the graph, its adjacency matrix and (for n > 1) the fiber index."""
    verts = enumerate_vertices(spec, cap)
    B = bform_matrix(spec, verts)
    adj = (B & 1).astype(bool)
    np.fill_diagonal(adj, False)

    if spec.n == 1:
        proj = np.arange(verts.shape[0], dtype=np.int64)
        g = OrthoGraph(spec=spec, verts=verts, adj=adj, residue=None, proj_ids=proj)
        g.fiber_index = {i: np.array([i], dtype=np.int64) for i in range(verts.shape[0])}
        return g

    res = build_graph(spec.residue(), cap)
    lookup = _vertex_lookup(res.verts)
    reduced = (verts & 1).tolist()
    proj = np.array([lookup[tuple(row)] for row in reduced], dtype=np.int64)
    g = OrthoGraph(spec=spec, verts=verts, adj=adj, residue=res, proj_ids=proj)
    index: dict[int, list[int]] = {r: [] for r in range(res.num_vertices)}
    for vid, rid in enumerate(proj.tolist()):
        index[rid].append(vid)
    g.fiber_index = {r: np.array(ids, dtype=np.int64) for r, ids in index.items()}
    return g


def residue_graph(spec: FormSpec, cap: int = DEFAULT_VERTEX_CAP) -> OrthoGraph:
    """The graph of the same form over Z_2."""
    return build_graph(spec.residue(), cap)


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------

def to_edge_list(g: OrthoGraph) -> str:
    """DIMACS-like edge list: 'p edge V E' header, then 'e i j' lines, 1-based."""
    iu, ju = np.nonzero(np.triu(g.adj, 1))
    lines = [f"p edge {g.num_vertices} {len(iu)}"]
    lines += [f"e {i + 1} {j + 1}" for i, j in zip(iu.tolist(), ju.tolist())]
    return "\n".join(lines) + "\n"

def to_adjacency_json(g: OrthoGraph) -> str:
    payload = {
        "spec": {"n": g.spec.n, "nu": g.spec.nu, "delta": g.spec.delta, "z": g.spec.z},
        "num_vertices": g.num_vertices,
        "num_edges": g.num_edges,
        "adjacency": {str(v): g.neighbors(v).tolist() for v in range(g.num_vertices)},
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"

def vertex_table_csv(g: OrthoGraph) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id"] + [f"a{i + 1}" for i in range(g.spec.dim)] + ["residue_id"])
    for v in range(g.num_vertices):
        w.writerow([v] + [int(x) for x in g.verts[v]] + [int(g.proj_ids[v])])
    return buf.getvalue()
