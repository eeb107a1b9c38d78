"""Induced subgraphs on the neighbours / non-neighbours of the base vertex.

The base vertex is the class of e1 = (1, 0, ..., 0), which is isotropic for
every form shape.  The first subconstituent is induced on its neighbours, the
second on the remaining vertices.  Membership is decided set-theoretically
(adjacent / non-adjacent), with a recorded justification that non-adjacent
means distance exactly two whenever common neighbours exist.

For n > 1 the second set always contains the other members of the base
vertex's own fiber.  Those are twins of the base vertex, hence isolated
inside the second subconstituent; the closed-form parameter claims describe
the subgraph without them, so the builder tracks the sibling mask and exposes
the reduced subgraph alongside the full one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ortho_graph import OrthoGraph


@dataclass
class Subconstituent:
    parent: OrthoGraph
    i: int
    base: int
    ids: np.ndarray              # parent vertex ids, ascending
    adj: np.ndarray              # induced adjacency
    fiber_ids: np.ndarray        # residue vertex id per member
    sibling_mask: np.ndarray     # members sharing the base vertex's fiber (i=2 only)
    distance2_consistent: bool   # i=2: every member shares a neighbour with the base

    @property
    def num_vertices(self) -> int:
        return int(self.ids.shape[0])

    @property
    def sibling_count(self) -> int:
        return int(self.sibling_mask.sum())

    def reduced(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(ids, adjacency, fiber ids) without the base vertex's fiber siblings."""
        keep = ~self.sibling_mask
        return self.ids[keep], self.adj[np.ix_(keep, keep)], self.fiber_ids[keep]


def base_vertex(g: OrthoGraph) -> int:
    e1 = [1] + [0] * (g.spec.dim - 1)
    return g.vertex_id(e1)


def subconstituent(g: OrthoGraph, i: int, base: Optional[int] = None) -> Subconstituent:
    """Induced subgraph on the distance-i set from the base vertex, i in {1, 2}."""
    if i not in (1, 2):
        raise ValueError(f"subconstituent index must be 1 or 2, got {i}")
    b = base_vertex(g) if base is None else int(base)
    if i == 1:
        member_mask = g.adj[b].copy()
    else:
        member_mask = ~g.adj[b]
        member_mask[b] = False
    ids = np.flatnonzero(member_mask)
    sub_adj = g.adj[np.ix_(ids, ids)]
    fiber_ids = g.proj_ids[ids]
    siblings = (fiber_ids == g.proj_ids[b]) if i == 2 else np.zeros(len(ids), dtype=bool)
    if i == 2 and len(ids):
        # distance exactly 2 <=> a common neighbour with the base exists
        shared = (g.adj[ids] & g.adj[b]).any(axis=1)
        dist2 = bool(shared.all())
    else:
        dist2 = True
    return Subconstituent(
        parent=g, i=i, base=b, ids=ids, adj=sub_adj,
        fiber_ids=fiber_ids, sibling_mask=siblings, distance2_consistent=dist2,
    )
