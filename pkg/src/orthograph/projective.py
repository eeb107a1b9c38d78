"""Canonical class representatives and vertex enumeration.

A tuple with at least one unit coordinate represents a point of the
projective-style quotient: two tuples are identified when one is a unit
multiple of the other.  The index of the first unit coordinate is invariant
under unit scaling, so scaling that coordinate to 1 picks a well-defined
canonical representative per class and makes lexicographic order meaningful.

Vertices of the graph are the isotropic classes (Q = 0).  The enumerator
walks canonical forms directly, stratified by the position j of the first
unit coordinate: coordinates before j run over the even residues, coordinate
j is pinned to 1 and the rest are free.  Every class is generated exactly
once, so no dedup pass is needed; a full-scan enumerator over all tuples is
kept as the oracle for small cases.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import DomainError, ResourceLimitError
from .param_formulas import vertex_count as predicted_vertex_count
from .quad_forms import FormSpec, qform, qform_rows
from .ring_arith import inv_raw

DEFAULT_VERTEX_CAP = 200_000


def canonicalize(spec: FormSpec, a) -> tuple[int, ...]:
    """Canonical representative of the class of ``a`` (first unit scaled to 1)."""
    mask = spec.modulus - 1
    vals = [int(x) & mask for x in a]
    if len(vals) != spec.dim:
        raise DomainError(f"tuple length {len(vals)} != {spec.dim}")
    for x in vals:
        if x & 1:
            lam = inv_raw(x, spec.n)
            return tuple((lam * y) & mask for y in vals)
    raise DomainError("tuple has no unit coordinate")


def enumerate_vertices(spec: FormSpec, cap: int = DEFAULT_VERTEX_CAP) -> np.ndarray:
    """All isotropic canonical representatives, lexicographically sorted.

    Returns an (V, dim) int64 array.  Raises ResourceLimitError before doing
    any work if the predicted count exceeds ``cap``.
    """
    predicted = predicted_vertex_count(spec)
    if cap is not None and predicted > cap:
        raise ResourceLimitError(
            f"predicted vertex count {predicted} exceeds cap {cap} for {spec.label()}"
        )
    m = spec.modulus
    dim = spec.dim
    evens = np.arange(0, m, 2, dtype=np.int64)
    frees = np.arange(m, dtype=np.int64)
    chunks = []
    for j in range(dim):
        axes = [evens] * j + [np.array([1], dtype=np.int64)] + [frees] * (dim - 1 - j)
        grids = np.meshgrid(*axes, indexing="ij")
        cand = np.stack([g.ravel() for g in grids], axis=1)
        keep = qform_rows(spec, cand) == 0
        chunks.append(cand[keep])
    verts = np.concatenate(chunks, axis=0)
    order = np.lexsort(verts.T[::-1])
    verts = verts[order]
    if verts.shape[0] > 1 and bool((np.diff(verts, axis=0) == 0).all(axis=1).any()):
        raise AssertionError("enumerator produced duplicate canonical representatives")
    return verts


def enumerate_vertices_naive(spec: FormSpec) -> np.ndarray:
    """Oracle enumerator: scan all tuples, canonicalize, dedupe.  Small specs only."""
    if spec.n * spec.dim > 24:
        raise ResourceLimitError("naive enumeration is limited to 2^24 tuples")
    m = spec.modulus
    seen = set()
    for tup in itertools.product(range(m), repeat=spec.dim):
        if not any(x & 1 for x in tup):
            continue
        if qform(spec, tup) != 0:
            continue
        seen.add(canonicalize(spec, tup))
    return np.array(sorted(seen), dtype=np.int64)


def unit_position_check(spec: FormSpec, rep) -> bool:
    """True when some coordinate among the first 2*nu is a unit."""
    return any(int(x) & 1 for x in rep[: 2 * spec.nu])


def unit_position_check_all(spec: FormSpec, verts: np.ndarray) -> bool:
    """Vectorised form over a vertex table."""
    return bool((verts[:, : 2 * spec.nu] & 1).any(axis=1).all())
