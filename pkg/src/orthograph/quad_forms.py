"""Gram matrix, quadratic form Q and bilinear form B over Z_{2^n}.

The form lives on (2*nu + delta)-tuples.  Its Gram matrix is the block
matrix with an identity block pairing coordinates i and nu+i, plus a
delta-dependent tail block: nothing for delta=0, the 1x1 block (1) for
delta=1, and [[z, 1], [0, z]] for delta=2 with z a unit.

Q(a) = a G a^t and B(a, b) = a (G + G^t) b^t.  Scalar evaluation expands the
block structure directly instead of multiplying dense matrices; the row/matrix
helpers below vectorise the same sums with numpy for whole vertex tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .ring_arith import MAX_N, canon, is_unit_raw


@dataclass(frozen=True)
class FormSpec:
    """Shape of the form: ring exponent n, Witt index nu, tail delta, unit z.

    z only matters when delta=2; it is stored canonically mod 2^n.
    """

    n: int
    nu: int
    delta: int
    z: int = 1

    def __post_init__(self) -> None:
        if not (1 <= self.n <= MAX_N):
            raise ConfigError(f"n must be in [1, {MAX_N}], got {self.n}")
        if self.nu < 1:
            raise ConfigError(f"nu must be >= 1, got {self.nu}")
        if self.delta not in (0, 1, 2):
            raise ConfigError(f"delta must be 0, 1 or 2, got {self.delta}")
        object.__setattr__(self, "z", canon(self.z, self.n))
        if self.delta == 2 and not is_unit_raw(self.z):
            raise ConfigError(f"delta=2 requires a unit z, got {self.z} mod 2^{self.n}")

    @property
    def dim(self) -> int:
        return 2 * self.nu + self.delta

    @property
    def modulus(self) -> int:
        return 1 << self.n

    def residue(self) -> "FormSpec":
        """The same form over the residue field Z_2."""
        return FormSpec(1, self.nu, self.delta, self.z & 1)

    def label(self) -> str:
        base = f"n={self.n},nu={self.nu},delta={self.delta}"
        return base + (f",z={self.z}" if self.delta == 2 else "")


def gram_matrix(spec: FormSpec) -> np.ndarray:
    """The (2*nu+delta) x (2*nu+delta) Gram matrix as an int64 array."""
    d = spec.dim
    G = np.zeros((d, d), dtype=np.int64)
    for i in range(spec.nu):
        G[i, spec.nu + i] = 1
    if spec.delta == 1:
        G[d - 1, d - 1] = 1
    elif spec.delta == 2:
        G[d - 2, d - 2] = spec.z
        G[d - 2, d - 1] = 1
        G[d - 1, d - 1] = spec.z
    return G


def _check_len(spec: FormSpec, a) -> None:
    if len(a) != spec.dim:
        raise DomainError(f"tuple length {len(a)} != {spec.dim}")


def qform(spec: FormSpec, a) -> int:
    """Q(a) as a canonical residue mod 2^n."""
    _check_len(spec, a)
    nu, d = spec.nu, spec.dim
    q = 0
    for i in range(nu):
        q += int(a[i]) * int(a[nu + i])
    if spec.delta == 1:
        q += int(a[d - 1]) ** 2
    elif spec.delta == 2:
        x, y = int(a[d - 2]), int(a[d - 1])
        q += spec.z * x * x + x * y + spec.z * y * y
    return canon(q, spec.n)


def bform(spec: FormSpec, a, b) -> int:
    """B(a, b) = a (G + G^t) b^t as a canonical residue mod 2^n."""
    _check_len(spec, a)
    _check_len(spec, b)
    nu, d = spec.nu, spec.dim
    s = 0
    for i in range(nu):
        s += int(a[i]) * int(b[nu + i]) + int(a[nu + i]) * int(b[i])
    if spec.delta == 1:
        s += 2 * int(a[d - 1]) * int(b[d - 1])
    elif spec.delta == 2:
        ax, ay = int(a[d - 2]), int(a[d - 1])
        bx, by = int(b[d - 2]), int(b[d - 1])
        s += 2 * spec.z * ax * bx + ax * by + ay * bx + 2 * spec.z * ay * by
    return canon(s, spec.n)


def qform_rows(spec: FormSpec, rows: np.ndarray) -> np.ndarray:
    """Q evaluated on every row of an (N, dim) int64 array."""
    nu, d = spec.nu, spec.dim
    q = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(nu):
        q += rows[:, i] * rows[:, nu + i]
    if spec.delta == 1:
        q += rows[:, d - 1] ** 2
    elif spec.delta == 2:
        x, y = rows[:, d - 2], rows[:, d - 1]
        q += spec.z * x * x + x * y + spec.z * y * y
    return q & (spec.modulus - 1)


def bform_gram(spec: FormSpec) -> np.ndarray:
    """G + G^t, the matrix of the bilinear form."""
    G = gram_matrix(spec)
    return G + G.T


def bform_matrix(spec: FormSpec, rows: np.ndarray) -> np.ndarray:
    """All pairwise B values for the rows of an (N, dim) table, mod 2^n.

    Intermediate products fit int64 easily: entries < 2^16, dim <= 34.
    """
    S = bform_gram(spec)
    return (rows @ S @ rows.T) & (spec.modulus - 1)
