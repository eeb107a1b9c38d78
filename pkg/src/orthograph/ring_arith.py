"""Exact arithmetic in Z_{2^n}.

Elements are canonical residues in [0, 2^n).  The ring is local: the units
are exactly the odd residues, the unique maximal ideal 2*Z_{2^n} is the even
residues, and reduction mod 2 is the projection onto the residue field Z_2.

Scalar work goes through :class:`RingElem`; bulk work (vertex enumeration,
adjacency fills) uses the raw helpers on plain ints / numpy arrays, which is
what keeps the enumeration core fast.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError, DomainError, UsageError

MAX_N = 16  # residues stay comfortably inside native machine words


@dataclass(frozen=True)
class RingParams:
    """The ring Z_{2^n}, described by the exponent n."""

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or not (1 <= self.n <= MAX_N):
            raise ConfigError(f"ring exponent n must be an integer in [1, {MAX_N}], got {self.n!r}")

    @property
    def modulus(self) -> int:
        return 1 << self.n

    @property
    def mask(self) -> int:
        return (1 << self.n) - 1


def canon(value: int, n: int) -> int:
    """Canonical residue of ``value`` modulo 2^n (bitmask, works for negatives too)."""
    return value & ((1 << n) - 1)


def is_unit_raw(value: int) -> bool:
    return value & 1 == 1


def inv_raw(value: int, n: int) -> int:
    """Inverse of an odd residue mod 2^n by Newton-Hensel lifting.

    Starting from the exact inverse mod 8, each step doubles the number of
    correct low bits: x <- x * (2 - a*x).
    """
    if value & 1 == 0:
        raise DomainError(f"{value} is not a unit mod 2^{n}")
    mask = (1 << n) - 1
    a = value & mask
    x = a  # a*a == 1 (mod 8) for every odd a, so a is its own inverse mod 8
    bits = 3
    while bits < n:
        x = (x * (2 - a * x)) & mask
        bits *= 2
    return x & mask


def project_raw(value: int) -> int:
    return value & 1


@dataclass(frozen=True)
class RingElem:
    """A canonical residue together with its ring."""

    value: int
    params: RingParams

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", canon(self.value, self.params.n))

    def _check(self, other: "RingElem") -> None:
        if self.params != other.params:
            raise UsageError(f"mixed moduli: 2^{self.params.n} vs 2^{other.params.n}")

    def __add__(self, other: "RingElem") -> "RingElem":
        self._check(other)
        return RingElem(self.value + other.value, self.params)

    def __sub__(self, other: "RingElem") -> "RingElem":
        self._check(other)
        return RingElem(self.value - other.value, self.params)

    def __mul__(self, other: "RingElem") -> "RingElem":
        self._check(other)
        return RingElem(self.value * other.value, self.params)

    def is_unit(self) -> bool:
        """True exactly when the residue is odd."""
        return is_unit_raw(self.value)

    def inv(self) -> "RingElem":
        return RingElem(inv_raw(self.value, self.params.n), self.params)

    def project(self) -> int:
        """Image in the residue field Z_2."""
        return project_raw(self.value)

    def __int__(self) -> int:
        return self.value
