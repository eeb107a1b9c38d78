import pytest

from orthograph.errors import ConfigError, DomainError, UsageError
from orthograph.ring_arith import RingElem, RingParams, canon, inv_raw, is_unit_raw, project_raw


def test_params_validation():
    RingParams(1)
    RingParams(16)
    with pytest.raises(ConfigError):
        RingParams(0)
    with pytest.raises(ConfigError):
        RingParams(17)


def test_basic_ops():
    p3 = RingParams(3)
    assert (RingElem(3, p3) * RingElem(3, p3)).value == 1  # 9 = 1 mod 8
    p2 = RingParams(2)
    assert (RingElem(3, p2) + RingElem(1, p2)).value == 0  # 4 = 0 mod 4
    p1 = RingParams(1)
    assert (RingElem(1, p1) * RingElem(1, p1)).value == 1
    assert (RingElem(1, p2) - RingElem(3, p2)).value == 2


def test_mixed_params_rejected():
    with pytest.raises(UsageError):
        RingElem(1, RingParams(2)) + RingElem(1, RingParams(3))


def test_is_unit():
    p3 = RingParams(3)
    assert RingElem(5, p3).is_unit()
    assert not RingElem(6, p3).is_unit()
    assert RingElem(1, RingParams(1)).is_unit()


def test_inv_examples():
    assert RingElem(3, RingParams(3)).inv().value == 3
    assert RingElem(1, RingParams(4)).inv().value == 1
    assert RingElem(7, RingParams(4)).inv().value == 7


def test_inv_rejects_non_units():
    with pytest.raises(DomainError):
        RingElem(6, RingParams(3)).inv()
    with pytest.raises(DomainError):
        inv_raw(0, 4)


def test_project():
    p3 = RingParams(3)
    assert RingElem(5, p3).project() == 1
    assert RingElem(6, p3).project() == 0
    assert RingElem(1, RingParams(1)).project() == 1


@pytest.mark.parametrize("n", range(1, 9))
def test_units_are_exactly_odd_residues(n):
    for x in range(1 << n):
        assert is_unit_raw(x) == (x % 2 == 1)


@pytest.mark.parametrize("n", range(1, 9))
def test_inverse_exhaustive(n):
    m = 1 << n
    for x in range(1, m, 2):
        assert (x * inv_raw(x, n)) % m == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_projection_is_ring_homomorphism(n):
    m = 1 << n
    sample = range(m) if m <= 32 else range(0, m, 5)
    for x in sample:
        for y in sample:
            assert project_raw(canon(x * y, n)) == (project_raw(x) * project_raw(y)) % 2
            assert project_raw(canon(x + y, n)) == (project_raw(x) + project_raw(y)) % 2


@pytest.mark.parametrize("n", [2, 3, 4])
def test_unit_plus_ideal_is_unit(n):
    m = 1 << n
    for u in range(1, m, 2):
        for w in range(0, m, 2):
            assert is_unit_raw(canon(u + w, n))


def test_canon_handles_negatives():
    assert canon(-1, 3) == 7
    assert canon(-8, 3) == 0
