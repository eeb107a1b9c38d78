import itertools
import random

import numpy as np
import pytest

from orthograph.errors import ConfigError, DomainError
from orthograph.quad_forms import FormSpec, bform, bform_matrix, gram_matrix, qform, qform_rows
from orthograph.ring_arith import is_unit_raw


def test_spec_validation():
    FormSpec(2, 1, 2, z=3)
    with pytest.raises(ConfigError):
        FormSpec(2, 1, 2, z=2)  # z must be a unit when delta=2
    with pytest.raises(ConfigError):
        FormSpec(2, 0, 1)
    with pytest.raises(ConfigError):
        FormSpec(2, 1, 3)
    assert FormSpec(3, 1, 2, z=9).z == 1  # canonical residue mod 8


def test_gram_matrix_blocks():
    assert gram_matrix(FormSpec(1, 1, 0)).tolist() == [[0, 1], [0, 0]]
    assert gram_matrix(FormSpec(2, 1, 1)).tolist() == [[0, 1, 0], [0, 0, 0], [0, 0, 1]]
    G = gram_matrix(FormSpec(2, 1, 2, z=1))
    assert G.tolist() == [
        [0, 1, 0, 0],
        [0, 0, 0, 0],
        [0, 0, 1, 1],
        [0, 0, 0, 1],
    ]
    G3 = gram_matrix(FormSpec(2, 2, 2, z=3))
    assert G3[0, 2] == 1 and G3[1, 3] == 1
    assert G3[4, 4] == 3 and G3[4, 5] == 1 and G3[5, 5] == 3
    assert G3[5, 4] == 0


def test_qform_examples():
    assert qform(FormSpec(2, 1, 1), (1, 0, 0)) == 0  # e1 has no diagonal term
    assert qform(FormSpec(2, 1, 1), (0, 0, 1)) == 1
    assert qform(FormSpec(2, 1, 0), (1, 2)) == 2
    assert qform(FormSpec(2, 1, 2, z=1), (0, 0, 1, 1)) == 3  # z + 1 + z


def test_bform_examples():
    spec = FormSpec(2, 2, 0)
    e1 = (1, 0, 0, 0)
    e3 = (0, 0, 1, 0)
    assert bform(spec, e1, e3) == 1
    assert bform(spec, e1, e1) == 0
    assert bform(FormSpec(2, 1, 0), (1, 0), (1, 0)) == 0


def test_length_mismatch():
    with pytest.raises(DomainError):
        qform(FormSpec(2, 1, 1), (1, 0))
    with pytest.raises(DomainError):
        bform(FormSpec(2, 1, 1), (1, 0, 0), (1, 0))


def _forms_agree_with_gram(spec, a, b):
    G = gram_matrix(spec)
    m = spec.modulus
    av, bv = np.array(a), np.array(b)
    assert qform(spec, a) == int(av @ G @ av) % m
    assert bform(spec, a, b) == int(av @ (G + G.T) @ bv) % m


@pytest.mark.parametrize("spec", [FormSpec(1, 1, 0), FormSpec(1, 1, 1), FormSpec(1, 1, 2), FormSpec(1, 2, 0)])
def test_sparse_expansion_matches_gram_exhaustive_mod2(spec):
    for a in itertools.product(range(2), repeat=spec.dim):
        for b in itertools.product(range(2), repeat=spec.dim):
            _forms_agree_with_gram(spec, a, b)


@pytest.mark.parametrize("spec", [FormSpec(1, 1, 2), FormSpec(1, 2, 0)])
def test_bform_symmetry_and_self_pairing_exhaustive(spec):
    for a in itertools.product(range(2), repeat=spec.dim):
        for b in itertools.product(range(2), repeat=spec.dim):
            assert bform(spec, a, b) == bform(spec, b, a)
        assert bform(spec, a, a) == (2 * qform(spec, a)) % spec.modulus


@pytest.mark.parametrize("spec", [FormSpec(2, 1, 1), FormSpec(3, 2, 0), FormSpec(4, 1, 2, z=3), FormSpec(4, 2, 1)])
def test_bform_properties_randomized(spec):
    rng = random.Random(20240817)
    m = spec.modulus
    for _ in range(300):
        a = [rng.randrange(m) for _ in range(spec.dim)]
        b = [rng.randrange(m) for _ in range(spec.dim)]
        s = bform(spec, a, b)
        assert s == bform(spec, b, a)
        assert bform(spec, a, a) == (2 * qform(spec, a)) % m
        assert not is_unit_raw(bform(spec, a, a))  # looplessness
        lam = rng.randrange(1, m, 2)
        mu = rng.randrange(1, m, 2)
        sa = [(lam * x) % m for x in a]
        sb = [(mu * x) % m for x in b]
        assert bform(spec, sa, sb) == (lam * mu * s) % m
        assert is_unit_raw(bform(spec, sa, sb)) == is_unit_raw(s)
        # projection compatibility: unit-ness only depends on residues mod 2
        ra = [x % 2 for x in a]
        rb = [x % 2 for x in b]
        assert is_unit_raw(s) == (bform(spec.residue(), ra, rb) == 1)


def test_vectorized_rows_match_scalar():
    spec = FormSpec(3, 2, 2, z=3)
    rng = random.Random(7)
    rows = np.array([[rng.randrange(8) for _ in range(spec.dim)] for _ in range(40)], dtype=np.int64)
    q = qform_rows(spec, rows)
    B = bform_matrix(spec, rows)
    for i in range(40):
        assert int(q[i]) == qform(spec, rows[i])
        for j in range(0, 40, 7):
            assert int(B[i, j]) == bform(spec, rows[i], rows[j])


def test_residue_spec():
    s = FormSpec(3, 2, 2, z=5)
    r = s.residue()
    assert (r.n, r.nu, r.delta, r.z) == (1, 2, 2, 1)
    assert FormSpec(1, 1, 0).residue() == FormSpec(1, 1, 0)
