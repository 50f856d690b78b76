import numpy as np
import pytest

from subprod.kernel import (
    InvalidInput,
    NumericalFailure,
    Subspace,
    complement,
    coordinate_space,
    full_space,
    intersect,
    intersect_all,
    kron_space,
    op_norm,
    orthonormalize,
    psd_sqrt,
    span,
    zero_space,
)


def random_space(rng, m, k):
    a = rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))
    return orthonormalize(a)


def double_complement(a, b):
    return complement(span(complement(a), complement(b)))


def test_orthonormalize_rank_and_frame(rng):
    a = rng.standard_normal((9, 3)) @ rng.standard_normal((3, 6))
    s = orthonormalize(a)
    assert s.dim == np.linalg.matrix_rank(a) == 3
    assert np.abs(s.frame.conj().T @ s.frame - np.eye(3)).max() < 1e-12
    # every column of a lies in the span
    assert s.distance(a) < 1e-10 * op_norm(a)


def test_orthonormalize_empty():
    assert orthonormalize(np.zeros((4, 0))).dim == 0
    assert orthonormalize(np.zeros((4, 2))).dim == 0


def test_complement_is_orthogonal(rng):
    s = random_space(rng, 7, 3)
    c = complement(s)
    assert c.dim == 4
    assert np.abs(s.frame.conj().T @ c.frame).max() < 1e-12
    assert complement(full_space(3)).dim == 0
    assert complement(zero_space(3)).dim == 3


def test_intersect_matches_double_complement(rng):
    m = 12
    common = random_space(rng, m, 2).frame
    for _ in range(10):
        a = orthonormalize(np.hstack([common, rng.standard_normal((m, 4))]))
        b = orthonormalize(np.hstack([common, rng.standard_normal((m, 5))]))
        got = intersect(a, b)
        want = double_complement(a, b)
        assert got.dim == want.dim == 2
        assert got.equals(want)


def test_intersect_trivial_cases(rng):
    a = random_space(rng, 6, 3)
    assert intersect(a, full_space(6)).equals(a)
    assert intersect(a, zero_space(6)).dim == 0
    assert intersect(a, complement(a)).dim == 0
    assert intersect_all([a, a, a]).equals(a)


def test_intersect_ambient_mismatch():
    with pytest.raises(InvalidInput):
        intersect(full_space(3), full_space(4))


def test_kron_space_matches_np_kron(rng):
    a, b = random_space(rng, 3, 2), random_space(rng, 4, 2)
    k = kron_space(a, b)
    assert k.dim == 4 and k.ambient_dim == 12
    assert np.abs(k.projector() - np.kron(a.projector(), b.projector())).max() < 1e-12


def test_coordinate_space_and_equality():
    s = coordinate_space(4, [0, 2])
    t = Subspace(np.array([[1, 1], [0, 0], [1, -1], [0, 0]]) / np.sqrt(2))
    assert s.equals(t)
    assert not s.equals(coordinate_space(4, [0, 1]))
    assert full_space(4).contains(s) and not s.contains(full_space(4))


def test_psd_sqrt(rng):
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    p = a @ a.conj().T
    r = psd_sqrt(p)
    assert np.abs(r @ r - p).max() < 1e-10 * op_norm(p)
    assert np.abs(r - r.conj().T).max() < 1e-12
    with pytest.raises(NumericalFailure):
        psd_sqrt(-np.eye(2))
    with pytest.raises(InvalidInput):
        psd_sqrt(np.array([[0, 1], [0, 0]]))


def test_op_norm():
    assert op_norm(np.zeros((0, 3))) == 0.0
    assert abs(op_norm(np.diag([3.0, -4.0])) - 4.0) < 1e-14
