import numpy as np
import pytest

from tubalstream import (
    DimensionMismatch,
    Spectral3,
    SymmetryViolation,
    bcirc,
    conj_transpose,
    fft3,
    fold,
    frobenius_norm,
    identity_tensor,
    ifft3,
    tprod,
    unfold,
)
from tubalstream.algebra import expand_spectrum, num_stored_slices, spectral_weights

from conftest import rel_err


def test_stored_slice_count():
    assert [num_stored_slices(n) for n in (1, 2, 3, 4, 5, 6, 7)] == [1, 2, 2, 3, 3, 4, 4]


def test_spectral_weights_sum_to_n3():
    for n3 in range(1, 9):
        assert spectral_weights(n3).sum() == n3


def test_fft3_zero_tensor():
    s = fft3(np.zeros((3, 2, 4)))
    assert np.all(s.data == 0)
    assert s.symmetric


def test_fft3_delta_tubes():
    x = np.zeros((3, 2, 4))
    x[:, :, 0] = 1.0
    s = fft3(x)
    assert np.allclose(s.data, 1.0, atol=1e-14)


def test_fft3_ifft3_roundtrip():
    x = np.random.default_rng(0).standard_normal((5, 4, 7))
    assert rel_err(ifft3(fft3(x)), x) <= 1e-12


def test_ifft3_all_ones_spectrum_gives_delta():
    n3 = 5
    s = Spectral3(np.ones((3, 2, num_stored_slices(n3))), n3=n3)
    x = ifft3(s)
    expect = np.zeros((3, 2, n3))
    expect[:, :, 0] = 1.0
    assert np.allclose(x, expect, atol=1e-13)


def test_ifft3_broken_symmetry_raises():
    n3 = 4
    data = np.ones((2, 2, num_stored_slices(n3)), dtype=complex)
    data[:, :, 0] += 1.0j  # nonreal DC slice
    with pytest.raises(SymmetryViolation):
        ifft3(Spectral3(data, n3=n3))


def test_validate_flags_nonreal_dc():
    data = np.ones((2, 2, 3), dtype=complex)
    data[:, :, 0] += 1.0j
    with pytest.raises(SymmetryViolation):
        Spectral3(data, n3=4).validate()


def test_unfold_single_slice():
    a = np.arange(4.0).reshape(2, 2, 1)
    assert np.array_equal(unfold(a), a[:, :, 0])


def test_unfold_tube_is_column():
    a = np.array([1.0, 2.0, 3.0]).reshape(1, 1, 3)
    assert np.array_equal(unfold(a), np.array([[1.0], [2.0], [3.0]]))


def test_fold_unfold_roundtrip():
    a = np.random.default_rng(1).standard_normal((3, 2, 4))
    assert np.array_equal(fold(unfold(a), 3, 2, 4), a)


def test_bcirc_single_slice():
    a = np.random.default_rng(2).standard_normal((3, 2, 1))
    assert np.array_equal(bcirc(a), a[:, :, 0])


def test_bcirc_identity():
    assert np.array_equal(bcirc(identity_tensor(2, 3)), np.eye(6))


def test_bcirc_block_diagonalized_by_dft():
    """(F kron I) bcirc (F^-1 kron I) must be block-diagonal with the fft slices."""
    g = np.random.default_rng(3)
    a = g.standard_normal((2, 2, 3))
    n1, n2, n3 = a.shape
    k = np.arange(n3)
    f = np.exp(-2j * np.pi * np.outer(k, k) / n3)
    finv = np.conj(f) / n3
    bd = np.kron(f, np.eye(n1)) @ bcirc(a) @ np.kron(finv, np.eye(n2))
    full = expand_spectrum(fft3(a).data, n3)
    for i in range(n3):
        blk = bd[i * n1:(i + 1) * n1, i * n2:(i + 1) * n2]
        assert np.linalg.norm(blk - full[:, :, i]) <= 1e-10 * max(np.linalg.norm(blk), 1)
    off = bd.copy()
    for i in range(n3):
        off[i * n1:(i + 1) * n1, i * n2:(i + 1) * n2] = 0
    assert np.linalg.norm(off) <= 1e-10 * np.linalg.norm(bd)


def test_tprod_identity_law():
    g = np.random.default_rng(4)
    a = g.standard_normal((4, 3, 5))
    assert rel_err(tprod(identity_tensor(4, 5), a), a) <= 1e-12
    assert rel_err(tprod(a, identity_tensor(3, 5)), a) <= 1e-12


def test_tprod_single_slice_is_matmul():
    g = np.random.default_rng(5)
    a, b = g.standard_normal((4, 3, 1)), g.standard_normal((3, 2, 1))
    assert rel_err(tprod(a, b)[:, :, 0], a[:, :, 0] @ b[:, :, 0]) <= 1e-12


def test_tprod_matches_bcirc_oracle():
    g = np.random.default_rng(6)
    a, b = g.standard_normal((4, 3, 5)), g.standard_normal((3, 2, 5))
    c = tprod(a, b)
    assert rel_err(c, fold(bcirc(a) @ unfold(b), 4, 2, 5)) <= 1e-10


def test_tprod_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        tprod(np.zeros((2, 3, 4)), np.zeros((2, 2, 4)))
    with pytest.raises(DimensionMismatch):
        tprod(np.zeros((2, 3, 4)), np.zeros((3, 2, 5)))


def test_tprod_associative():
    g = np.random.default_rng(7)
    for _ in range(10):
        dims = g.integers(1, 7, size=4)
        n3 = int(g.integers(1, 7))
        a = g.standard_normal((dims[0], dims[1], n3))
        b = g.standard_normal((dims[1], dims[2], n3))
        c = g.standard_normal((dims[2], dims[3], n3))
        assert rel_err(tprod(tprod(a, b), c), tprod(a, tprod(b, c))) <= 1e-9


def test_conj_transpose_single_slice():
    a = np.random.default_rng(8).standard_normal((3, 2, 1))
    assert np.array_equal(conj_transpose(a)[:, :, 0], a[:, :, 0].T)


def test_conj_transpose_involution():
    a = np.random.default_rng(9).standard_normal((3, 4, 5))
    assert np.array_equal(conj_transpose(conj_transpose(a)), a)


def test_conj_transpose_anti_homomorphism():
    g = np.random.default_rng(10)
    a, b = g.standard_normal((4, 3, 5)), g.standard_normal((3, 2, 5))
    lhs = conj_transpose(tprod(a, b))
    rhs = tprod(conj_transpose(b), conj_transpose(a))
    assert rel_err(lhs, rhs) <= 1e-10


def test_identity_tensor_scalar():
    assert identity_tensor(1, 1).ravel().tolist() == [1.0]


def test_identity_tensor_spectrum_is_identity():
    s = fft3(identity_tensor(3, 4))
    for i in range(s.n_stored):
        assert np.allclose(s.data[:, :, i], np.eye(3), atol=1e-14)


def test_frobenius_norm_examples():
    assert frobenius_norm(np.zeros((2, 3, 4))) == 0.0
    assert frobenius_norm(identity_tensor(3, 4)) == pytest.approx(np.sqrt(3), rel=1e-14)


def test_parseval_factor():
    x = np.random.default_rng(11).standard_normal((4, 3, 6))
    full = expand_spectrum(fft3(x).data, 6)
    assert np.linalg.norm(full) == pytest.approx(np.sqrt(6) * np.linalg.norm(x), rel=1e-10)
