import numpy as np
import pytest

from tubalstream import (
    RankOutOfRange,
    conj_transpose,
    gen_low_tubal_rank,
    identity_tensor,
    reconstruct,
    tprod,
    truncate,
    tsvd,
    tubal_rank,
)
from tubalstream.subspace import _random_basis
from tubalstream.tsvd import singular_tube_norms
from tubalstream import rng as rngmod

from conftest import rel_err


def spectral_stack(t):
    return np.moveaxis(np.fft.rfft(t, axis=2), 2, 0)


def test_zero_tensor():
    f = tsvd(np.zeros((3, 4, 2)))
    assert np.all(f.s == 0)
    assert rel_err(reconstruct(f), np.zeros((3, 4, 2))) == 0


def test_single_slice_matches_matrix_svd():
    a = np.random.default_rng(0).standard_normal((5, 3, 1))
    f = tsvd(a)
    sv = np.linalg.svd(a[:, :, 0], compute_uv=False)
    assert np.allclose(np.diag(f.s[:3, :3, 0]), sv, atol=1e-10)


def test_constructed_rank_reconstruction_and_tube_count():
    g1 = gen_low_tubal_rank(8, 10, 5, 3, seed=42)
    f = tsvd(g1)
    assert rel_err(reconstruct(f), g1) <= 1e-8
    norms = singular_tube_norms(f)
    assert np.count_nonzero(norms > 1e-8 * norms[0]) == 3


def test_factor_invariants():
    a = np.random.default_rng(1).standard_normal((5, 4, 3))
    f = tsvd(a)
    n3 = 3
    assert rel_err(tprod(conj_transpose(f.u), f.u), identity_tensor(5, n3)) <= 1e-8
    assert rel_err(tprod(conj_transpose(f.v), f.v), identity_tensor(4, n3)) <= 1e-8
    # f-diagonality: off-diagonal of every frontal slice vanishes
    off = f.s.copy()
    for i in range(min(5, 4)):
        off[i, i, :] = 0
    assert np.max(np.abs(off)) <= 1e-12


def test_per_slice_orthonormality_of_spectra():
    a = np.random.default_rng(2).standard_normal((6, 5, 4))
    f = tsvd(a)
    for fac, n in ((f.u, 6), (f.v, 5)):
        stack = spectral_stack(fac)
        gram = np.matmul(stack.conj().transpose(0, 2, 1), stack)
        assert np.max(np.linalg.norm(gram - np.eye(n), axis=(1, 2))) <= 1e-10


def test_singular_values_sorted_descending_per_slice():
    a = np.random.default_rng(3).standard_normal((5, 5, 4))
    sbar = spectral_stack(tsvd(a).s)
    for i in range(sbar.shape[0]):
        d = np.real(np.diag(sbar[i]))
        assert np.all(np.diff(d) <= 1e-10)


def test_tubal_rank_examples():
    assert tubal_rank(np.zeros((3, 3, 2))) == 0
    assert tubal_rank(identity_tensor(4, 3)) == 4
    assert tubal_rank(gen_low_tubal_rank(6, 7, 4, 3, seed=5)) == 3


def test_truncate_full_rank_is_noop():
    a = np.random.default_rng(4).standard_normal((4, 6, 3))
    f = tsvd(a)
    t = truncate(f, 4)
    assert rel_err(reconstruct(t), reconstruct(f)) <= 1e-10


def test_truncate_exact_rank():
    a = gen_low_tubal_rank(7, 9, 4, 3, seed=6)
    t = truncate(tsvd(a), 3)
    assert rel_err(reconstruct(t), a) <= 1e-8


def test_truncate_rank_out_of_range():
    f = tsvd(np.zeros((3, 4, 2)))
    with pytest.raises(RankOutOfRange):
        truncate(f, 0)
    with pytest.raises(RankOutOfRange):
        truncate(f, 5)


def test_truncation_beats_random_projections():
    """Eckart-Young style spot check against 20 random rank-2 projectors."""
    a = np.random.default_rng(7).standard_normal((6, 6, 4))
    best = rel_err(reconstruct(truncate(tsvd(a), 2)), a)
    for i in range(20):
        q = _random_basis(rngmod.substream(100, rngmod.TRIAL, i), 6, 2, 4)
        qcan = np.fft.irfft(np.moveaxis(q, 0, 2), n=4, axis=2)
        proj = tprod(qcan, tprod(conj_transpose(qcan), a))
        assert best <= rel_err(proj, a) + 1e-12


def test_per_slice_truncation_error_equals_tail_energy():
    a = np.random.default_rng(8).standard_normal((6, 5, 4))
    abar = spectral_stack(a)
    r = 2
    for i in range(abar.shape[0]):
        u, s, vh = np.linalg.svd(abar[i], full_matrices=False)
        approx = (u[:, :r] * s[:r]) @ vh[:r]
        tail = np.sqrt(np.sum(s[r:] ** 2))
        assert abs(np.linalg.norm(abar[i] - approx) - tail) <= 1e-10 * max(tail, 1)
