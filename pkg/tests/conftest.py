import numpy as np

from tubalstream import algebra


def rel_err(a, b):
    """||a - b||_F relative to ||b||_F (absolute when b is zero)."""
    denom = np.linalg.norm(np.asarray(b).ravel())
    diff = np.linalg.norm((np.asarray(a) - np.asarray(b)).ravel())
    return diff / denom if denom > 0 else diff


def half_to_full_vec(xh, n3):
    """Stored-spectrum coefficients (n_stored, r) -> full slice-major vector (n3*r,)."""
    return algebra.expand_spectrum(np.asarray(xh).T, n3).T.reshape(-1)


def full_to_half_vec(xf, n3, r):
    """Full slice-major vector (n3*r,) -> stored-spectrum coefficients."""
    return np.asarray(xf).reshape(n3, r)[: algebra.num_stored_slices(n3)].copy()


def random_half_coeffs(g, n_stored, r, n3):
    """Random coefficients that are a valid stored half-spectrum of real data."""
    x = g.standard_normal((n_stored, r)) + 1j * g.standard_normal((n_stored, r))
    x[0] = x[0].real
    if n3 % 2 == 0:
        x[-1] = x[-1].real
    return x


def random_tangent(g, fsm):
    """Random block-diagonal direction tangent to the basis, valid half-spectrum."""
    d = random_half_coeffs(g, fsm.n_stored, fsm.n1 * fsm.r, fsm.n3).reshape(
        fsm.n_stored, fsm.n1, fsm.r
    )
    uh = fsm.slices.conj().transpose(0, 2, 1)
    return d - np.matmul(fsm.slices, np.matmul(uh, d))


def sampled_loss(fsm_slices, wbar, v, mask2d, n3):
    """(n3/2) ||masked residual||_F^2: the spectral-domain sampled loss."""
    pbar = np.matmul(fsm_slices, wbar[:, :, None])[:, :, 0]
    p = np.fft.irfft(pbar, n=n3, axis=0).T
    res = (v - p) * mask2d
    return 0.5 * n3 * float(np.linalg.norm(res)) ** 2
