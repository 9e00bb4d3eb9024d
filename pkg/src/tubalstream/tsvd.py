"""Tensor SVD under the t-product: per-frequency-slice SVDs.

Factorizes a real (n1, n2, n3) tensor as U * S * V^T (t-product sense) with
orthogonal U (n1, n1, n3), V (n2, n2, n3) and f-diagonal S (n1, n2, n3). The
number of singular tubes S(i,i,:) with nonzero energy is the tubal rank.

Factor signs/phases are not pinned down (SVDs never are); compare
reconstructions and singular values, not raw factors.
"""

from dataclasses import dataclass

import numpy as np

from . import algebra
from .errors import FactorizationError, RankOutOfRange


@dataclass
class TsvdFactors:
    """Canonical-domain factors of a tensor SVD."""

    u: np.ndarray  # (n1, n1, n3) or truncated (n1, r, n3)
    s: np.ndarray  # (n1, n2, n3) f-diagonal, or truncated (r, r, n3)
    v: np.ndarray  # (n2, n2, n3) or truncated (n2, r, n3)


def tsvd(a):
    """Factor `a` into orthogonal-times-f-diagonal-times-orthogonal.

    Full SVDs run on the stored frequency slices only; the remaining slices
    follow from conjugate symmetry before the inverse transform. Singular
    values within each slice come out descending.
    """
    a = np.asarray(a, dtype=np.float64)
    n1, n2, n3 = a.shape
    abar = np.moveaxis(np.fft.rfft(a, axis=2), 2, 0)
    try:
        ubar, sig, vhbar = np.linalg.svd(abar, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"frequency-slice SVD failed: {exc}") from exc
    k = sig.shape[1]
    sbar = np.zeros((abar.shape[0], n1, n2), dtype=np.complex128)
    sbar[:, np.arange(k), np.arange(k)] = sig
    vbar = vhbar.conj().transpose(0, 2, 1)

    def back(stack):
        return np.fft.irfft(np.moveaxis(stack, 0, 2), n=n3, axis=2)

    return TsvdFactors(u=back(ubar), s=back(sbar), v=back(vbar))


def reconstruct(f):
    """U * S * V^T for the given factors."""
    return algebra.tprod(algebra.tprod(f.u, f.s), algebra.conj_transpose(f.v))


def singular_tube_norms(f):
    """Frobenius norm of each singular tube S(i,i,:), in index order."""
    k = min(f.s.shape[0], f.s.shape[1])
    tubes = f.s[np.arange(k), np.arange(k), :]
    return np.linalg.norm(tubes, axis=1)


def tubal_rank(a, tol=1e-8):
    """Count singular tubes with norm above tol times the leading tube norm."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    norms = singular_tube_norms(tsvd(a))
    if norms.size == 0 or norms[0] == 0.0:
        return 0
    return int(np.count_nonzero(norms > tol * norms[0]))


def truncate(f, r):
    """Keep the leading r singular tubes and the matching basis slices."""
    n1, n2 = f.u.shape[0], f.v.shape[0]
    if not 1 <= r <= min(n1, n2):
        raise RankOutOfRange(f"rank {r} not in [1, {min(n1, n2)}]")
    return TsvdFactors(u=f.u[:, :r, :], s=f.s[:r, :r, :], v=f.v[:, :r, :])
