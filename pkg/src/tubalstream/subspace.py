"""Free-submodule state: orthonormal spectral bases and weight slices.

The tracked object is an r-dimensional free submodule of the module of
n1 x 1 x n3 lateral slices. Its representation is one n1 x r matrix with
orthonormal columns per stored frequency slice, stacked as a complex
(n_stored, n1, r) array; the full-spectrum basis follows by conjugate
symmetry, and the canonical tensor satisfies U^T * U = identity in the
t-product sense.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import algebra, rng
from .errors import DimensionMismatch, NotOrthonormal, RankOutOfRange


@dataclass(frozen=True)
class FsmEstimate:
    """Orthonormal basis of a free submodule, stored per frequency slice."""

    slices: np.ndarray  # complex (n_stored, n1, r)
    n3: int

    @property
    def n1(self):
        return self.slices.shape[1]

    @property
    def r(self):
        return self.slices.shape[2]

    @property
    def n_stored(self):
        return self.slices.shape[0]

    def __post_init__(self):
        if self.slices.ndim != 3:
            raise DimensionMismatch(f"basis stack must be 3-way, got {self.slices.shape}")
        if self.slices.shape[0] != algebra.num_stored_slices(self.n3):
            raise DimensionMismatch(
                f"expected {algebra.num_stored_slices(self.n3)} stored slices "
                f"for n3={self.n3}, got {self.slices.shape[0]}"
            )

    def orthonormality_defect(self):
        """Largest per-slice ||U'U - I||_F."""
        g = np.matmul(self.slices.conj().transpose(0, 2, 1), self.slices)
        g -= np.eye(self.r)
        return float(np.max(np.linalg.norm(g, axis=(1, 2))))

    def to_tensor(self):
        """Canonical-domain (n1, r, n3) real tensor."""
        return np.fft.irfft(np.moveaxis(self.slices, 0, 2), n=self.n3, axis=2)

    @classmethod
    def from_tensor(cls, u):
        """Wrap a canonical (n1, r, n3) tensor; orthonormality is not enforced."""
        u = np.asarray(u, dtype=np.float64)
        slices = np.ascontiguousarray(np.moveaxis(np.fft.rfft(u, axis=2), 2, 0))
        return cls(slices=slices, n3=u.shape[2])


@dataclass(frozen=True)
class WeightSlice:
    """Coefficients of one lateral slice against a basis, per frequency slice."""

    spectral: np.ndarray  # complex (n_stored, r)
    n3: int

    @cached_property
    def canonical(self):
        """Real (r, n3) weights, one tube per basis element."""
        return np.fft.irfft(self.spectral, n=self.n3, axis=0).T

    @classmethod
    def zero(cls, r, n3):
        return cls(np.zeros((algebra.num_stored_slices(n3), r), dtype=np.complex128), n3)


def _random_basis(g, n1, r, n3):
    """Orthonormal slice stack from a Gaussian draw of the given generator."""
    x = g.standard_normal((n1, r, n3))
    stack = np.moveaxis(np.fft.rfft(x, axis=2), 2, 0)
    return np.linalg.qr(stack)[0]


def init_random_fsm(n1, r, n3, seed):
    """Random basis: Gaussian tensor, tube FFT, thin QR per stored slice.

    Conjugate symmetry holds by construction (only stored slices exist, and
    the self-conjugate bins stay real through the QR).
    """
    if not 1 <= r < n1:
        raise RankOutOfRange(f"need 1 <= r < n1, got r={r}, n1={n1}")
    g = rng.substream(seed, rng.BASIS)
    return FsmEstimate(slices=_random_basis(g, n1, r, n3), n3=n3)


def coherence(basis):
    """Largest squared projection of a coordinate axis onto the column space.

    `basis` is an explicit m x r matrix with orthonormal columns; the value is
    the maximum squared row norm, which lies in [r/m, 1].
    """
    basis = np.asarray(basis)
    if basis.ndim != 2:
        raise DimensionMismatch("coherence expects an explicit 2-D basis matrix")
    m, r = basis.shape
    gram = basis.conj().T @ basis - np.eye(r)
    if np.linalg.norm(gram) > 1e-8:
        raise NotOrthonormal("basis columns are not orthonormal to 1e-8")
    return float(np.max(np.sum(np.abs(basis) ** 2, axis=1)))
