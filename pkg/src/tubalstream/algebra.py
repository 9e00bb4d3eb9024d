"""Third-order tensor algebra built on tube-wise Fourier transforms.

A tensor here is a real ndarray of shape (n1, n2, n3): n1 x n2 matrices of
length-n3 tubes. Multiplication (`tprod`) is matrix multiplication with
circular convolution of tubes in place of scalar products, computed as
independent complex matrix products in the tube-frequency domain.

Conventions, fixed once for the whole library:

* forward DFT along tubes is unnormalized (`numpy.fft.fft`), the inverse
  carries the 1/n3 factor;
* real input makes the spectrum conjugate symmetric, so only the first
  ceil((n3+1)/2) frequency slices are ever stored (exactly `numpy.fft.rfft`
  layout). `spectral_weights` gives the multiplicity of each stored slice
  when summing over the full spectrum.

`bcirc`/`unfold` give the equivalent dense block-circulant picture. They are
test oracles: bcirc materializes an (n1*n3) x (n2*n3) matrix and is not meant
for production-size inputs.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, SymmetryViolation

IMAG_TOL = 1e-10


def num_stored_slices(n3):
    """Number of independent frequency slices of a real tensor: ceil((n3+1)/2)."""
    return n3 // 2 + 1


def spectral_weights(n3):
    """Multiplicity of each stored slice in the full spectrum.

    Self-conjugate bins (DC, and Nyquist for even n3) count once, every other
    stored bin stands for itself and its conjugate mirror. Sums to n3.
    """
    w = np.full(num_stored_slices(n3), 2.0)
    w[0] = 1.0
    if n3 % 2 == 0:
        w[-1] = 1.0
    return w


def _check_tensor(a, name="tensor"):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 3:
        raise DimensionMismatch(f"{name} must be 3-way, got shape {a.shape}")
    return a


@dataclass
class Spectral3:
    """Half-spectrum of a real 3-way tensor.

    `data` holds the first ceil((n3+1)/2) frequency slices as an
    (n1, n2, n_stored) complex array; the remaining slices are implied by
    conjugate symmetry and never materialized. `symmetric` asserts the
    canonical-domain origin is real.
    """

    data: np.ndarray
    n3: int
    symmetric: bool = field(default=True)

    @property
    def n1(self):
        return self.data.shape[0]

    @property
    def n2(self):
        return self.data.shape[1]

    @property
    def n_stored(self):
        return self.data.shape[2]

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.complex128)
        if self.data.ndim != 3:
            raise DimensionMismatch(f"spectral data must be 3-way, got {self.data.shape}")
        if self.data.shape[2] != num_stored_slices(self.n3):
            raise DimensionMismatch(
                f"expected {num_stored_slices(self.n3)} stored slices for n3={self.n3}, "
                f"got {self.data.shape[2]}"
            )

    def validate(self, tol=1e-12):
        """Check the real-origin contract: the DC slice must be (nearly) real."""
        if not self.symmetric:
            return
        dc = self.data[:, :, 0]
        scale = np.linalg.norm(dc)
        if scale > 0 and np.linalg.norm(dc.imag) > tol * scale:
            raise SymmetryViolation("DC frequency slice of a real-origin tensor is not real")

    def expand(self):
        """Materialize all n3 frequency slices using conjugate symmetry."""
        return expand_spectrum(self.data, self.n3)


def expand_spectrum(half, n3):
    """Complete a half-spectrum (..., n_stored) to the full (..., n3) spectrum."""
    half = np.asarray(half)
    n = num_stored_slices(n3)
    if half.shape[-1] != n:
        raise DimensionMismatch(f"expected {n} stored slices, got {half.shape[-1]}")
    full = np.empty(half.shape[:-1] + (n3,), dtype=np.complex128)
    full[..., :n] = half
    for k in range(n, n3):
        full[..., k] = np.conj(half[..., n3 - k])
    return full


def fft3(a):
    """Forward DFT of every tube; only the independent half-spectrum is kept."""
    a = _check_tensor(a)
    return Spectral3(np.fft.rfft(a, axis=2), n3=a.shape[2])


def ifft3(s):
    """Inverse tube-wise DFT of a half-spectrum back to a real tensor.

    The missing slices are reconstructed by conjugate symmetry before the
    inverse transform; if the stored slices do not actually satisfy the
    real-origin contract the reconstruction has non-negligible imaginary
    mass and SymmetryViolation is raised.
    """
    full = s.expand()
    out = np.fft.ifft(full, axis=2)
    scale = np.linalg.norm(out)
    if scale > 0 and np.linalg.norm(out.imag) > IMAG_TOL * scale:
        raise SymmetryViolation(
            "inverse transform produced relative imaginary mass above "
            f"{IMAG_TOL:g}; stored slices are not conjugate symmetric"
        )
    return np.ascontiguousarray(out.real)


def unfold(a):
    """Stack frontal slices vertically: (n1, n2, n3) -> (n1*n3, n2)."""
    a = _check_tensor(a)
    n1, n2, n3 = a.shape
    return a.transpose(2, 0, 1).reshape(n1 * n3, n2)


def fold(m, n1, n2, n3):
    """Inverse of `unfold`."""
    m = np.asarray(m)
    if m.shape != (n1 * n3, n2):
        raise DimensionMismatch(f"cannot fold shape {m.shape} into ({n1},{n2},{n3})")
    return m.reshape(n3, n1, n2).transpose(1, 2, 0).copy()


def bcirc(a):
    """Block-circulant matrix of the frontal slices (test oracle, dense)."""
    a = _check_tensor(a)
    n1, n2, n3 = a.shape
    out = np.zeros((n1 * n3, n2 * n3))
    for i in range(n3):
        for j in range(n3):
            out[i * n1:(i + 1) * n1, j * n2:(j + 1) * n2] = a[:, :, (i - j) % n3]
    return out


def tprod(a, b):
    """Tensor-tensor product: fold(bcirc(a) @ unfold(b)), via the FFT route.

    Requires a.shape = (n1, m, n3) and b.shape = (m, n2, n3). Only the stored
    half of the spectrum is multiplied; the rest follows by conjugacy.
    """
    a = _check_tensor(a, "a")
    b = _check_tensor(b, "b")
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise DimensionMismatch(f"cannot t-multiply shapes {a.shape} and {b.shape}")
    n3 = a.shape[2]
    abar = np.moveaxis(np.fft.rfft(a, axis=2), 2, 0)
    bbar = np.moveaxis(np.fft.rfft(b, axis=2), 2, 0)
    cbar = np.matmul(abar, bbar)
    return np.fft.irfft(np.moveaxis(cbar, 0, 2), n=n3, axis=2)


def conj_transpose(a):
    """Transpose every frontal slice and reverse the order of slices 2..n3."""
    a = _check_tensor(a)
    at = a.transpose(1, 0, 2)
    out = np.empty_like(at)
    out[:, :, 0] = at[:, :, 0]
    out[:, :, 1:] = at[:, :, :0:-1]
    return out


def identity_tensor(n, n3):
    """First frontal slice is the n x n identity, all other slices zero."""
    out = np.zeros((n, n, n3))
    out[:, :, 0] = np.eye(n)
    return out


def frobenius_norm(a):
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(np.asarray(a).ravel()))
