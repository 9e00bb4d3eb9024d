"""Reproducible synthetic data: low-tubal-rank tensors, CP tensors,
observation masks, and dynamically switching streams.

Everything is a pure function of its parameters and an integer seed; data,
masks and bases consume independent sub-streams (see `rng`), so regenerating
with a different sampling rate yields the identical underlying tensor.
"""

from dataclasses import dataclass
from math import ceil

import numpy as np

from . import algebra, rng
from .errors import DimensionMismatch, RankOutOfRange
from .subspace import FsmEstimate, _random_basis

ENTRIES = "entries"
TUBES = "tubes"
BERNOULLI = "bernoulli"
FIXED = "fixed"


@dataclass(frozen=True, eq=False)
class SampleMask:
    """Observation pattern for one lateral slice.

    kind "entries": `mask` is a boolean (n1, n3) array of observed (row, tube
    index) positions. kind "tubes": `mask` is a boolean (n1,) array of fully
    observed rows.
    """

    kind: str
    n1: int
    n3: int
    mask: np.ndarray

    def __post_init__(self):
        if self.kind not in (ENTRIES, TUBES):
            raise ValueError(f"unknown mask kind {self.kind!r}")
        expect = (self.n1, self.n3) if self.kind == ENTRIES else (self.n1,)
        m = np.asarray(self.mask, dtype=bool)
        if m.shape != expect:
            raise DimensionMismatch(f"mask shape {m.shape} != expected {expect}")
        object.__setattr__(self, "mask", m)

    @property
    def count(self):
        """Number of observed scalar samples (tubes count n3 entries each)."""
        n = int(np.count_nonzero(self.mask))
        return n * self.n3 if self.kind == TUBES else n

    @property
    def is_empty(self):
        return not self.mask.any()

    def to_entries(self):
        """Equivalent entry mask (tube masks expand to full rows)."""
        if self.kind == ENTRIES:
            return self
        full = np.repeat(self.mask[:, None], self.n3, axis=1)
        return SampleMask(ENTRIES, self.n1, self.n3, full)

    @classmethod
    def full(cls, n1, n3, kind=ENTRIES):
        shape = (n1, n3) if kind == ENTRIES else (n1,)
        return cls(kind, n1, n3, np.ones(shape, dtype=bool))


def _draw_mask(g, n1, n3, kind, rate, method):
    shape = (n1, n3) if kind == ENTRIES else (n1,)
    if method == BERNOULLI:
        m = g.random(shape) < rate
    elif method == FIXED:
        size = int(np.prod(shape))
        k = int(round(rate * size))
        flat = np.zeros(size, dtype=bool)
        flat[g.choice(size, size=k, replace=False)] = True
        m = flat.reshape(shape)
    else:
        raise ValueError(f"unknown sampling method {method!r}")
    return SampleMask(kind, n1, n3, m)


def gen_mask(n1, n3, kind, sample_rate, seed, method=BERNOULLI):
    """Draw one observation mask; each entry/tube kept with prob `sample_rate`.

    `method="fixed"` draws exactly round(rate * size) positions uniformly
    without replacement instead.
    """
    if not 0 < sample_rate <= 1:
        raise ValueError(f"sample_rate must be in (0, 1], got {sample_rate}")
    return _draw_mask(rng.substream(seed, rng.MASK), n1, n3, kind, sample_rate, method)


def gen_mask_sequence(n1, n3, kind, sample_rate, seed, count, method=BERNOULLI):
    """Draw `count` masks sequentially from one mask sub-stream."""
    if not 0 < sample_rate <= 1:
        raise ValueError(f"sample_rate must be in (0, 1], got {sample_rate}")
    g = rng.substream(seed, rng.MASK)
    return [_draw_mask(g, n1, n3, kind, sample_rate, method) for _ in range(count)]


def gen_low_tubal_rank(n1, n2, n3, r, seed):
    """t-product of two i.i.d. Gaussian factors of inner dimension r."""
    if not 1 <= r <= min(n1, n2):
        raise RankOutOfRange(f"rank {r} not in [1, {min(n1, n2)}]")
    g = rng.substream(seed, rng.DATA)
    a = g.standard_normal((n1, r, n3))
    b = g.standard_normal((r, n2, n3))
    return algebra.tprod(a, b)


def gen_cp(n1, n2, n3, r, seed):
    """Sum of r outer products of i.i.d. Gaussian factor columns."""
    if r < 1:
        raise RankOutOfRange(f"CP rank must be >= 1, got {r}")
    g = rng.substream(seed, rng.DATA)
    a = g.standard_normal((n1, r))
    b = g.standard_normal((n2, r))
    c = g.standard_normal((n3, r))
    return np.einsum("il,jl,kl->ijk", a, b, c)


def random_orthogonal_tensor(n, n3, seed):
    """Random (n, n, n3) tensor satisfying Q^T * Q = identity (t-product)."""
    g = rng.substream(seed, rng.BASIS)
    stack = np.moveaxis(np.fft.rfft(g.standard_normal((n, n, n3)), axis=2), 2, 0)
    q = np.linalg.qr(stack)[0]
    return np.fft.irfft(np.moveaxis(q, 0, 2), n=n3, axis=2)


@dataclass(frozen=True)
class StreamSpec:
    """Parameters of a synthetic lateral-slice stream."""

    n1: int
    n3: int
    r: int
    T: int
    sample_rate: float
    kind: str = ENTRIES
    change_period: int = 0  # slices between basis re-draws; 0 = static
    seed: int = 0
    method: str = BERNOULLI

    def __post_init__(self):
        if not 0 < self.sample_rate <= 1:
            raise ValueError(f"sample_rate must be in (0, 1], got {self.sample_rate}")
        if not 1 <= self.r < self.n1:
            raise RankOutOfRange(f"need 1 <= r < n1, got r={self.r}, n1={self.n1}")
        if self.T < 1 or self.change_period < 0:
            raise ValueError("T must be >= 1 and change_period >= 0")

    @property
    def n_segments(self):
        if self.change_period == 0:
            return 1
        return ceil(self.T / self.change_period)

    def segment_of(self, t):
        if self.change_period == 0:
            return 0
        return min(t // self.change_period, self.n_segments - 1)


@dataclass(frozen=True)
class StreamItem:
    t: int
    slice: np.ndarray  # (n1, n3) ground-truth lateral slice
    mask: SampleMask
    segment: int


class FsmStream:
    """Pull-based stream of in-span lateral slices with per-slice masks.

    Each segment draws a fresh random orthonormal basis; slices are t-products
    of the segment basis with per-slice i.i.d. Gaussian weights. `segments`
    holds the ground-truth bases for tracking-error evaluation.
    """

    def __init__(self, spec):
        self.spec = spec
        self.segments = [
            FsmEstimate(
                _random_basis(rng.substream(spec.seed, rng.BASIS, k), spec.n1, spec.r, spec.n3),
                spec.n3,
            )
            for k in range(spec.n_segments)
        ]

    def __len__(self):
        return self.spec.T

    def __iter__(self):
        spec = self.spec
        g_w = rng.substream(spec.seed, rng.DATA)
        g_m = rng.substream(spec.seed, rng.MASK)
        for t in range(spec.T):
            seg = spec.segment_of(t)
            w = g_w.standard_normal((spec.r, spec.n3))
            wbar = np.fft.rfft(w, axis=1).T
            vbar = np.matmul(self.segments[seg].slices, wbar[:, :, None])[:, :, 0]
            v = np.fft.irfft(vbar, n=spec.n3, axis=0).T
            mask = _draw_mask(g_m, spec.n1, spec.n3, spec.kind, spec.sample_rate, spec.method)
            yield StreamItem(t=t, slice=v, mask=mask, segment=seg)


def gen_fsm_stream(spec):
    """Build the stream described by `spec` (see FsmStream)."""
    return FsmStream(spec)
