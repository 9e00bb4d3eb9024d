"""Streaming subspace tracking and completion from partial lateral slices.

One step per incoming slice: fit coefficients against the current basis on
the observed samples only, form the orthogonal component of the residual,
and rotate each frequency slice of the basis toward it along a Grassmann
geodesic with the greedy angle

    theta_i = arctan(||rho_i|| / ||w_i||),

which absorbs the slice exactly when it is fully observed. Two sampling
regimes share this skeleton:

* arbitrary missing entries: the coefficient fit has no closed form, so it
  runs conjugate gradients on the normal equations of the sampled operator,
  matrix-free (FFTs plus per-slice matvecs on the stored half-spectrum);
* missing tubes: the sampled operator is block-diagonal across frequency
  slices, so coefficients come from per-slice pseudo-inverses and the
  zero-filled residual spectrum is already orthogonal to the basis.

All per-slice work runs on the stored half-spectrum; conjugate-symmetric
mirrors are implicit. The CG inner products weight each stored bin by its
spectrum multiplicity, which reproduces full-spectrum CG exactly. Lateral
slices are passed as real (n1, n3) arrays throughout.
"""

import time
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import algebra
from .errors import DimensionMismatch
from .subspace import FsmEstimate, WeightSlice
from .synthetic import ENTRIES, TUBES

# per-slice orthonormality drift that triggers a QR repair after an update
DRIFT_TOL = 1e-8


@dataclass(frozen=True)
class CgdConfig:
    """Inner conjugate-gradient solve: relative residual target and cap."""

    tol: float = 1e-9
    max_iters: int = 300

    def __post_init__(self):
        if self.tol <= 0 or self.max_iters < 1:
            raise ValueError("need tol > 0 and max_iters >= 1")


@dataclass
class StepReport:
    """Per-slice diagnostics emitted by each update."""

    t: int
    cg_iters: int
    residual_norm: float  # ||observed residual||_F in the canonical domain
    theta: np.ndarray  # applied rotation angle per stored frequency slice
    wall_time: float


class GradientTerms(NamedTuple):
    rho: np.ndarray  # (n_stored, n1) residual spectrum, basis component removed
    r_omega: np.ndarray  # (n_stored, n1) spectrum of the zero-filled residual
    residual_norm: float


def _check_slice(fsm, v):
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (fsm.n1, fsm.n3):
        raise DimensionMismatch(f"slice shape {v.shape} != ({fsm.n1}, {fsm.n3})")
    return v


def _require_kind(mask, kind):
    if mask.kind != kind:
        raise DimensionMismatch(f"expected a {kind!r} mask, got {mask.kind!r}")


def _slice_spectrum(v):
    # (n1, n3) -> (n_stored, n1)
    return np.fft.rfft(v, axis=1).T


def _spectrum_slice(p, n3):
    # (n_stored, n1) -> (n1, n3)
    return np.fft.irfft(p, n=n3, axis=0).T


def _gram_apply(u, uh, mask2d, n3, x):
    y = np.matmul(u, x[:, :, None])[:, :, 0]
    yc = np.fft.irfft(y, n=n3, axis=0)
    yc *= mask2d.T
    yb = np.fft.rfft(yc, axis=0)
    return np.matmul(uh, yb[:, :, None])[:, :, 0]


def apply_sampled_gram(fsm, mask, x):
    """Matrix-free normal-equation operator of the sampled basis.

    Maps stored-spectrum coefficients x (n_stored, r) through: per-slice
    basis product, inverse tube FFT, zero-fill outside the mask, forward
    tube FFT, per-slice adjoint basis product. With a full mask this is the
    identity; the sampled basis is never materialized.
    """
    _require_kind(mask, ENTRIES)
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (fsm.n_stored, fsm.r):
        raise DimensionMismatch(f"coefficients shape {x.shape} != ({fsm.n_stored}, {fsm.r})")
    uh = fsm.slices.conj().transpose(0, 2, 1)
    return _gram_apply(fsm.slices, uh, mask.mask, fsm.n3, x)


def solve_weights_cgd(fsm, v, mask, cfg=None):
    """Fit coefficients to the observed entries by conjugate gradients.

    Minimizes the squared error on the mask over the (conjugate-symmetric)
    coefficient spectrum. Stops when the normal-equation residual falls below
    cfg.tol relative to the right-hand side, or at cfg.max_iters (reported,
    not an error). Returns (weights, iterations).
    """
    cfg = cfg or CgdConfig()
    v = _check_slice(fsm, v)
    _require_kind(mask, ENTRIES)
    n3 = fsm.n3
    if mask.is_empty:
        return WeightSlice.zero(fsm.r, n3), 0

    u = fsm.slices
    uh = u.conj().transpose(0, 2, 1)
    mult = algebra.spectral_weights(n3)

    def wdot(a, b):
        return float(np.sum(mult[:, None] * (np.conj(a) * b).real))

    vb = _slice_spectrum(v * mask.mask)
    b = np.matmul(uh, vb[:, :, None])[:, :, 0]
    bs = wdot(b, b)
    if bs == 0.0:
        return WeightSlice.zero(fsm.r, n3), 0

    x = np.zeros_like(b)
    res = b.copy()
    p = b.copy()
    rs = bs
    target = cfg.tol**2 * bs
    iters = 0
    for _ in range(cfg.max_iters):
        ap = _gram_apply(u, uh, mask.mask, n3, p)
        denom = wdot(p, ap)
        if denom <= 0.0:  # operator numerically lost definiteness along p
            break
        alpha = rs / denom
        x += alpha * p
        res -= alpha * ap
        iters += 1
        rs_new = wdot(res, res)
        if rs_new <= target:
            break
        p = res + (rs_new / rs) * p
        rs = rs_new
    return WeightSlice(x, n3), iters


def solve_weights_tubes(fsm, v, mask):
    """Closed-form coefficients when whole tubes are observed.

    Each frequency slice solves an independent least-squares problem on the
    observed rows; rank-deficient row subsets get the minimum-norm solution.
    """
    v = _check_slice(fsm, v)
    _require_kind(mask, TUBES)
    idx = np.flatnonzero(mask.mask)
    if idx.size == 0:
        return WeightSlice.zero(fsm.r, fsm.n3)
    vbar = np.fft.rfft(v[idx, :], axis=1).T  # (n_stored, |omega|)
    uobs = fsm.slices[:, idx, :]
    w = np.matmul(np.linalg.pinv(uobs), vbar[:, :, None])[:, :, 0]
    return WeightSlice(w, fsm.n3)


def predict_slice(fsm, w):
    """Canonical (n1, n3) slice spanned by the basis with coefficients w."""
    wbar = w.spectral if isinstance(w, WeightSlice) else np.asarray(w)
    pbar = np.matmul(fsm.slices, wbar[:, :, None])[:, :, 0]
    return _spectrum_slice(pbar, fsm.n3)


def compute_gradient_terms(fsm, v, mask, w):
    """Residual spectra driving the subspace rotation.

    The full prediction is subtracted from the slice, unobserved positions
    are zero-filled, and the forward tube FFT gives r_omega; removing the
    in-basis component per slice gives rho. The (sign-flipped) per-slice
    gradient blocks of the sampled loss are rho_i w_i'.
    """
    v = _check_slice(fsm, v)
    _require_kind(mask, ENTRIES)
    wbar = w.spectral if isinstance(w, WeightSlice) else np.asarray(w)
    p = predict_slice(fsm, wbar)
    res = (v - p) * mask.mask
    r_omega = _slice_spectrum(res)
    coeff = np.matmul(fsm.slices.conj().transpose(0, 2, 1), r_omega[:, :, None])
    rho = r_omega - np.matmul(fsm.slices, coeff)[:, :, 0]
    return GradientTerms(rho=rho, r_omega=r_omega, residual_norm=float(np.linalg.norm(res)))


def _rotation_angles(rho, wbar):
    nr = np.linalg.norm(rho, axis=1)
    nw = np.linalg.norm(wbar, axis=1)
    return np.where(nw > 0, np.arctan2(nr, nw), 0.0)


def geodesic_update(fsm, rho, w):
    """Rotate each frequency slice of the basis toward its residual direction.

    Uses the greedy angle arctan(||rho_i||/||w_i||); slices with zero weight
    or zero residual stay put. The rank-one rotation preserves orthonormality
    in exact arithmetic; accumulated drift beyond DRIFT_TOL triggers a QR
    repair of the slice stack.
    """
    wbar = w.spectral if isinstance(w, WeightSlice) else np.asarray(w)
    rho = np.asarray(rho, dtype=np.complex128)
    nr = np.linalg.norm(rho, axis=1)
    nw = np.linalg.norm(wbar, axis=1)
    hyp = np.hypot(nr, nw)
    active = nw > 0

    safe_hyp = np.where(active, hyp, 1.0)
    safe_nw = np.where(active, nw, 1.0)
    # sin(theta)/||rho|| and (cos(theta)-1)/||p||, stable as ||rho|| -> 0
    c_rho = np.where(active, 1.0 / safe_hyp, 0.0)
    c_p = np.where(active, (nw / safe_hyp - 1.0) / safe_nw, 0.0)

    p = np.matmul(fsm.slices, wbar[:, :, None])[:, :, 0]
    direction = c_rho[:, None] * rho + c_p[:, None] * p
    w_row = np.where(active, 1.0 / safe_nw, 0.0)[:, None] * wbar.conj()
    slices = fsm.slices + direction[:, :, None] * w_row[:, None, :]

    out = FsmEstimate(slices=slices, n3=fsm.n3)
    if out.orthonormality_defect() >= DRIFT_TOL:
        out = FsmEstimate(slices=np.linalg.qr(slices)[0], n3=fsm.n3)
    return out


def update_from_entries(fsm, v, mask, cfg=None, t=0):
    """One tracking step from a slice observed on arbitrary entries."""
    start = time.perf_counter()
    if mask.is_empty:  # nothing observed: skip the whole step
        w = WeightSlice.zero(fsm.r, fsm.n3)
        return fsm, w, StepReport(t, 0, 0.0, np.zeros(fsm.n_stored), time.perf_counter() - start)
    w, iters = solve_weights_cgd(fsm, v, mask, cfg)
    grad = compute_gradient_terms(fsm, v, mask, w)
    new = geodesic_update(fsm, grad.rho, w)
    theta = _rotation_angles(grad.rho, w.spectral)
    return new, w, StepReport(t, iters, grad.residual_norm, theta, time.perf_counter() - start)


def update_from_tubes(fsm, v, mask, t=0):
    """One tracking step from a slice observed on whole tubes."""
    start = time.perf_counter()
    if mask.is_empty:
        w = WeightSlice.zero(fsm.r, fsm.n3)
        return fsm, w, StepReport(t, 0, 0.0, np.zeros(fsm.n_stored), time.perf_counter() - start)
    v = _check_slice(fsm, v)
    w = solve_weights_tubes(fsm, v, mask)
    res = (v - predict_slice(fsm, w)) * mask.mask[:, None]
    rbar = _slice_spectrum(res)  # already orthogonal to the basis per slice
    new = geodesic_update(fsm, rbar, w)
    theta = _rotation_angles(rbar, w.spectral)
    return new, w, StepReport(t, 0, float(np.linalg.norm(res)), theta, time.perf_counter() - start)


def step(fsm, v, mask, cfg=None, t=0):
    """Dispatch one update on the mask kind."""
    if mask.kind == TUBES:
        return update_from_tubes(fsm, v, mask, t=t)
    return update_from_entries(fsm, v, mask, cfg, t=t)


@dataclass
class StreamResult:
    fsm: FsmEstimate
    reports: list
    imputed: np.ndarray | None
    passes_run: int
    pass_nrmse: list


def run_stream(fsm, stream, cfg=None, *, passes=1, collect_imputed=False,
               reference=None, stop_nrmse=None, on_step=None, shuffle_seed=None):
    """Process a stream of (slice, mask) pairs, optionally cycling over it.

    State held across steps is the basis estimate plus the current weight
    slice; imputed slices (predictions with the freshly updated basis) are
    accumulated only when requested or when a reference tensor is supplied
    for per-pass early stopping. `on_step(t, fsm, w, report)` runs after
    every update. Multi-pass mode needs a re-iterable sequence; slices are
    visited in fixed order unless `shuffle_seed` asks for a seeded per-pass
    shuffle. Imputed slices keep their original positions either way.
    """
    if passes < 1:
        raise ValueError("passes must be >= 1")
    if passes > 1 and not hasattr(stream, "__len__"):
        raise TypeError("multi-pass processing needs a sequence, not a one-shot iterator")
    if shuffle_seed is not None:
        stream = list(stream)
        order_rng = np.random.Generator(np.random.Philox(shuffle_seed))
    collect = collect_imputed or reference is not None
    imputed = None
    reports = []
    pass_nrmse = []
    passes_run = 0
    t_global = 0
    for _ in range(passes):
        if shuffle_seed is not None:
            order = order_rng.permutation(len(stream))
            indexed = ((int(i), stream[int(i)]) for i in order)
        else:
            indexed = enumerate(stream)
        slots = {}
        for pos, (v, mask) in indexed:
            fsm, w, report = step(fsm, v, mask, cfg, t=t_global)
            reports.append(report)
            if on_step is not None:
                on_step(t_global, fsm, w, report)
            if collect:
                slots[pos] = predict_slice(fsm, w)
            t_global += 1
        passes_run += 1
        if collect:
            imputed = np.stack([slots[i] for i in range(len(slots))], axis=1)
        if reference is not None:
            from .metrics import nrmse

            err = nrmse(imputed, reference)
            pass_nrmse.append(err)
            if stop_nrmse is not None and err <= stop_nrmse:
                break
    return StreamResult(fsm=fsm, reports=reports, imputed=imputed,
                        passes_run=passes_run, pass_nrmse=pass_nrmse)


def impute_with_basis(fsm, stream, cfg=None):
    """Re-solve every slice against a fixed basis and stack the predictions."""
    slots = []
    for v, mask in stream:
        if mask.kind == TUBES:
            w = solve_weights_tubes(fsm, v, mask)
        else:
            w, _ = solve_weights_cgd(fsm, v, mask, cfg)
        slots.append(predict_slice(fsm, w))
    return np.stack(slots, axis=1)
