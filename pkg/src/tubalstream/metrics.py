"""Evaluation quantities: normalized errors and subspace tracking error."""

import csv
from dataclasses import dataclass

import numpy as np

from . import algebra
from .errors import DimensionMismatch, ZeroReference


def nrmse(estimate, truth):
    """||estimate - truth||_F / ||truth||_F."""
    estimate = np.asarray(estimate)
    truth = np.asarray(truth)
    if estimate.shape != truth.shape:
        raise DimensionMismatch(f"shapes {estimate.shape} and {truth.shape} differ")
    denom = np.linalg.norm(truth.ravel())
    if denom == 0.0:
        raise ZeroReference("reference tensor has zero norm")
    return float(np.linalg.norm((estimate - truth).ravel()) / denom)


def fsm_tracking_error(est, truth):
    """Normalized Frobenius distance between the two t-product projectors.

    Computed per frequency slice as ||P_est - P_truth||_F^2 with stored-bin
    multiplicities (the transform's Parseval factor cancels in the ratio), so
    the result is invariant to rotations of either basis and ranks may differ.
    """
    if (est.n1, est.n3) != (truth.n1, truth.n3):
        raise DimensionMismatch(
            f"bases live on ({est.n1}, {est.n3}) vs ({truth.n1}, {truth.n3})"
        )
    mult = algebra.spectral_weights(truth.n3)
    p_est = np.matmul(est.slices, est.slices.conj().transpose(0, 2, 1))
    p_tru = np.matmul(truth.slices, truth.slices.conj().transpose(0, 2, 1))
    num = np.sum(mult * np.linalg.norm(p_est - p_tru, axis=(1, 2)) ** 2)
    den = np.sum(mult * np.linalg.norm(p_tru, axis=(1, 2)) ** 2)
    return float(np.sqrt(num / den))


@dataclass
class MetricRecord:
    """One evaluation row; fsm_error/wall_ms may be absent."""

    t: int
    nrmse_slice: float | None
    fsm_error: float | None = None
    cg_iters: int = 0
    wall_ms: float | None = None


def slice_nrmse_curve(imputed, truth, reports=None):
    """Per-slice NRMSE of an imputed tensor against the truth.

    `imputed` is (n1, T, n3) or an iterable of (n1, n3) slices; step reports,
    when given, contribute CG iteration counts and timings to the records.
    """
    truth = np.asarray(truth)
    slices = (
        [imputed[:, t, :] for t in range(imputed.shape[1])]
        if isinstance(imputed, np.ndarray)
        else list(imputed)
    )
    if len(slices) != truth.shape[1]:
        raise DimensionMismatch(f"{len(slices)} slices vs {truth.shape[1]} in the reference")
    records = []
    for t, s in enumerate(slices):
        rec = MetricRecord(t=t, nrmse_slice=nrmse(s, truth[:, t, :]))
        if reports is not None:
            rec.cg_iters = reports[t].cg_iters
            rec.wall_ms = reports[t].wall_time * 1e3
        records.append(rec)
    return records


def _fmt(x):
    return "" if x is None else repr(float(x))


def write_metrics_csv(path, records, include_timing=False):
    """Write records as `t,nrmse,fsm_error,cg_iters,wall_ms`.

    Absent values produce empty fields. Timings are dropped unless
    `include_timing` is set, keeping default outputs byte-reproducible.
    """
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["t", "nrmse", "fsm_error", "cg_iters", "wall_ms"])
        for r in records:
            out.writerow([
                r.t,
                _fmt(r.nrmse_slice),
                _fmt(r.fsm_error),
                r.cg_iters,
                _fmt(r.wall_ms) if include_timing else "",
            ])
