"""Experiment drivers shared by the CLI, the demos, and the acceptance suite.

Three synthetic protocols:

* static batch completion: a fixed low-tubal-rank tensor observed once
  through per-slice masks, cycled over until the recovered tensor matches a
  reference to tolerance;
* dynamic tracking: a stream whose generating free submodule is redrawn
  every `change_period` slices, with the projector tracking error recorded
  per step;
* CG iteration study: one generating basis, a sweep of sampling rates; per
  rate the mean inner-CG iteration count, the empirical condition-number
  bound over repeated masks, the a-priori coherence bound, and the recovery
  error.
"""

from dataclasses import dataclass

import numpy as np

from . import rng, tracking
from .bounds import BoundParams, cgd_iteration_bound, condition_number_trials, operator_coherence
from .metrics import MetricRecord, nrmse
from .subspace import init_random_fsm
from .synthetic import (
    ENTRIES,
    gen_fsm_stream,
    gen_low_tubal_rank,
    gen_mask_sequence,
)
from .tracking import CgdConfig, solve_weights_cgd


def generate_dataset(n1, n2, n3, r, sample_rate, kind=ENTRIES, seed=0, method="bernoulli"):
    """Low-tubal-rank truth tensor plus one observation mask per lateral slice."""
    truth = gen_low_tubal_rank(n1, n2, n3, r, seed)
    masks = gen_mask_sequence(n1, n3, kind, sample_rate, seed, count=n2, method=method)
    return truth, masks


@dataclass
class CompletionResult:
    fsm: object
    imputed: np.ndarray  # re-solved against the final basis
    reports: list
    passes_run: int
    pass_nrmse: list  # streaming-prediction NRMSE after each pass (if reference)
    final_nrmse: float | None

    @property
    def mean_cg_iters(self):
        return float(np.mean([r.cg_iters for r in self.reports]))


def complete_batch(observed, masks, rank, seed=0, cfg=None, passes=1,
                   reference=None, stop_nrmse=None):
    """Multi-pass streaming completion of a batch tensor.

    Only masked entries of `observed` are ever read. Early stopping compares
    the per-pass streaming predictions against `reference`; the returned
    imputation re-solves every slice against the final basis.
    """
    observed = np.asarray(observed, dtype=np.float64)
    n1, n2, n3 = observed.shape
    if len(masks) != n2:
        raise ValueError(f"{len(masks)} masks for {n2} lateral slices")
    items = [(observed[:, t, :], masks[t]) for t in range(n2)]
    fsm = init_random_fsm(n1, rank, n3, seed)
    res = tracking.run_stream(fsm, items, cfg, passes=passes,
                              reference=reference, stop_nrmse=stop_nrmse)
    imputed = tracking.impute_with_basis(res.fsm, items, cfg)
    final = nrmse(imputed, reference) if reference is not None else None
    return CompletionResult(fsm=res.fsm, imputed=imputed, reports=res.reports,
                            passes_run=res.passes_run, pass_nrmse=res.pass_nrmse,
                            final_nrmse=final)


@dataclass
class TrackingResult:
    records: list  # MetricRecord per step, fsm_error filled
    stream: object  # the generating FsmStream (ground-truth bases inside)
    fsm: object


def dynamic_tracking(spec, cfg=None, init_seed=None):
    """Track a (possibly switching) stream and record per-step errors."""
    from .metrics import fsm_tracking_error

    stream = gen_fsm_stream(spec)
    fsm = init_random_fsm(spec.n1, spec.r, spec.n3, spec.seed if init_seed is None else init_seed)
    records = []
    for item in stream:
        fsm, w, report = tracking.step(fsm, item.slice, item.mask, cfg, t=item.t)
        err = fsm_tracking_error(fsm, stream.segments[item.segment])
        records.append(MetricRecord(
            t=item.t,
            nrmse_slice=nrmse(tracking.predict_slice(fsm, w), item.slice),
            fsm_error=err,
            cg_iters=report.cg_iters,
            wall_ms=report.wall_time * 1e3,
        ))
    return TrackingResult(records=records, stream=stream, fsm=fsm)


@dataclass
class RateRecord:
    """One sampling rate of the CG study."""

    rate: float
    dof_ratio: float
    mean_cg: float
    kappa_bound: float | None  # 0.5 sqrt(mean kappa^2) log(2/eps), None if any trial singular
    theorem_bound: float | None  # a-priori bound at this rate; None when infeasible
    nrmse: float
    trial_kappas: np.ndarray  # per trial mask; inf where singular
    trial_iters: np.ndarray  # CG iterations on the same trial masks


@dataclass
class StudyResult:
    n1: int
    n2: int
    n3: int
    r: int
    records: list


# sweep ends near dof/|omega| = 1; past that the per-slice systems go
# underdetermined and CG terminates early on the exhausted Krylov space
DEFAULT_RATES = (1.0, 0.8, 0.6, 0.45, 0.35, 0.28, 0.22, 0.18, 0.15, 0.12)


def cgd_study(n1, n2, n3, r, rates, seed=0, cfg=None, trials=20, passes=2,
              bound_params=None):
    """Sweep sampling rates on one generated problem (see module docstring).

    All rates share the same truth tensor, initial basis and mask sub-stream
    (masks at a lower rate are nested in those at a higher rate), so the
    sweep isolates the effect of the sampling level. The a-priori bound is
    evaluated with the coherence of the full basis operator and the total
    observed-sample count at the rate.
    """
    cfg = cfg or CgdConfig()
    params = bound_params or BoundParams(epsilon=cfg.tol)
    basis = init_random_fsm(n1, r, n3, seed)
    weights = rng.substream(seed, rng.DATA).standard_normal((r, n2, n3))
    truth = np.fft.irfft(
        np.moveaxis(
            np.matmul(basis.slices, np.moveaxis(np.fft.rfft(weights, axis=2), 2, 0)), 0, 2
        ),
        n=n3,
        axis=2,
    )
    dof = n3 * r * ((n1 + n2) - r)
    mu = operator_coherence(basis)

    records = []
    for rate in rates:
        masks = gen_mask_sequence(n1, n3, ENTRIES, rate, seed, count=n2)
        run = complete_batch(truth, masks, r, seed=seed, cfg=cfg,
                             passes=passes, reference=truth)
        omega_total = sum(m.count for m in masks)

        pairs = condition_number_trials(basis, rate, trials, seed, strict=False)
        kappas = np.array([k for _, k in pairs])
        iters = np.empty(trials)
        for j, (mask, _) in enumerate(pairs):
            _, iters[j] = solve_weights_cgd(basis, truth[:, j % n2, :], mask, cfg)

        kappa_bound = (
            0.5 * np.sqrt(np.mean(kappas**2)) * np.log(2.0 / params.epsilon)
            if np.isfinite(kappas).all()
            else None
        )
        apriori = cgd_iteration_bound(mu, n1, n3, omega_total, params)
        records.append(RateRecord(
            rate=float(rate),
            dof_ratio=dof / omega_total,
            mean_cg=run.mean_cg_iters,
            kappa_bound=None if kappa_bound is None else float(kappa_bound),
            theorem_bound=apriori.k_max,
            nrmse=run.final_nrmse,
            trial_kappas=kappas,
            trial_iters=iters,
        ))
    return StudyResult(n1=n1, n2=n2, n3=n3, r=r, records=records)
