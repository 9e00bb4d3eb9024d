"""Conjugate-gradient iteration bounds for the sampled coefficient solve.

The inner CG solve gets harder as sampling thins out because the condition
number of the sampled basis operator grows. Two predictions of the iteration
count are provided, both of the classical form (1/2) kappa log(2/eps):

* a coherence-based a-priori bound, where kappa is bounded through the
  sampled-row concentration quantity tau (infeasible once tau/delta >= 1);
* an empirical bound from the condition number of the explicitly assembled
  sampled operator, averaged over random masks.

The dense constructions here are for desk-scale studies and oracles only.
"""

from dataclasses import dataclass
from math import log, sqrt

import numpy as np

from . import algebra
from .errors import SingularOperator
from .synthetic import ENTRIES, gen_mask_sequence


@dataclass(frozen=True)
class BoundParams:
    """Free constants of the a-priori bound."""

    c1: float = 1.0
    delta: float = 0.1
    epsilon: float = 1e-9

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("delta must be in (0, 1)")
        if self.epsilon <= 0 or self.c1 < 0:
            raise ValueError("need epsilon > 0 and c1 >= 0")


@dataclass(frozen=True)
class CgIterationBound:
    tau: float
    kappa_bound: float | None
    k_max: float | None

    @property
    def feasible(self):
        return self.k_max is not None


def cgd_iteration_bound(mu, n1, n3, omega_size, params=None):
    """A-priori CG iteration cap from the coherence of the sampled basis.

    tau = c1 * sqrt(n1 n3 mu log|omega| / |omega|); the bound is vacuous
    (returned infeasible) when tau/delta >= 1.
    """
    params = params or BoundParams()
    if omega_size < 1:
        raise ValueError("omega_size must be >= 1")
    tau = params.c1 * sqrt(n1 * n3 * mu * log(omega_size) / omega_size)
    x = tau / params.delta
    if x >= 1.0:
        return CgIterationBound(tau=tau, kappa_bound=None, k_max=None)
    kappa = sqrt((1.0 + x) / (1.0 - x))
    return CgIterationBound(tau=tau, kappa_bound=kappa, k_max=0.5 * kappa * log(2.0 / params.epsilon))


def dft_matrix(n):
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n)


def dense_sampled_basis(fsm, mask):
    """Explicit sampled operator: observed rows of (inverse DFT) x (basis).

    Returns the |omega| x (r n3) complex matrix whose normal equations the
    matrix-free CG solve targets (up to the uniform n3 factor). Dense in n3;
    desk scale only.
    """
    mask = mask.to_entries()
    if mask.n1 != fsm.n1 or mask.n3 != fsm.n3:
        raise ValueError("mask dimensions do not match the basis")
    n3, r = fsm.n3, fsm.r
    full = np.moveaxis(algebra.expand_spectrum(np.moveaxis(fsm.slices, 0, 2), n3), 2, 0)
    i_idx, k_idx = np.nonzero(mask.mask)
    finv = np.conj(dft_matrix(n3)) / n3
    rows = full[:, i_idx, :].transpose(1, 0, 2)  # (|omega|, n3, r)
    return (finv[k_idx, :][:, :, None] * rows).reshape(i_idx.size, n3 * r)


def sampled_operator_condition(fsm, mask):
    """Condition number of the explicit sampled operator (SVD based)."""
    m = dense_sampled_basis(fsm, mask)
    if m.shape[0] < m.shape[1]:
        raise SingularOperator(
            f"only {m.shape[0]} observed samples for {m.shape[1]} coefficients"
        )
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] <= s[0] * 1e-13:
        raise SingularOperator("sampled operator is numerically rank deficient")
    return float(s[0] / s[-1])


def sampled_operator_coherence(fsm, mask):
    """Coherence of the column space of the explicit sampled operator."""
    m = dense_sampled_basis(fsm, mask)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    q = u[:, s > s[0] * 1e-12] if s.size and s[0] > 0 else u[:, :0]
    if q.shape[1] == 0:
        raise SingularOperator("sampled operator is zero")
    return float(np.max(np.sum(np.abs(q) ** 2, axis=1)))


def operator_coherence(fsm):
    """Coherence of the full (unsampled) inverse-transform basis operator.

    This is the matrix whose rows the observation process samples; its
    coherence is what enters the a-priori CG bound.
    """
    from .synthetic import SampleMask

    return sampled_operator_coherence(fsm, SampleMask.full(fsm.n1, fsm.n3))


def condition_number_trials(fsm, sample_rate, trials, seed, kind=ENTRIES, strict=True):
    """Draw `trials` masks and pair each with its operator condition number.

    With strict=False rank-deficient draws yield kappa = inf instead of
    raising SingularOperator.
    """
    masks = gen_mask_sequence(fsm.n1, fsm.n3, kind, sample_rate, seed, trials)
    out = []
    for mask in masks:
        try:
            kappa = sampled_operator_condition(fsm, mask)
        except SingularOperator:
            if strict:
                raise
            kappa = float("inf")
        out.append((mask, kappa))
    return out


@dataclass(frozen=True)
class EmpiricalBound:
    mean_kappa_sq: float
    k_bound: float
    kappas: np.ndarray


def empirical_condition_bound(fsm, sample_rate, trials=20, seed=0, epsilon=1e-9, kind=ENTRIES):
    """Average kappa^2 over random masks and the matching CG iteration bound.

    The bound is (1/2) sqrt(mean kappa^2) log(2/eps). Raises SingularOperator
    if any trial operator is rank deficient.
    """
    pairs = condition_number_trials(fsm, sample_rate, trials, seed, kind=kind, strict=True)
    kappas = np.array([k for _, k in pairs])
    mean_sq = float(np.mean(kappas**2))
    return EmpiricalBound(
        mean_kappa_sq=mean_sq,
        k_bound=0.5 * sqrt(mean_sq) * log(2.0 / epsilon),
        kappas=kappas,
    )
