"""Streaming low-tubal-rank tensor completion under the t-product algebra.

Third-order tensors are treated as matrices of tubes; multiplication is
per-frequency-slice matrix multiplication after a tube-wise FFT. The library
provides the resulting algebra and tensor SVD, synthetic data and mask
generators, a streaming Grassmannian tracker that completes tensors from
arbitrary missing entries or missing tubes, conjugate-gradient iteration
bounds, and the evaluation metrics and file formats used by the CLI.
"""

from .algebra import (
    Spectral3,
    bcirc,
    conj_transpose,
    expand_spectrum,
    fft3,
    fold,
    frobenius_norm,
    identity_tensor,
    ifft3,
    num_stored_slices,
    spectral_weights,
    tprod,
    unfold,
)
from .bounds import (
    BoundParams,
    CgIterationBound,
    EmpiricalBound,
    cgd_iteration_bound,
    condition_number_trials,
    dense_sampled_basis,
    empirical_condition_bound,
    operator_coherence,
    sampled_operator_coherence,
    sampled_operator_condition,
)
from .errors import (
    DimensionMismatch,
    FactorizationError,
    NotOrthonormal,
    RankOutOfRange,
    SingularOperator,
    SymmetryViolation,
    TubalError,
    ZeroReference,
)
from .experiments import (
    DEFAULT_RATES,
    CompletionResult,
    StudyResult,
    TrackingResult,
    cgd_study,
    complete_batch,
    dynamic_tracking,
    generate_dataset,
)
from .metrics import MetricRecord, fsm_tracking_error, nrmse, slice_nrmse_curve, write_metrics_csv
from .subspace import FsmEstimate, WeightSlice, coherence, init_random_fsm
from .synthetic import (
    ENTRIES,
    TUBES,
    FsmStream,
    SampleMask,
    StreamSpec,
    gen_cp,
    gen_fsm_stream,
    gen_low_tubal_rank,
    gen_mask,
    gen_mask_sequence,
    random_orthogonal_tensor,
)
from .tracking import (
    CgdConfig,
    StepReport,
    StreamResult,
    apply_sampled_gram,
    compute_gradient_terms,
    geodesic_update,
    impute_with_basis,
    predict_slice,
    run_stream,
    solve_weights_cgd,
    solve_weights_tubes,
    step,
    update_from_entries,
    update_from_tubes,
)
from .tsvd import TsvdFactors, reconstruct, singular_tube_norms, truncate, tsvd, tubal_rank

__version__ = "0.1.0"
