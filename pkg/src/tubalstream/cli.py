"""Command-line experiment runner.

Subcommands: `gen` (synthetic dataset files), `complete` (stream a stored
tensor through the tracker), `track` (dynamic free-submodule tracking),
`cgd-study` (inner-CG iteration sweep over sampling rates), `tsvd` (batch
factorization of a stored tensor).

Exit codes: 0 success, 2 usage/validation error, 1 runtime failure. All
randomness is seeded, and default CSV outputs are byte-reproducible for
identical flags (`--timing` opts into measured wall times, which are not).
"""

import argparse
import contextlib
import sys
from pathlib import Path

import numpy as np

from . import experiments, fileio, metrics
from .errors import TubalError
from .tsvd import reconstruct, singular_tube_norms, tsvd
from .experiments import DEFAULT_RATES
from .metrics import MetricRecord
from .synthetic import ENTRIES, TUBES, StreamSpec
from .tracking import CgdConfig


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", type=Path, default=Path("."))
    p.add_argument("--threads", type=int, default=None,
                   help="cap BLAS/FFT thread pools for this run")


def _add_cg_flags(p):
    p.add_argument("--cgd-tol", type=float, default=1e-9)
    p.add_argument("--cgd-max-iters", type=int, default=300)


def build_parser():
    parser = argparse.ArgumentParser(prog="tubalstream", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic tensor, masks, and sidecar")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--n3", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--kind", choices=[ENTRIES, TUBES], default=ENTRIES)
    p.add_argument("--method", choices=["bernoulli", "fixed"], default="bernoulli")
    _add_common(p)

    p = sub.add_parser("complete", help="complete a stored tensor from its mask file")
    p.add_argument("--tensor", type=Path, required=True)
    p.add_argument("--mask", type=Path, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--variant", choices=[ENTRIES, TUBES], default=None,
                   help="must match the mask kind; default: inferred")
    p.add_argument("--passes", type=int, default=1)
    p.add_argument("--reference", type=Path, default=None)
    p.add_argument("--stop-nrmse", type=float, default=None)
    p.add_argument("--timing", action="store_true",
                   help="write measured wall times (breaks byte-reproducibility)")
    _add_cg_flags(p)
    _add_common(p)

    p = sub.add_parser("track", help="track a dynamically switching synthetic stream")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n3", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--kind", choices=[ENTRIES, TUBES], default=ENTRIES)
    p.add_argument("--length", type=int, required=True, help="number of slices T")
    p.add_argument("--change-period", type=int, default=0)
    p.add_argument("--timing", action="store_true")
    _add_cg_flags(p)
    _add_common(p)

    p = sub.add_parser("cgd-study", help="CG iteration counts and bounds over sampling rates")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--n3", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--rates", type=str, default=None,
                   help="comma-separated sampling rates (default: built-in 10-point sweep)")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--passes", type=int, default=2)
    _add_cg_flags(p)
    _add_common(p)

    p = sub.add_parser("tsvd", help="factorize a stored tensor and dump singular tubes")
    p.add_argument("--tensor", type=Path, required=True)
    _add_common(p)

    return parser


def _fmt(x):
    return "" if x is None else repr(float(x))


def cmd_gen(args, parser):
    if not 0 < args.rate <= 1:
        parser.error(f"--rate must be in (0, 1], got {args.rate}")
    if args.rank < 1 or min(args.n1, args.n2, args.n3) < 1:
        parser.error("dimensions and rank must be positive")
    truth, masks = experiments.generate_dataset(
        args.n1, args.n2, args.n3, args.rank, args.rate,
        kind=args.kind, seed=args.seed, method=args.method)
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    fileio.write_tensor(out / "truth.tns", truth)
    fileio.write_mask_csv(out / "masks.csv", masks)
    fileio.write_json(out / "spec.json", {
        "n1": args.n1, "n2": args.n2, "n3": args.n3, "rank": args.rank,
        "sample_rate": args.rate, "kind": args.kind, "method": args.method,
        "seed": args.seed,
    })
    print(f"wrote truth.tns, masks.csv, spec.json to {out}")
    return 0


def cmd_complete(args, parser):
    if args.passes < 1:
        parser.error("--passes must be >= 1")
    tensor = fileio.read_tensor(args.tensor)
    if np.iscomplexobj(tensor):
        parser.error("complete expects a real (dtype 0) tensor")
    masks = fileio.read_mask_csv(args.mask)
    if args.variant is not None and masks and masks[0].kind != args.variant:
        parser.error(f"--variant {args.variant} does not match mask kind {masks[0].kind!r}")
    if masks and len(masks) < tensor.shape[1]:
        # element-list CSVs cannot represent trailing all-empty masks
        proto = masks[0]
        empty = np.zeros_like(proto.mask)
        masks += [type(proto)(proto.kind, proto.n1, proto.n3, empty)
                  for _ in range(tensor.shape[1] - len(masks))]
    if args.rank < 1 or args.rank >= tensor.shape[0]:
        parser.error(f"--rank must be in [1, n1), got {args.rank}")
    reference = fileio.read_tensor(args.reference) if args.reference else None
    cfg = CgdConfig(tol=args.cgd_tol, max_iters=args.cgd_max_iters)
    result = experiments.complete_batch(
        tensor, masks, args.rank, seed=args.seed, cfg=cfg,
        passes=args.passes, reference=reference, stop_nrmse=args.stop_nrmse)

    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    fileio.write_tensor(out / "imputed.tns", result.imputed)
    fileio.save_fsm(out / "fsm.tns", result.fsm,
                    step_count=len(result.reports), seed=args.seed)
    last_pass = result.reports[-tensor.shape[1]:]
    if reference is not None:
        records = metrics.slice_nrmse_curve(result.imputed, reference, reports=last_pass)
    else:
        records = [MetricRecord(t=r.t % tensor.shape[1], nrmse_slice=None,
                                cg_iters=r.cg_iters, wall_ms=r.wall_time * 1e3)
                   for r in last_pass]
    metrics.write_metrics_csv(out / "metrics.csv", records, include_timing=args.timing)
    msg = f"passes={result.passes_run} mean_cg={result.mean_cg_iters:.2f}"
    if result.final_nrmse is not None:
        msg += f" nrmse={result.final_nrmse:.3e}"
    print(msg)
    return 0


def cmd_track(args, parser):
    try:
        spec = StreamSpec(n1=args.n1, n3=args.n3, r=args.rank, T=args.length,
                          sample_rate=args.rate, kind=args.kind,
                          change_period=args.change_period, seed=args.seed)
    except (ValueError, TubalError) as exc:
        parser.error(str(exc))
    cfg = CgdConfig(tol=args.cgd_tol, max_iters=args.cgd_max_iters)
    result = experiments.dynamic_tracking(spec, cfg)
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    metrics.write_metrics_csv(out / "track.csv", result.records, include_timing=args.timing)
    final = result.records[-1].fsm_error
    print(f"tracked {spec.T} slices over {spec.n_segments} segment(s); final error {final:.3e}")
    return 0


def cmd_cgd_study(args, parser):
    if args.rates is None:
        rates = list(DEFAULT_RATES)
    else:
        try:
            rates = [float(x) for x in args.rates.split(",") if x]
        except ValueError:
            parser.error(f"bad --rates list: {args.rates!r}")
    if any(not 0 < x <= 1 for x in rates):
        parser.error("every rate must be in (0, 1]")
    cfg = CgdConfig(tol=args.cgd_tol, max_iters=args.cgd_max_iters)
    study = experiments.cgd_study(args.n1, args.n2, args.n3, args.rank, rates,
                                  seed=args.seed, cfg=cfg, trials=args.trials,
                                  passes=args.passes)
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    path = out / "study.csv"
    with open(path, "w", newline="") as fh:
        fh.write("rate,dof_ratio,mean_cg,kappa_bound,theorem_bound,nrmse\n")
        for r in study.records:
            fh.write(",".join([
                _fmt(r.rate), _fmt(r.dof_ratio), _fmt(r.mean_cg),
                _fmt(r.kappa_bound), _fmt(r.theorem_bound), _fmt(r.nrmse),
            ]) + "\n")
    print(f"wrote {path} ({len(study.records)} rates)")
    return 0


def cmd_tsvd(args, parser):
    tensor = fileio.read_tensor(args.tensor)
    if np.iscomplexobj(tensor):
        parser.error("tsvd expects a real (dtype 0) tensor")
    factors = tsvd(tensor)
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    fileio.write_tensor(out / "u.tns", factors.u)
    fileio.write_tensor(out / "s.tns", factors.s)
    fileio.write_tensor(out / "v.tns", factors.v)
    norms = singular_tube_norms(factors)
    with open(out / "singular_tubes.csv", "w", newline="") as fh:
        fh.write("index,tube_norm\n")
        for i, x in enumerate(norms):
            fh.write(f"{i},{float(x)!r}\n")
    err = metrics.nrmse(reconstruct(factors), tensor) \
        if np.linalg.norm(tensor) > 0 else 0.0
    print(f"reconstruction nrmse: {err:.3e}")
    return 0


HANDLERS = {
    "gen": cmd_gen,
    "complete": cmd_complete,
    "track": cmd_track,
    "cgd-study": cmd_cgd_study,
    "tsvd": cmd_tsvd,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    limits = contextlib.nullcontext()
    if args.threads is not None:
        from threadpoolctl import threadpool_limits

        limits = threadpool_limits(limits=args.threads)
    try:
        with limits:
            return HANDLERS[args.command](args, parser)
    except (TubalError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
