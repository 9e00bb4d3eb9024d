import numpy as np
import pytest

from tubalstream import (
    DimensionMismatch,
    FsmEstimate,
    StreamSpec,
    ZeroReference,
    dynamic_tracking,
    fsm_tracking_error,
    init_random_fsm,
    nrmse,
    random_orthogonal_tensor,
    slice_nrmse_curve,
    tprod,
)
from tubalstream.metrics import MetricRecord, write_metrics_csv


def test_nrmse_examples():
    t = np.random.default_rng(0).standard_normal((4, 3, 2))
    assert nrmse(t, t) == 0.0
    assert nrmse(np.zeros_like(t), t) == pytest.approx(1.0)


def test_nrmse_linear_in_perturbation():
    g = np.random.default_rng(1)
    t = g.standard_normal((5, 4, 3))
    e = g.standard_normal((5, 4, 3))
    e /= np.linalg.norm(e)
    for delta in (1e-3, 1e-6):
        assert nrmse(t + delta * e, t) == pytest.approx(delta / np.linalg.norm(t), rel=1e-12)


def test_nrmse_zero_reference():
    with pytest.raises(ZeroReference):
        nrmse(np.ones((2, 2, 2)), np.zeros((2, 2, 2)))
    with pytest.raises(DimensionMismatch):
        nrmse(np.ones((2, 2, 2)), np.ones((2, 2, 3)))


def test_tracking_error_identical():
    fsm = init_random_fsm(8, 2, 4, seed=2)
    assert fsm_tracking_error(fsm, fsm) == 0.0


def test_tracking_error_rotation_invariant():
    fsm = init_random_fsm(10, 3, 5, seed=3)
    q = random_orthogonal_tensor(3, 5, seed=4)
    rotated = FsmEstimate.from_tensor(tprod(fsm.to_tensor(), q))
    assert fsm_tracking_error(rotated, fsm) <= 1e-10
    assert fsm_tracking_error(fsm, rotated) <= 1e-10


def test_tracking_error_orthogonal_vectors_closed_form():
    u = FsmEstimate(np.array([[[1.0], [0.0]]], dtype=complex), n3=1)
    v = FsmEstimate(np.array([[[0.0], [1.0]]], dtype=complex), n3=1)
    assert fsm_tracking_error(v, u) == pytest.approx(np.sqrt(2))


def test_tracking_error_dimension_mismatch():
    a = init_random_fsm(8, 2, 4, seed=5)
    b = init_random_fsm(9, 2, 4, seed=5)
    with pytest.raises(DimensionMismatch):
        fsm_tracking_error(a, b)


def test_slice_curve_perfect_and_zero():
    g = np.random.default_rng(6)
    truth = g.standard_normal((4, 5, 3))
    perfect = slice_nrmse_curve(truth.copy(), truth)
    assert all(r.nrmse_slice == 0 for r in perfect)
    zero = slice_nrmse_curve(np.zeros_like(truth), truth)
    assert all(r.nrmse_slice == pytest.approx(1.0) for r in zero)


def test_static_run_error_trends_down():
    spec = StreamSpec(n1=20, n3=6, r=2, T=200, sample_rate=0.8, change_period=0, seed=8)
    out = dynamic_tracking(spec)
    errs = np.array([r.fsm_error for r in out.records])
    assert np.median(errs[-20:]) < 1e-3 * np.median(errs[:20])


def test_dynamic_run_spikes_at_change_points():
    spec = StreamSpec(n1=20, n3=6, r=2, T=300, sample_rate=0.8, change_period=100, seed=7)
    out = dynamic_tracking(spec)
    errs = np.array([r.fsm_error for r in out.records])
    for boundary in (100, 200):
        assert errs[boundary] > 10 * errs[boundary - 1]
        assert errs[boundary:boundary + 100].min() < errs[boundary] / 10


def test_metrics_csv_format(tmp_path):
    recs = [
        MetricRecord(t=0, nrmse_slice=0.5, fsm_error=None, cg_iters=3, wall_ms=1.25),
        MetricRecord(t=1, nrmse_slice=None, fsm_error=0.125, cg_iters=0, wall_ms=None),
    ]
    p = tmp_path / "m.csv"
    write_metrics_csv(p, recs)
    lines = p.read_text().splitlines()
    assert lines[0] == "t,nrmse,fsm_error,cg_iters,wall_ms"
    assert lines[1] == "0,0.5,,3,"
    assert lines[2] == "1,,0.125,0,"
    write_metrics_csv(p, recs, include_timing=True)
    assert p.read_text().splitlines()[1] == "0,0.5,,3,1.25"
