import numpy as np
import pytest

from wnnm.cone import ProblemShape
from wnnm.errors import UsageError
from wnnm.linalg import WeightProfile, weighted_nuclear_norm
from wnnm.phase import (
    Cell,
    PhaseSweepResult,
    RecoveryInstance,
    SolverConfig,
    crossing_and_window,
    isotonic_check,
    make_instance,
    relative_error,
    solve_wnnm,
    sweep_phase,
)
from wnnm.sdim import SdimEstimate

SHAPE = ProblemShape(10, 10, 2)
ONES = WeightProfile.ones(2, 10)


def fake_result(ps, rates, trials=10, delta=15.0, c=1.0, shape=ProblemShape(5, 5, 1)):
    cells = tuple(Cell(p, trials, int(round(q * trials))) for p, q in zip(ps, rates))
    est = SdimEstimate(1.0, delta, 0.1, c, 10.0, 100)
    return PhaseSweepResult(shape, cells, est)


# --- instances ---------------------------------------------------------------

def test_instance_bookkeeping():
    inst = make_instance(ProblemShape(3, 4, 1), 7, seed=1)
    assert inst.x0.shape == (3, 4)
    assert inst.sensing.shape == (7, 12)
    assert inst.observations.shape == (7,)
    assert np.linalg.norm(inst.x0) == pytest.approx(1.0)
    assert np.linalg.matrix_rank(inst.x0) == 1
    assert np.array_equal(inst.sensing @ inst.x0.ravel(), inst.observations)


def test_instance_full_rank():
    inst = make_instance(ProblemShape(4, 5, 4), 3, seed=2)
    assert np.linalg.matrix_rank(inst.x0) == 4


def test_instance_deterministic_and_range_checked():
    a = make_instance(SHAPE, 30, 5)
    b = make_instance(SHAPE, 30, 5)
    assert np.array_equal(a.x0, b.x0) and np.array_equal(a.sensing, b.sensing)
    with pytest.raises(UsageError):
        make_instance(SHAPE, 0, 1)
    with pytest.raises(UsageError):
        make_instance(SHAPE, 101, 1)


# --- solver ----------------------------------------------------------------------

def test_solver_fully_determined():
    inst = make_instance(SHAPE, 100, 3)
    res = solve_wnnm(inst, ONES, SolverConfig())
    assert res.converged
    assert np.linalg.norm(res.x_hat - inst.x0) <= 1e-6


def test_solver_zero_observations():
    inst = make_instance(SHAPE, 40, 4)
    zero = RecoveryInstance(np.zeros((10, 10)), inst.sensing, np.zeros(40))
    res = solve_wnnm(zero, ONES, SolverConfig())
    assert res.converged
    assert np.linalg.norm(res.x_hat) == 0.0


def test_solver_recovers_above_transition():
    cfg = SolverConfig()
    wins = 0
    for seed in range(20):
        inst = make_instance(SHAPE, 90, 1000 + seed)
        res = solve_wnnm(inst, ONES, cfg)
        assert res.iters <= cfg.max_iters
        if res.converged:
            assert res.residual <= cfg.feas_tol
        wins += res.converged and relative_error(res.x_hat, inst.x0) <= cfg.success_tol
    assert wins >= 18


def test_solver_objective_not_above_truth():
    cfg = SolverConfig()
    for w in (ONES, WeightProfile((0.3, 0.3), 1.0, 10)):
        for seed in range(10):
            inst = make_instance(SHAPE, 80, 2000 + seed)
            res = solve_wnnm(inst, w, cfg)
            if res.converged and relative_error(res.x_hat, inst.x0) <= cfg.success_tol:
                assert weighted_nuclear_norm(res.x_hat, w) <= weighted_nuclear_norm(inst.x0, w) + 1e-6


def test_solver_non_convergence_is_flagged():
    inst = make_instance(SHAPE, 55, 6)
    res = solve_wnnm(inst, ONES, SolverConfig(max_iters=3))
    assert not res.converged and res.iters == 3


def test_solver_rejects_nonconvex_weights():
    inst = make_instance(ProblemShape(2, 2, 1), 3, 1)
    with pytest.raises(UsageError):
        solve_wnnm(inst, WeightProfile((0.9,), 0.1, 2, convex=False), SolverConfig())


def test_solver_config_validation():
    with pytest.raises(UsageError):
        SolverConfig(max_iters=0)
    with pytest.raises(UsageError):
        SolverConfig(feas_tol=-1)


# --- sweep ------------------------------------------------------------------------

def test_small_sweep_properties():
    shape = ProblemShape(4, 4, 1)
    w = WeightProfile.ones(1, 4)
    cfg = SolverConfig(max_iters=2000)
    a = sweep_phase(shape, w, [2, 6, 10, 14, 16], 8, cfg, master_seed=5, sdim_trials=2000)
    b = sweep_phase(shape, w, [2, 6, 10, 14, 16], 8, cfg, master_seed=5, sdim_trials=2000)
    assert a == b
    assert all(0 <= c.rate <= 1 and c.successes <= c.trials for c in a.cells)
    assert [c.p for c in a.cells] == [2, 6, 10, 14, 16]
    assert a.cells[-1].rate >= 0.95
    assert isotonic_check(a).passed
    assert a.predicted is not None and a.predicted.delta_hat > 0


def test_sweep_validation():
    cfg = SolverConfig()
    with pytest.raises(UsageError):
        sweep_phase(SHAPE, ONES, [20, 10], 2, cfg, 1)
    with pytest.raises(UsageError):
        sweep_phase(SHAPE, ONES, [10, 200], 2, cfg, 1)
    with pytest.raises(UsageError):
        sweep_phase(SHAPE, ONES, [10], 0, cfg, 1)


# --- crossing and isotonic check ---------------------------------------------------

def test_crossing_interpolates():
    res = fake_result([10, 20], [0.0, 1.0])
    cr = crossing_and_window(res, window_constant=1.0)
    assert cr.p50 == pytest.approx(15.0)
    assert cr.window_low == pytest.approx(10.0) and cr.window_high == pytest.approx(20.0)
    assert cr.consistent is True


def test_crossing_absent_when_all_succeed():
    cr = crossing_and_window(fake_result([10, 20, 30], [1.0, 1.0, 1.0]))
    assert cr.p50 is None and cr.consistent is None


def test_crossing_absent_when_all_fail():
    assert crossing_and_window(fake_result([10, 20], [0.0, 0.2])).p50 is None


def test_crossing_outside_window():
    cr = crossing_and_window(fake_result([10, 20, 30], [0.0, 0.2, 1.0], delta=10.0), 0.5)
    assert cr.p50 == pytest.approx(20 + 0.3 / 0.8 * 10)
    assert cr.consistent is False


def test_isotonic_flags_gross_violation():
    assert not isotonic_check(fake_result([1, 2, 3, 4], [0.0, 1.0, 0.0, 1.0], trials=50)).passed
    assert isotonic_check(fake_result([1, 2, 3, 4], [0.0, 0.3, 0.2, 1.0], trials=50)).passed
