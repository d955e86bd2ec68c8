import numpy as np
import pytest

from pointsaga import (
    GeneratorSpec,
    QuadraticComponent,
    FiniteSumProblem,
    SolverConfig,
    apply_subset_step,
    gen_quadratic,
    initialize,
    run,
    step,
    table_drift,
)
from pointsaga.errors import (
    DimensionMismatch,
    InvalidBatchSize,
    MissingProvidedGradients,
    ProxFailure,
)
from pointsaga.sampling import SplitMix64


def one_dim_problem():
    """n=1, f(x) = x^2/2, minimizer 0."""
    comp = QuadraticComponent(np.eye(1), np.ones(1), np.zeros(1))
    return FiniteSumProblem((comp,), 1.0, 1.0, 1, known_solution=np.zeros(1))


def quad_problem(n=10, d=4, seed=31):
    return gen_quadratic(GeneratorSpec("quadratic", n, d, 1.0, 10.0, seed=seed))


# --- initialize ----------------------------------------------------------------


def test_initialize_at_x0():
    problem = one_dim_problem()
    state = initialize(problem, SolverConfig(s=1), np.array([2.0]))
    assert np.array_equal(state.grad_table, np.array([[2.0]]))
    assert np.array_equal(state.g_avg, np.array([2.0]))
    assert state.t == 0


def test_initialize_zeros():
    problem = quad_problem()
    cfg = SolverConfig(s=2, init_gradients="zeros")
    state = initialize(problem, cfg, np.ones(4))
    assert np.array_equal(state.g_avg, np.zeros(4))
    assert np.array_equal(state.grad_table, np.zeros((10, 4)))


def test_initialize_provided_zeros_matches_zeros_mode():
    problem = quad_problem()
    a = initialize(problem, SolverConfig(s=2, init_gradients="zeros"), np.ones(4))
    b = initialize(
        problem,
        SolverConfig(s=2, init_gradients="provided"),
        np.ones(4),
        g0=np.zeros((10, 4)),
    )
    assert np.array_equal(a.grad_table, b.grad_table)
    assert np.array_equal(a.g_avg, b.g_avg)


def test_initialize_provided_requires_table():
    problem = quad_problem()
    with pytest.raises(MissingProvidedGradients):
        initialize(problem, SolverConfig(s=1, init_gradients="provided"), np.ones(4))
    with pytest.raises(DimensionMismatch):
        initialize(
            problem,
            SolverConfig(s=1, init_gradients="provided"),
            np.ones(4),
            g0=np.zeros((3, 4)),
        )


# --- hand-traced steps ----------------------------------------------------------


def test_hand_traced_first_step():
    # z = 2, prox -> 1, table entry (2-1)/1 = 1, avg via the recurrence = 1.
    problem = one_dim_problem()
    cfg = SolverConfig(s=1, gamma=1.0, init_gradients="zeros")
    state = initialize(problem, cfg, np.array([2.0]))
    state = apply_subset_step(state, problem, 1.0, np.array([0]))
    assert state.x[0] == 1.0
    assert state.grad_table[0, 0] == 1.0
    assert state.g_avg[0] == 1.0


def test_hand_traced_second_step():
    problem = one_dim_problem()
    cfg = SolverConfig(s=1, gamma=1.0, init_gradients="zeros")
    state = initialize(problem, cfg, np.array([2.0]))
    state = apply_subset_step(state, problem, 1.0, np.array([0]))
    state = apply_subset_step(state, problem, 1.0, np.array([0]))
    assert state.x[0] == 0.5
    assert state.grad_table[0, 0] == 0.5
    assert state.g_avg[0] == 0.5


# --- run ------------------------------------------------------------------------


def test_run_zero_iterations():
    problem = one_dim_problem()
    cfg = SolverConfig(s=1, gamma=1.0, max_iters=0, init_gradients="zeros")
    state, records = run(problem, cfg, np.array([2.0]))
    assert state.t == 0
    assert len(records) == 1
    assert records[0].t == 0


def test_run_geometric_trajectory():
    # x^t = 2^(1-t), so dist_sq at t=30 is 4 * (1/2)^60.
    problem = one_dim_problem()
    cfg = SolverConfig(s=1, gamma=1.0, max_iters=30, init_gradients="zeros")
    state, records = run(problem, cfg, np.array([2.0]))
    expect = 4.0 * 0.5**60
    assert records[-1].t == 30
    assert abs(records[-1].dist_sq - expect) <= 1e-12 * expect


def test_run_stop_threshold():
    # Oracle: first t with 4 * 4^-t <= 1e-16, found by direct scan.
    t_expect = 0
    while 4.0 * 4.0 ** (-t_expect) > 1e-16:
        t_expect += 1
    assert t_expect == 28
    problem = one_dim_problem()
    cfg = SolverConfig(
        s=1, gamma=1.0, max_iters=100, stop_dist_sq=1e-16, init_gradients="zeros"
    )
    state, records = run(problem, cfg, np.array([2.0]))
    assert state.t == t_expect
    assert records[-1].dist_sq <= 1e-16


def test_trace_cadence():
    problem = quad_problem()
    cfg = SolverConfig(s=2, gamma=0.1, max_iters=205, trace_every=10, seed=5)
    _, records = run(problem, cfg, np.zeros(4))
    expect_ts = sorted({0, *range(10, 206, 10), 205})
    assert [r.t for r in records] == expect_ts


def test_bitwise_reproducibility():
    problem = quad_problem()
    cfg = SolverConfig(s=3, gamma=0.2, max_iters=50, seed=77)
    s1, _ = run(problem, cfg, np.zeros(4))
    s2, _ = run(problem, cfg, np.zeros(4))
    assert np.array_equal(s1.x, s2.x)
    assert np.array_equal(s1.grad_table, s2.grad_table)
    assert np.array_equal(s1.g_avg, s2.g_avg)


def test_full_batch_ignores_seed():
    problem = quad_problem()
    outs = []
    for seed in (0, 123456):
        cfg = SolverConfig(s=10, gamma=0.3, max_iters=80, seed=seed)
        state, _ = run(problem, cfg, np.zeros(4))
        outs.append(state)
    assert np.array_equal(outs[0].x, outs[1].x)
    assert np.array_equal(outs[0].grad_table, outs[1].grad_table)


# --- invariants -----------------------------------------------------------------


def test_table_drift_zero_after_initialize():
    problem = quad_problem()
    state = initialize(problem, SolverConfig(s=1), np.zeros(4))
    assert table_drift(state) == 0.0


def test_table_drift_stays_small_without_refresh():
    problem = gen_quadratic(GeneratorSpec("quadratic", 50, 10, 1.0, 10.0, seed=11))
    cfg = SolverConfig(
        s=5, gamma="auto", max_iters=2000, seed=3, trace_every=2000,
        refresh_every=None,
    )
    state, _ = run(problem, cfg, np.zeros(10))
    assert table_drift(state) <= 1e-10 * (1 + np.linalg.norm(state.g_avg))


def test_table_drift_zero_at_refresh_boundary():
    problem = quad_problem()
    cfg = SolverConfig(s=2, gamma=0.1, max_iters=50, seed=1, refresh_every=50)
    state, _ = run(problem, cfg, np.zeros(4))
    assert table_drift(state) == 0.0


def test_gradient_identity_for_updated_entries():
    # Updated table rows equal grad f_i at the prox output, to tol_prox/gamma;
    # the prox output is recovered from x_i = z_i - gamma * g_i.
    problem = quad_problem()
    gamma = 0.25
    cfg = SolverConfig(s=4, gamma=gamma, seed=9)
    state = initialize(problem, cfg, np.zeros(4))
    rng = SplitMix64(3)
    for _ in range(10):
        before = state
        state = step(before, problem, cfg, rng, gamma=gamma)
        changed = np.nonzero(
            np.any(state.grad_table != before.grad_table, axis=1)
        )[0]
        assert len(changed) >= 1
        for i in changed:
            z_i = before.x + gamma * (before.grad_table[i] - before.g_avg)
            x_i = z_i - gamma * state.grad_table[i]
            g_err = state.grad_table[i] - problem.components[i].gradient(x_i)
            assert np.linalg.norm(g_err) <= cfg.tol_prox / gamma


def test_fixed_point_is_stationary():
    problem = quad_problem()
    x_star = problem.known_solution
    table = np.stack([c.gradient(x_star) for c in problem.components])
    state = initialize(
        problem, SolverConfig(s=10, init_gradients="provided"), x_star, g0=table
    )
    nxt = apply_subset_step(state, problem, 0.3, np.arange(10))
    assert np.linalg.norm(nxt.x - x_star) <= 1e-10
    assert np.abs(nxt.grad_table - table).max() <= 1e-9


def test_prox_failure_names_component():
    problem = quad_problem()
    cfg = SolverConfig(s=2, gamma=0.1, max_iters=5, seed=2, tol_prox=1e-30)
    with pytest.raises(ProxFailure) as err:
        run(problem, cfg, np.ones(4) * 100)
    assert 1 <= err.value.index <= 10


def test_invalid_batch_size_rejected():
    problem = quad_problem()
    with pytest.raises(InvalidBatchSize):
        run(problem, SolverConfig(s=11, gamma=0.1, max_iters=1), np.zeros(4))
