"""The minibatch proximal incremental iteration with O(1)-amortized averaging.

One iteration draws a subset of s components, proxes each one at a shifted
point built from the gradient table, averages the prox outputs into the new
iterate, and refreshes the table entries using only prox outputs (the
resolvent identity recovers the gradients, so no gradient oracle is called
inside the loop). The running table average is maintained by the exact
two-term recurrence

    g_avg <- (n-s)/n * g_avg + s/(n*gamma) * (x_old - x_new),

which equals the true table mean in exact arithmetic; a periodic exact
recomputation bounds floating-point drift.
"""

import time
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidBatchSize,
    InvalidConstants,
    MissingProvidedGradients,
    ProxFailure,
)
from .prox import TOL_PROX
from .sampling import SplitMix64, sample_k_subset


@dataclass
class SolverConfig:
    """Run parameters.

    gamma may be the string "auto", which resolves to the balanced stepsize
    sqrt(s / (L mu n)) at run time. refresh_every=None disables the periodic
    exact recomputation of the table average. init_gradients picks the
    initial table: component gradients at x0, all zeros, or a user table.
    """

    s: int = 1
    gamma: float | str = "auto"
    max_iters: int = 1000
    seed: int = 0
    stop_dist_sq: float = 0.0
    trace_every: int = 1
    refresh_every: int | None = 1000
    init_gradients: str = "at_x0"
    tol_prox: float = TOL_PROX

    def validate(self, n):
        if not 1 <= self.s <= n:
            raise InvalidBatchSize(f"need 1 <= s <= n, got s={self.s}, n={n}")
        if self.gamma != "auto" and not self.gamma > 0:
            raise InvalidConstants(f"gamma must be > 0 or 'auto', got {self.gamma}")
        if self.max_iters < 0:
            raise InvalidConstants("max_iters must be >= 0")
        if self.trace_every < 1:
            raise InvalidConstants("trace_every must be >= 1")
        if self.refresh_every is not None and self.refresh_every < 1:
            raise InvalidConstants("refresh_every must be >= 1 or None")
        if self.init_gradients not in ("at_x0", "zeros", "provided"):
            raise InvalidConstants(f"unknown init_gradients {self.init_gradients!r}")

    def resolve_gamma(self, problem):
        if self.gamma == "auto":
            from .analysis import optimal_stepsize

            return optimal_stepsize(self.s, problem.n, problem.mu, problem.L)
        return float(self.gamma)


@dataclass
class SolverState:
    """Iterate, gradient table (one row per component), and its running mean."""

    t: int
    x: np.ndarray
    grad_table: np.ndarray
    g_avg: np.ndarray


@dataclass
class TraceRecord:
    """Per-iteration diagnostics: dist_sq and lyapunov need a known solution."""

    t: int
    dist_sq: float | None
    lyapunov: float | None
    table_drift: float
    wall_ns: int


def initialize(problem, config, x0, g0=None):
    """Build the t=0 state: iterate x0, gradient table per init_gradients."""
    x0 = problem.check_point(x0)
    n, d = problem.n, problem.dim
    if config.init_gradients == "at_x0":
        table = np.stack([comp.gradient(x0) for comp in problem.components])
    elif config.init_gradients == "zeros":
        table = np.zeros((n, d), dtype=x0.dtype)
    else:
        if g0 is None:
            raise MissingProvidedGradients("init_gradients='provided' needs g0")
        table = np.array(g0, dtype=x0.dtype)
        if table.shape != (n, d):
            raise DimensionMismatch(
                f"g0 has shape {table.shape}, expected ({n}, {d})"
            )
    return SolverState(t=0, x=x0.copy(), grad_table=table, g_avg=table.mean(axis=0))


def _prop1_coeffs(n, s):
    # Numerators (over denominator n) of the exact-mean recurrence; integers
    # so no dtype rounds them. Isolated so fault-injection tests can perturb
    # them.
    return n - s, s


def apply_subset_step(state, problem, gamma, indices0, tol_prox=TOL_PROX):
    """One deterministic iteration given the 0-based subset to activate.

    Pure: returns a fresh state, leaving the input untouched. The residual of
    every prox output is checked against tol_prox * (1 + ||z_i||); a breach
    raises ProxFailure naming the component.
    """
    idx = np.asarray(indices0, dtype=int)
    s = idx.shape[0]
    n = problem.n
    x_old, table, g_avg = state.x, state.grad_table, state.g_avg

    z = x_old[None, :] + gamma * (table[idx] - g_avg[None, :])
    z_norm = np.sqrt((z * z).sum(axis=1))
    outs = np.empty_like(z)
    for k in range(s):
        result = problem.components[idx[k]].prox(gamma, z[k])
        if not result.residual <= tol_prox * (1 + z_norm[k]):
            raise ProxFailure(int(idx[k]) + 1, float(result.residual))
        outs[k] = result.point

    new_table = table.copy()
    new_table[idx] = (z - outs) / gamma
    x_new = outs.mean(axis=0)  # idx is sorted: ascending-index reduction
    c_keep, c_move = _prop1_coeffs(n, s)
    # Integer coefficients and divisions in the array dtype: pre-rounding
    # s/(n*gamma) in float64 would freeze an absolute error at the iterate
    # scale into g_avg (the recurrence conserves g_avg - mean(table)).
    g_new = (c_keep * g_avg + c_move * ((x_old - x_new) / gamma)) / n
    return SolverState(t=state.t + 1, x=x_new, grad_table=new_table, g_avg=g_new)


def step(state, problem, config, rng, gamma=None):
    """Draw the iteration's subset, run one step, and maybe refresh g_avg."""
    if gamma is None:
        gamma = config.resolve_gamma(problem)
    sub = sample_k_subset(rng, problem.n, config.s, iteration=state.t)
    idx0 = np.asarray(sub.indices, dtype=int) - 1
    new = apply_subset_step(state, problem, gamma, idx0, config.tol_prox)
    if config.refresh_every is not None and new.t % config.refresh_every == 0:
        new = replace(new, g_avg=new.grad_table.mean(axis=0))
    return new


def table_drift(state):
    """||g_avg - exact table mean||: floating-point drift of the recurrence."""
    diff = state.g_avg - state.grad_table.mean(axis=0)
    return np.sqrt(diff @ diff)


def run(problem, config, x0, g0=None):
    """Iterate from x0 until max_iters or the distance threshold.

    Parameters
    ----------
    problem : FiniteSumProblem
    config : SolverConfig
        config.s, stepsize, budget, seed, trace cadence.
    x0 : ndarray
        Starting point; its dtype sets the working precision of the run.
    g0 : ndarray, optional
        n-by-d initial gradient table for init_gradients="provided".

    Returns
    -------
    (SolverState, list of TraceRecord)
        Final state and diagnostics recorded at t=0, every trace_every
        iterations, and the final iteration. dist_sq and lyapunov fields are
        filled only when the problem has a known solution.
    """
    config.validate(problem.n)
    gamma = config.resolve_gamma(problem)
    rng = SplitMix64(config.seed)
    state = initialize(problem, config, x0, g0)

    x_star = problem.known_solution
    if x_star is not None:
        from .analysis import LyapunovWeights

        x_star = np.asarray(x_star, dtype=state.x.dtype)
        grad_star = np.stack([c.gradient(x_star) for c in problem.components])
        weights = LyapunovWeights.from_constants(gamma, config.s, problem.mu, problem.L)

    def diag(st):
        if x_star is None:
            return None, None
        d = st.x - x_star
        dist_sq = d @ d
        e = st.grad_table - grad_star
        lyap = weights.w_x * dist_sq + weights.w_g * (e * e).sum()
        return dist_sq, lyap

    t_begin = time.perf_counter_ns()

    def record(st, dist_sq, lyap):
        records.append(
            TraceRecord(
                t=st.t,
                dist_sq=dist_sq,
                lyapunov=lyap,
                table_drift=table_drift(st),
                wall_ns=time.perf_counter_ns() - t_begin,
            )
        )

    records = []
    dist_sq, lyap = diag(state)
    record(state, dist_sq, lyap)
    while state.t < config.max_iters:
        state = step(state, problem, config, rng, gamma=gamma)
        dist_sq, lyap = diag(state)
        stop = (
            x_star is not None
            and config.stop_dist_sq > 0
            and dist_sq <= config.stop_dist_sq
        )
        if state.t % config.trace_every == 0 or state.t == config.max_iters or stop:
            record(state, dist_sq, lyap)
        if stop:
            break
    return state, records
