"""How the stepsize trades the two rate terms against each other.

The prox term falls as gamma grows while the sampling term rises; the
balanced stepsize sqrt(s/(L mu n)) sits near their crossing. The observed
contraction hugs the max of the two from below.
"""

import numpy as np

from pointsaga import (
    GeneratorSpec,
    SolverConfig,
    gen_quadratic,
    optimal_stepsize,
    run,
    theoretical_rate,
)

n, d, mu, L, s = 40, 8, 1.0, 10.0, 4
problem = gen_quadratic(GeneratorSpec("quadratic", n, d, mu, L, seed=7))
g_star = optimal_stepsize(s, n, mu, L)

print(f"balanced stepsize for s={s}: {g_star:.4f}\n")
print("   gamma    rho_prox  rho_sample     rho   observed")
for factor in (0.1, 0.3, 1.0, 3.0, 10.0):
    gamma = factor * g_star
    rep = theoretical_rate(gamma, s, n, mu, L)
    config = SolverConfig(s=s, gamma=gamma, max_iters=500, seed=1, trace_every=1)
    _, records = run(problem, config, np.zeros(d))
    psi = np.array([r.lyapunov for r in records])
    observed = (psi[-1] / psi[10]) ** (1.0 / (len(psi) - 11))
    marker = "  <- balanced" if factor == 1.0 else ""
    print(f"{gamma:8.4f}   {rep.rho_prox:7.4f}   {rep.rho_sample:8.4f}"
          f"  {rep.rho:7.4f}   {observed:7.4f}{marker}")
