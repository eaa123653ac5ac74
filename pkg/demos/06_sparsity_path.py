"""How the exponent p shapes the solution's sparsity.

One instance, re-solved across a grid of exponents. Near p = 1 the objective
is almost the l1 norm and keeps extra small coordinates; pushing p toward 0
prunes them until the support settles at the planted sparsity and stays
there: the solution is insensitive to p once p is small enough.
"""

import numpy as np

from sparselp import GenSpec, gen_instance, replace_p, solve_l1

inst, x_hat, _ = gen_instance(GenSpec(m=60, n=200, s=6, delta=1e-3, seed=7))
scale = np.linalg.norm(x_hat)

print(f"60x200 instance, planted nnz = {np.count_nonzero(x_hat)}\n")
print("     p   nnz   recovery error")
for p in np.arange(0.95, 0.04, -0.1):
    report = solve_l1(replace_p(inst, round(float(p), 2)))
    err = np.linalg.norm(report.x_star - x_hat) / scale
    bar = "#" * len(report.support)
    print(f"  {p:4.2f}  {len(report.support):4d}   {err:8.2e}  {bar}")
