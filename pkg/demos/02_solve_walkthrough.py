"""One full solver run, with the outer-iteration schedule laid out.

Generates a 60x200 instance with a planted 6-sparse vector, runs the
penalty solver at p = 0.5, and prints how the penalty weight grows, the
smoothing widths shrink, and the progress measures fall until all three
are below 1e-8.
"""

import numpy as np

from sparselp import GenSpec, gen_instance, kkt_property_report, replace_p, solve_l1

inst, x_hat, _ = gen_instance(GenSpec(m=60, n=200, s=6, delta=1e-3, seed=42))
report = solve_l1(replace_p(inst, 0.5))

print(f"60x200 instance, planted support {sorted(np.flatnonzero(x_hat))}")
print(f"solved in {report.outer_iters} outer rounds / "
      f"{report.inner_iters_total} inner steps ({report.wall_time:.2f}s)\n")

print("  k      lam        mu       eps      objective      eta_max   inner")
for r in report.trace:
    if r.k % 5 == 0 or r.k == report.outer_iters - 1:
        eta = max(r.eta1, r.eta2, r.eta3)
        print(f"{r.k:4d}  {r.lam:8.1e} {r.mu:9.1e} {r.eps:8.1e}"
              f"  {r.objective:13.9f} {eta:10.1e} {r.inner_iters:6d}")

print(f"\nstop: {report.stop_reason}")
print(f"support found: {sorted(report.support)}")
print(f"matches planted support: {sorted(report.support) == sorted(np.flatnonzero(x_hat))}")

props = kkt_property_report(inst, report.x_star)
print(f"\noptimal-point properties: nnz {props.nnz} = rank {props.rank_aj},"
      f" err1 {props.err1}, err2 {props.err2:.2e}")
print(f"infinity-norm sandwich: {props.lower_bound:.4f}"
      f" <= {props.inf_norm:.4f} <= {props.upper_bound:.4f}")
rel = np.linalg.norm(report.x_star - x_hat) / np.linalg.norm(x_hat)
print(f"recovery error: {rel:.2e}")
