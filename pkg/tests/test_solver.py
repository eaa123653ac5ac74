import numpy as np
import pytest

from sparselp import (
    InfeasibleStart,
    InvalidParam,
    ProblemInstance,
    SolverConfig,
    TrivialInstance,
    replace_p,
    solve_l1,
    solve_l2,
)
from sparselp.solver import L2SmoothedPenalty, progress_measures, refine
from sparselp.smoothing import SmoothingParams


def test_progress_measures_oracle():
    inst = ProblemInstance(
        m=1, n=2, a=np.array([[1.0, 0.0]]), b=np.array([2.0]), sigma=0.5, p=0.5
    )
    x_prev = np.array([1.0, 0.0])
    x_next = np.array([1.0, 1.0])
    eta1, eta2, eta3 = progress_measures(x_next, x_prev, inst)
    assert eta1 == pytest.approx(1.0 / (1.0 + np.sqrt(2.0)), rel=1e-14)
    assert eta2 == pytest.approx(1.0 / 3.0, rel=1e-14)  # |2 - 1| / (1 + 2)
    assert eta3 == pytest.approx(0.5, rel=1e-14)  # |1 - 2| - 0.5 violation
    # inside the ball the violation clamps at zero
    assert progress_measures(np.array([1.8, 0.0]), x_prev, inst)[2] == 0.0


def test_refine():
    x = np.array([1.0, 1e-12, -1e-7, 0.5])
    out = refine(x, threshold=1e-8)
    np.testing.assert_array_equal(out, np.array([1.0, 0.0, -1e-7, 0.5]))
    np.testing.assert_array_equal(refine(np.zeros(3)), np.zeros(3))
    # idempotent
    np.testing.assert_array_equal(refine(out, threshold=1e-8), out)


def test_golden_solve_from_asymmetric_seed(golden):
    # the symmetric least-squares start sits on the ridge between the two
    # optimal supports and converges to a two-support saddle; any start
    # leaning toward one support recovers the true minimizer
    rep = solve_l1(golden, seed_x=np.array([3.0, 0.1, 0.0]))
    assert rep.stop_reason == "converged"
    assert len(rep.support) == 1
    assert rep.x_star[0] == pytest.approx(2.5, abs=1e-5)
    assert rep.l1_residual == pytest.approx(1.0, abs=1e-5)
    assert rep.objective == pytest.approx(np.sqrt(2.5), abs=1e-5)


def test_golden_solve_other_support(golden):
    rep = solve_l1(golden, seed_x=np.array([0.1, 3.0, 0.0]))
    assert rep.stop_reason == "converged"
    assert tuple(rep.support) == (1,)
    assert rep.x_star[1] == pytest.approx(2.5, abs=1e-5)


def test_desk_solution_quality(desk_solution):
    inst, x_hat, rep = desk_solution
    assert rep.stop_reason == "converged"
    assert len(rep.support) == 10
    err2 = inst.sigma - rep.l1_residual
    assert 0.0 <= err2 <= 1e-5
    recerr = np.linalg.norm(rep.x_star - x_hat) / np.linalg.norm(x_hat)
    assert recerr < 5e-3
    assert rep.eta1 < 1e-8 and rep.eta2 < 1e-8 and rep.eta3 < 1e-8


def test_trace_is_coherent(desk_solution):
    _, _, rep = desk_solution
    assert len(rep.trace) == rep.outer_iters
    assert sum(r.inner_iters for r in rep.trace) == rep.inner_iters_total
    ks = [r.k for r in rep.trace]
    assert ks == list(range(len(ks)))
    lams = [r.lam for r in rep.trace]
    assert all(b > a for a, b in zip(lams, lams[1:]))  # strictly growing
    mus = [r.mu for r in rep.trace]
    assert all(b < a for a, b in zip(mus, mus[1:]))
    # growth factors multiply out: lam_{k+1} = rho_k * lam_k
    for prev, nxt in zip(rep.trace, rep.trace[1:]):
        assert nxt.lam == pytest.approx(prev.lam * prev.rho, rel=1e-12)
    assert np.isnan(rep.trace[-1].rho)


def test_report_to_dict(desk_solution):
    _, _, rep = desk_solution
    d = rep.to_dict()
    assert d["nnz"] == len(rep.support)
    assert d["stop_reason"] == "converged"
    assert "trace" not in d
    assert len(d["x_star"]) == 500


def test_infeasible_seed_rejected(golden):
    with pytest.raises(InfeasibleStart):
        solve_l1(golden, seed_x=np.zeros(3))  # ||b||_1 = 6 > sigma = 1


def test_invalid_p_rejected(golden):
    with pytest.raises(InvalidParam):
        solve_l1(replace_p(golden, 1.0))
    with pytest.raises(InvalidParam):
        solve_l1(replace_p(golden, 0.0))


def test_trivial_instance_rejected():
    inst = ProblemInstance(
        m=1, n=2, a=np.array([[1.0, 1.0]]), b=np.array([0.5]), sigma=1.0, p=0.5
    )
    with pytest.raises(TrivialInstance):
        solve_l1(inst)


def test_bad_seed_still_anchored(golden):
    # a feasible but lousy seed must not beat the anchor guard: the run
    # still ends at the golden objective
    seed = np.array([3.0, 0.5, -0.5])  # residual 0 -> feasible, large power sum
    rep = solve_l1(golden, seed_x=seed)
    assert rep.stop_reason == "converged"
    assert rep.objective <= np.sqrt(2.5) + 1e-4


def test_outer_cap_reported(golden):
    cfg = SolverConfig(outer_iter_cap=3)
    rep = solve_l1(golden, cfg=cfg, seed_x=np.array([3.0, 0.1, 0.0]))
    assert rep.stop_reason == "outer_cap"
    assert rep.outer_iters == 3


def test_solve_l2_golden(golden):
    # l2 ball with the same radius; optimum for support {0}: x = 3 - 1/sqrt(2)
    rep = solve_l2(golden, seed_x=np.array([3.0, 0.1, 0.0]))
    assert rep.stop_reason == "converged"
    r = golden.residual(rep.x_star)
    assert np.linalg.norm(r) == pytest.approx(1.0, abs=1e-5)
    assert len(rep.support) == 1
    assert rep.x_star[0] == pytest.approx(3.0 - 1.0 / np.sqrt(2.0), abs=1e-4)


def test_l2_penalty_gradient(rng):
    inst = ProblemInstance(
        m=3,
        n=4,
        a=rng.standard_normal((3, 4)),
        b=rng.standard_normal(3) + 1.5,
        sigma=0.4,
        p=0.5,
    )
    sp = SmoothingParams(lam=2.0, mu=0.3, nu=0.3)
    pen = L2SmoothedPenalty(inst, sp, r2_cap=50.0)
    h = 1e-6
    for _ in range(40):
        x = rng.standard_normal(4)
        val, grad = pen.value_and_grad(x)
        assert val == pytest.approx(pen.value(x), rel=1e-14)
        for j in range(4):
            e = np.zeros(4)
            e[j] = h
            fd = (pen.value(x + e) - pen.value(x - e)) / (2 * h)
            assert grad[j] == pytest.approx(fd, rel=2e-5, abs=1e-6)


def test_seed_matches_default_anchor(desk_instance):
    # passing the least-squares anchor explicitly reproduces the default run
    from sparselp.linalg import least_squares_min_norm

    inst, _, _ = desk_instance
    inst = replace_p(inst, 0.5)
    seed = least_squares_min_norm(inst.a, inst.b)
    rep_a = solve_l1(inst)
    rep_b = solve_l1(inst, seed_x=seed)
    np.testing.assert_array_equal(rep_a.x_star, rep_b.x_star)
    assert rep_a.outer_iters == rep_b.outer_iters
