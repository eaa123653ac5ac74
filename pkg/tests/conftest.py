import numpy as np
import pytest

from sparselp import (
    GenSpec,
    ProblemInstance,
    all_orthant_vertices,
    gen_instance,
    replace_p,
    solve_l1,
)


@pytest.fixture(scope="session")
def golden():
    """Tiny 2x3 instance whose solution set is known in closed form."""
    a = np.array([[1.0, 1.0, 1.0], [1.0, 1.0, -1.0]])
    b = np.array([3.0, 3.0])
    return ProblemInstance(m=2, n=3, a=a, b=b, sigma=1.0, p=0.5)


@pytest.fixture(scope="session")
def golden_vertices(golden):
    return all_orthant_vertices(golden)


# the union of orthant extreme points for the golden instance, derived by
# hand from the active-set systems of the two facet planes and the
# coordinate planes; frozen here as the reference list
GOLDEN_VERTEX_SET = {
    (3.5, 0.0, 0.5),
    (3.5, 0.0, -0.5),
    (0.0, 3.5, 0.5),
    (0.0, 3.5, -0.5),
    (2.5, 0.0, 0.5),
    (2.5, 0.0, -0.5),
    (0.0, 2.5, 0.5),
    (0.0, 2.5, -0.5),
    (3.5, 0.0, 0.0),
    (0.0, 3.5, 0.0),
    (2.5, 0.0, 0.0),
    (0.0, 2.5, 0.0),
}


@pytest.fixture(scope="session")
def desk_instance():
    spec = GenSpec(m=100, n=500, s=10, delta=1e-3, noise="gauss", seed=0)
    inst, x_hat, xi = gen_instance(spec)
    return inst, x_hat, xi


@pytest.fixture(scope="session")
def desk_solution(desk_instance):
    inst, x_hat, _ = desk_instance
    report = solve_l1(replace_p(inst, 0.5))
    return inst, x_hat, report


@pytest.fixture()
def rng():
    return np.random.default_rng(np.random.Philox(12345))
