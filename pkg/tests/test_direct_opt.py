import numpy as np
import pytest

from hemicontact.problem import EXAMPLES, DiscreteProblem, ProblemConfig
from hemicontact.solvers.direct_opt import ReducedObjective, solve_direct
from hemicontact.harness import solve_at


@pytest.fixture(scope="module")
def objective16(e5_problem_16):
    prob = e5_problem_16
    return prob, ReducedObjective(prob.reduced, prob.law, prob.geometry.node_weights)


def test_objective_zero_point(objective16):
    _, obj = objective16
    assert obj(np.zeros(obj.dim)) == 0.0


def test_objective_quadratic_when_law_is_off():
    config = ProblemConfig(f0=(-0.8, -0.8), h_denominator=8)
    prob = DiscreteProblem(config)
    obj = ReducedObjective(prob.reduced, prob.law, prob.geometry.node_weights)
    u_star = np.linalg.solve(prob.reduced.S, prob.reduced.g)
    quad = 0.5 * u_star @ (prob.reduced.S @ u_star) - prob.reduced.g @ u_star
    assert obj(u_star) == pytest.approx(quad, rel=1e-12)


def test_objective_convex_along_segments(objective16, rng):
    _, obj = objective16
    for _ in range(1000):
        a = 0.1 * rng.standard_normal(obj.dim)
        b = 0.1 * rng.standard_normal(obj.dim)
        fa, fb, fm = obj(a), obj(b), obj(0.5 * (a + b))
        assert fm <= 0.5 * fa + 0.5 * fb + 1e-12 * max(1.0, abs(fa) + abs(fb))


def test_objective_dimension_check(objective16):
    _, obj = objective16
    with pytest.raises(ValueError):
        obj(np.zeros(obj.dim + 1))


def test_zero_load_gives_zero_solution():
    prob = DiscreteProblem(ProblemConfig(f0=(0.0, 0.0), q_max=0.3, p_const=2.0,
                                         h_tau=0.5, h_denominator=4))
    res = solve_direct(prob)
    assert res.converged
    assert np.abs(res.u).max() < 1e-10
    assert np.abs(res.tractions).max() < 1e-10


def test_warm_start_reaches_same_solution(e5_problem_8):
    prob = e5_problem_8
    cold = solve_direct(prob)
    warm = solve_direct(prob, warm_start=cold.u)
    assert warm.converged
    assert prob.v_norm(warm.u - cold.u) < 1e-7
    assert warm.n_evaluations < cold.n_evaluations


def test_bounded_foundation_response():
    # pressure cap q_max with no post-threshold stiffness: recovered
    # pressure stays within recovery error of the cap
    res, _ = solve_at(EXAMPLES[2], "opt", 16)
    assert res.converged
    pressure = -res.tractions[:, 0]
    assert pressure.max() <= 0.7 + 0.05


def test_reports_diagnostics(e5_problem_8):
    res = solve_direct(e5_problem_8)
    assert res.method == "opt"
    assert res.converged
    assert res.iterations >= 1
    assert res.n_evaluations > 0
    assert res.objective is not None
    assert res.trace.shape == (e5_problem_8.dof_map.n_c, 2)
