import numpy as np
import scipy.sparse.linalg as spla

from hemicontact.problem import DiscreteProblem, ProblemConfig
from hemicontact.solvers.direct_opt import ReducedObjective
from hemicontact.solvers.powell import PowellConfig, powell_minimize


def test_quadratic_bowl():
    a = np.array([1.0, 2.0])
    res = powell_minimize(lambda x: float(((x - a) ** 2).sum()), np.zeros(2))
    assert res.converged
    assert np.abs(res.x - a).max() < 1e-8


def test_kinked_one_dimensional():
    # f(x) = |x - 1| + 0.5 x^2 has 0 in its subdifferential at x = 1
    res = powell_minimize(lambda x: abs(x[0] - 1.0) + 0.5 * x[0] ** 2, np.zeros(1))
    assert res.converged
    assert abs(res.x[0] - 1.0) < 1e-6


def test_rosenbrock_like_coupling():
    def f(x):
        return float((1 - x[0]) ** 2 + 5.0 * (x[1] - x[0] ** 2) ** 2)
    res = powell_minimize(f, np.array([-1.0, 1.0]), PowellConfig(max_cycles=400))
    assert res.converged
    assert np.abs(res.x - 1.0).max() < 1e-5


def test_max_cycles_flags_not_converged():
    def f(x):
        return float((1 - x[0]) ** 2 + 100.0 * (x[1] - x[0] ** 2) ** 2)
    res = powell_minimize(f, np.array([-1.2, 1.0]), PowellConfig(max_cycles=2))
    assert not res.converged
    assert "max_cycles" in res.status


def test_line_searches_never_lose_ground():
    # every accepted point is at least as good as every earlier accepted one
    accepted = []
    base = lambda x: float(x @ x + abs(x[0] - 0.3))

    def f(x):
        return base(x)

    def spy_line_min(xc, d, step):
        from hemicontact.solvers.powell import bracket_golden
        alpha, val, nev = bracket_golden(lambda a: f(xc + a * d), step, 2.0, 60, 1e-10)
        accepted.append(val)
        return alpha, val, nev

    res = powell_minimize(f, np.array([2.0, -1.5, 0.7]), line_minimizer=spy_line_min)
    assert res.converged
    assert all(b <= a + 1e-14 for a, b in zip(accepted, accepted[1:]))
    assert abs(res.x[0] - 0.3) < 1e-6 and np.abs(res.x[1:]).max() < 1e-8


def test_pure_quadratic_matches_direct_solve():
    # boundary law switched off: condensed energy is a plain SPD quadratic
    config = ProblemConfig(f0=(-0.8, -0.8), h_tau=0.0, q_max=0.0, p_const=0.0,
                           h_denominator=8)
    prob = DiscreteProblem(config)
    red = prob.reduced
    obj = ReducedObjective(red, prob.law, prob.geometry.node_weights)
    res = powell_minimize(obj, np.zeros(obj.dim), line_minimizer=obj.line_minimizer)
    assert res.converged
    u_exact = spla.spsolve(prob.system.K.tocsc(), prob.system.F)
    from hemicontact.schur import recover_interior
    diff = prob.v_norm(recover_interior(red, res.x) - u_exact)
    assert diff <= 1e-6
    assert np.abs(res.x - np.linalg.solve(red.S, red.g)).max() < 1e-6


def test_optimality_certificate_directional_differences(e5_problem_16):
    # at the reported minimizer, forward differences along +-coordinates
    # must not descend faster than the tolerance
    prob = e5_problem_16
    obj = ReducedObjective(prob.reduced, prob.law, prob.geometry.node_weights)
    res = powell_minimize(obj, np.zeros(obj.dim), line_minimizer=obj.line_minimizer)
    assert res.converged
    step = 1e-7
    f0 = obj(res.x)
    for i in range(obj.dim):
        for sgn in (+1.0, -1.0):
            x = res.x.copy()
            x[i] += sgn * step
            assert (obj(x) - f0) / step >= -1e-5


def test_evaluation_counter_and_purity(e5_problem_16):
    prob = e5_problem_16
    obj = ReducedObjective(prob.reduced, prob.law, prob.geometry.node_weights)
    x = np.linspace(-0.1, 0.1, obj.dim)
    before = obj.n_evaluations
    v1, v2 = obj(x), obj(x)
    assert v1 == v2
    assert obj.n_evaluations == before + 2
