from hemicontact.solvers.direct_opt import ReducedObjective, solve_direct
from hemicontact.solvers.powell import PowellConfig, PowellResult, powell_minimize
from hemicontact.solvers.newton import NewtonConfig, NewtonResult, semismooth_newton
from hemicontact.solvers.augmented_lagrangian import (ALConfig, MultiplierField,
                                                      al_residual, solve_al)
from hemicontact.solvers.pdas import (ActiveSets, PdasConfig, classify,
                                      solve_pdas, solve_subproblem)

__all__ = [
    "PowellConfig",
    "PowellResult",
    "powell_minimize",
    "ReducedObjective",
    "solve_direct",
    "NewtonConfig",
    "NewtonResult",
    "semismooth_newton",
    "ALConfig",
    "MultiplierField",
    "al_residual",
    "solve_al",
    "ActiveSets",
    "PdasConfig",
    "classify",
    "solve_subproblem",
    "solve_pdas",
]
