"""Solvers for static frictional contact of a 2D elastic body on a
nonmonotone foundation.

The body occupies the unit square, is clamped on its left edge, traction
loaded on top/right, and rests on a foundation along the bottom edge.  The
foundation responds through a nonsmooth normal law (free separation, a
bounded rigid range, then a linear flexible range) and a Tresca-type
friction law.  The discrete problem is solved by three independent
methods that are cross-validated against each other:

* direct nonsmooth minimization (Powell's conjugate directions),
* an augmented Lagrangian formulation with a semismooth Newton solver,
* a primal-dual active set strategy.

All three operate on the same piecewise-affine finite element
discretization condensed onto the contact boundary.
"""

from hemicontact.mesh import TriMesh, DofMap, ContactGeometry, build_uniform_mesh, build_dof_map
from hemicontact.problem import ProblemConfig, DiscreteProblem, SolveResult, EXAMPLES

__version__ = "0.1.0"

__all__ = [
    "TriMesh",
    "DofMap",
    "ContactGeometry",
    "build_uniform_mesh",
    "build_dof_map",
    "ProblemConfig",
    "DiscreteProblem",
    "SolveResult",
    "EXAMPLES",
    "__version__",
]
