"""Problem definition, assembled problem bundle, solver results, and the
flat key=value configuration format used by the CLI.

Bundled example load cases (lam = eta = 4, fN = 0 in all of them):

    1  soft foundation: pressure grows with penetration (p_const = 10)
    2  bounded response: pressure capped at q_max = 0.7
    3  stick/slip split under a leftward push (h_tau = 0.5)
    4  near-rigid foundation (q_max = 10), rightward push

plus the model case used by the convergence study (key "e5").
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from hemicontact.assembly import (BodyLoad, DiscreteSystem, MaterialLaw,
                                  assemble_system, v_norm)
from hemicontact.laws import ContactLaw
from hemicontact.mesh import (ContactGeometry, DofMap, TriMesh, build_dof_map,
                              build_uniform_mesh, contact_geometry, contact_trace)
from hemicontact.schur import ReducedSystem, reduce_system

__all__ = [
    "ConfigError",
    "ProblemConfig",
    "DiscreteProblem",
    "SolveResult",
    "EXAMPLES",
    "E5",
    "METHODS",
]

METHODS = ("opt", "al", "pdas")


class ConfigError(ValueError):
    """Invalid problem configuration (CLI exit code 3)."""


@dataclass(frozen=True)
class ProblemConfig:
    """Full description of one solve: loads, laws, material, mesh, method,
    and per-method tuning knobs (kept as a raw option mapping)."""

    f0: tuple[float, float] = (0.0, 0.0)
    fN: tuple[float, float] = (0.0, 0.0)
    h_tau: float = 0.0
    q_max: float = 0.0
    p_const: float = 0.0
    lam: float = 4.0
    eta: float = 4.0
    h_denominator: int = 32
    method: str = "opt"
    seed: int = 12345
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}, expected one of {METHODS}")
        if self.h_denominator < 2:
            raise ConfigError(f"h_denominator must be >= 2, got {self.h_denominator}")
        try:
            ContactLaw(self.q_max, self.p_const, self.h_tau)
            MaterialLaw(self.lam, self.eta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def law(self) -> ContactLaw:
        return ContactLaw(q_max=self.q_max, p_const=self.p_const, h_tau=self.h_tau)

    @property
    def material(self) -> MaterialLaw:
        return MaterialLaw(lam=self.lam, eta=self.eta)

    @property
    def load(self) -> BodyLoad:
        return BodyLoad(f0=np.asarray(self.f0), fN=np.asarray(self.fN))

    def with_h(self, h_denominator: int) -> "ProblemConfig":
        return replace(self, h_denominator=h_denominator)

    def with_method(self, method: str) -> "ProblemConfig":
        return replace(self, method=method)

    def method_options(self, prefix: str) -> dict:
        """Options for one method block, e.g. prefix 'al' -> {'eps_init': ...}."""
        skip = len(prefix) + 1
        return {k[skip:]: v for k, v in self.options.items() if k.startswith(prefix + "_")}

    # -- flat key=value serialization ------------------------------------

    _SCALARS = {
        "f0_x": ("f0", 0), "f0_y": ("f0", 1),
        "fN_x": ("fN", 0), "fN_y": ("fN", 1),
    }
    _FIELDS = ("h_tau", "q_max", "p_const", "eta")

    @classmethod
    def parse(cls, text: str) -> "ProblemConfig":
        values: dict = {}
        options: dict = {}
        f0 = [0.0, 0.0]
        fN = [0.0, 0.0]
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            try:
                if key in cls._SCALARS:
                    name, idx = cls._SCALARS[key]
                    (f0 if name == "f0" else fN)[idx] = float(val)
                elif key in cls._FIELDS:
                    values[key] = float(val)
                elif key == "lambda":
                    values["lam"] = float(val)
                elif key == "h_denominator":
                    values["h_denominator"] = int(val)
                elif key == "seed":
                    values["seed"] = int(val)
                elif key == "method":
                    values["method"] = val
                elif key.startswith(("opt_", "al_", "pdas_")):
                    options[key] = val if key.endswith("_rule") else float(val)
                else:
                    raise ConfigError(f"line {lineno}: unknown key {key!r}")
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad value for {key!r}: {val!r}") from exc
        try:
            return cls(f0=tuple(f0), fN=tuple(fN), options=options, **values)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path) -> "ProblemConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        return cls.parse(path.read_text())

    def to_text(self) -> str:
        lines = [
            f"f0_x = {self.f0[0]!r}",
            f"f0_y = {self.f0[1]!r}",
            f"fN_x = {self.fN[0]!r}",
            f"fN_y = {self.fN[1]!r}",
            f"h_tau = {self.h_tau!r}",
            f"q_max = {self.q_max!r}",
            f"p_const = {self.p_const!r}",
            f"lambda = {self.lam!r}",
            f"eta = {self.eta!r}",
            f"h_denominator = {self.h_denominator}",
            f"method = {self.method}",
            f"seed = {self.seed}",
        ]
        lines += [f"{k} = {v}" for k, v in sorted(self.options.items())]
        return "\n".join(lines) + "\n"


#: bundled example load cases
EXAMPLES: dict[int, ProblemConfig] = {
    1: ProblemConfig(f0=(-0.5, -1.0), h_tau=0.1, q_max=0.1, p_const=10.0),
    2: ProblemConfig(f0=(-0.5, -1.0), h_tau=0.1, q_max=0.7, p_const=0.0),
    3: ProblemConfig(f0=(-0.5, -1.0), h_tau=0.5, q_max=0.5, p_const=0.0),
    4: ProblemConfig(f0=(0.5, -1.0), h_tau=0.1, q_max=10.0, p_const=0.0),
}

#: model case for the convergence study
E5 = ProblemConfig(f0=(-0.8, -0.8), h_tau=0.5, q_max=0.3, p_const=2.0)


class DiscreteProblem:
    """One configuration assembled on one mesh, with the condensed system
    built lazily.  Immutable once constructed; solvers share it freely."""

    def __init__(self, config: ProblemConfig, h_denominator: Optional[int] = None):
        if h_denominator is not None:
            config = config.with_h(h_denominator)
        self.config = config
        self.mesh: TriMesh = build_uniform_mesh(1.0 / config.h_denominator)
        self.dof_map: DofMap = build_dof_map(self.mesh)
        self.geometry: ContactGeometry = contact_geometry(self.mesh, self.dof_map)
        self.system: DiscreteSystem = assemble_system(
            self.mesh, self.dof_map, self.geometry, config.material, config.load)
        self._reduced: Optional[ReducedSystem] = None

    @property
    def law(self) -> ContactLaw:
        return self.config.law

    @property
    def reduced(self) -> ReducedSystem:
        if self._reduced is None:
            self._reduced = reduce_system(self.system)
        return self._reduced

    def v_norm(self, u: np.ndarray) -> float:
        return v_norm(self.system.M_V, u)

    def trace(self, u: np.ndarray) -> np.ndarray:
        return contact_trace(self.dof_map, u)


@dataclass
class SolveResult:
    """Common output of the three solvers.

    `u` is the free-DOF displacement vector; `trace` the per-contact-node
    (u_nu, u_taux) pairs; `tractions` the element-recovered
    (sigma_nu, sigma_taux).  Method-specific fields stay None elsewhere:
    multipliers (lam_nu, lam_taux arrays) for the multiplier method,
    active sets for the active-set method.
    """

    method: str
    u: np.ndarray
    converged: bool
    status: str
    iterations: int
    n_evaluations: int
    objective: Optional[float]
    residual_norm: Optional[float]
    trace: np.ndarray
    tractions: np.ndarray
    multipliers: Optional[tuple[np.ndarray, np.ndarray]] = None
    sets: Optional[object] = None
    history: list = field(default_factory=list)
    wall_time: float = 0.0
