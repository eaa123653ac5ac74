"""Domain types, validation, and instance file I/O.

A problem instance is the data (A, b, sigma, p) of

    minimize    sum_i |x_i|^p        (0 < p <= 1, or p = 0 for the oracle)
    subject to  ||A x - b||_1 <= sigma

with A an m-by-n dense matrix.  The blanket assumption ||b|| > sigma rules
out x = 0 being feasible.  Instances are immutable after construction; the
arrays are marked read-only so they can be shared freely.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NonFinite,
    ParseError,
    TrivialInstance,
)

FILE_FORMAT_VERSION = 1


def _frozen_array(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if shape is not None:
        arr = arr.reshape(shape)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ProblemInstance:
    """Immutable problem data.

    Parameters
    ----------
    m, n : int
        Number of rows and columns of ``a``.
    a : array_like
        Measurement matrix, shape (m, n) or flat of length m*n (row-major).
    b : array_like
        Right-hand side, length m.
    sigma : float
        Radius of the residual ball, >= 0.
    p : float
        Exponent of the objective.  Solvers require 0 < p < 1; the exact
        oracle additionally understands p = 0.
    """

    m: int
    n: int
    a: np.ndarray
    b: np.ndarray
    sigma: float
    p: float = 0.5

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.float64)
        if a.ndim == 1:
            if self.m * self.n != a.size:
                raise DimensionMismatch(
                    f"flat a has {a.size} entries, expected m*n = {self.m * self.n}"
                )
            a = a.reshape(self.m, self.n)
        elif a.shape != (self.m, self.n):
            raise DimensionMismatch(
                f"a has shape {a.shape}, expected {(self.m, self.n)}"
            )
        b = np.asarray(self.b, dtype=np.float64)
        if b.shape != (self.m,):
            raise DimensionMismatch(f"b has shape {b.shape}, expected ({self.m},)")
        object.__setattr__(self, "a", _frozen_array(a, (self.m, self.n)))
        object.__setattr__(self, "b", _frozen_array(b, (self.m,)))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "p", float(self.p))

    def residual(self, x) -> np.ndarray:
        return self.a @ np.asarray(x, dtype=np.float64) - self.b


def validate_instance(inst: ProblemInstance, q: float = 1.0) -> None:
    """Check an instance against the model's standing assumptions.

    Raises DimensionMismatch, NonFinite, or TrivialInstance.  ``q`` selects
    the residual norm used for the triviality test (1 for the l1 ball,
    2 for the l2 variant).
    """
    from .linalg import lq_norm

    if inst.m < 1 or inst.n < 1:
        raise DimensionMismatch(f"need m >= 1 and n >= 1, got m={inst.m}, n={inst.n}")
    if inst.a.shape != (inst.m, inst.n):
        raise DimensionMismatch(
            f"a has shape {inst.a.shape}, expected {(inst.m, inst.n)}"
        )
    if inst.b.shape != (inst.m,):
        raise DimensionMismatch(f"b has length {inst.b.shape[0]}, expected {inst.m}")
    if not (np.isfinite(inst.a).all() and np.isfinite(inst.b).all()):
        raise NonFinite("instance data contains nan or inf")
    if not np.isfinite(inst.sigma) or inst.sigma < 0:
        raise NonFinite(f"sigma must be finite and >= 0, got {inst.sigma}")
    if lq_norm(inst.b, q) <= inst.sigma:
        raise TrivialInstance(
            f"||b||_{q} = {lq_norm(inst.b, q)} <= sigma = {inst.sigma}; "
            "x = 0 is already feasible"
        )


def read_instance(path) -> ProblemInstance:
    """Load an instance from a JSON file written by write_instance."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: expected a JSON object at top level")
    for key in ("format", "m", "n", "a", "b", "sigma", "p"):
        if key not in raw:
            raise ParseError(f"{path}: missing field '{key}'")
    if raw["format"] != FILE_FORMAT_VERSION:
        raise ParseError(
            f"{path}: unsupported format {raw['format']!r}, "
            f"expected {FILE_FORMAT_VERSION}"
        )
    try:
        inst = ProblemInstance(
            m=int(raw["m"]),
            n=int(raw["n"]),
            a=raw["a"],
            b=raw["b"],
            sigma=raw["sigma"],
            p=raw["p"],
        )
    except DimensionMismatch:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: bad field value ({exc})") from exc
    return inst


def write_instance(inst: ProblemInstance, path) -> None:
    """Write an instance as JSON.

    Floats are serialized with Python's shortest round-trip repr, so a
    read_instance of the file reproduces every scalar bit for bit.
    """
    payload = {
        "format": FILE_FORMAT_VERSION,
        "m": inst.m,
        "n": inst.n,
        "a": [float(v) for v in inst.a.ravel()],
        "b": [float(v) for v in inst.b],
        "sigma": float(inst.sigma),
        "p": float(inst.p),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


@dataclass(frozen=True)
class SupportSet:
    """Sorted tuple of indices of (exactly) nonzero coordinates."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if len(set(idx)) != len(idx):
            raise ValueError("duplicate support indices")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def from_vector(cls, x) -> "SupportSet":
        x = np.asarray(x)
        return cls(tuple(np.flatnonzero(x != 0.0)))

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


def support_indices(x) -> np.ndarray:
    """Indices of exactly nonzero entries (use after refine())."""
    return np.flatnonzero(np.asarray(x) != 0.0)


@dataclass(frozen=True)
class NpgParams:
    """Tuning constants of the inner nonmonotone proximal-gradient loop."""

    l_min: float = 1e-6
    l_max_formula_enabled: bool = True
    tau: float = 2.0
    c: float = 1e-4
    memory: int = 2
    iter_cap: int = 1000


@dataclass(frozen=True)
class SolverConfig:
    """Outer-loop schedule and tolerances of the penalty solver.

    The penalty weight grows by rho each outer iteration while both
    smoothing widths shrink by 1/rho; rho is rho_slow once all progress
    measures fall below eta_switch and rho_fast before that.
    """

    lambda0: float = 1.0
    mu0: float = 1.0
    nu0: float = 1.0
    eps0: float = 1e-3
    rho_fast: float = 2.0
    rho_slow: float = 1.2
    eta_switch: float = 1e-2
    outer_tol: float = 1e-8
    eps_floor: float = 1e-8
    refine_threshold: float = 1e-8
    outer_iter_cap: int = 500
    npg: NpgParams = field(default_factory=NpgParams)


@dataclass(frozen=True)
class OuterRecord:
    """One row of the outer-iteration trace."""

    k: int
    lam: float
    mu: float
    nu: float
    eps: float
    objective: float
    eta1: float
    eta2: float
    eta3: float
    inner_iters: int
    rho: float  # growth factor applied after this iteration (nan on the last)


@dataclass(frozen=True)
class SolveReport:
    """Result of a full penalty-solver run."""

    x_star: np.ndarray
    objective: float
    support: SupportSet
    l1_residual: float
    eta1: float
    eta2: float
    eta3: float
    outer_iters: int
    inner_iters_total: int
    wall_time: float
    stop_reason: str  # "converged" or "outer_cap"
    q: float
    trace: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "x_star", _frozen_array(self.x_star))
        object.__setattr__(self, "trace", tuple(self.trace))

    def to_dict(self) -> dict:
        return {
            "x_star": [float(v) for v in self.x_star],
            "objective": self.objective,
            "support": list(self.support),
            "nnz": len(self.support),
            "l1_residual": self.l1_residual,
            "eta1": self.eta1,
            "eta2": self.eta2,
            "eta3": self.eta3,
            "outer_iters": self.outer_iters,
            "inner_iters_total": self.inner_iters_total,
            "wall_time": self.wall_time,
            "stop_reason": self.stop_reason,
            "q": self.q,
        }


def replace_p(inst: ProblemInstance, p: float) -> ProblemInstance:
    """Copy of an instance with a different objective exponent."""
    return dataclasses.replace(inst, p=float(p))
