"""Numeric integration of the vertical subsystem p' = -B_p grad H and
conservation checking along the resulting trajectories.

The control set is an ellipsoid {u : u^T M u <= 1}; the maximized
Hamiltonian is its support function H(h) = sqrt(h^T M^-1 h) restricted to
the first-layer coordinates h.  Integration uses the smooth energy form
H2 = (1/2) h^T M^-1 h, whose flow traces the same curves up to time
reparametrisation on level sets of H, with fixed-step classical RK4.

The structure constants of any word of top degree never pair with a
generator, so the top-degree coordinates have identically zero right-hand
side: they stay bitwise constant, which the integrator asserts symbolically
before running.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import linalg
from .casimirs import CasimirSet
from .errors import InputError, IntegrationError
from .lie import GradedAlgebra
from .orbits import classify_orbit
from .poly import Point, Polynomial

DRIFT_TOLERANCE = 1e-8
PERIOD_TOLERANCE = 1e-4
CONSTANCY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ControlSpec:
    """Ellipsoidal control set u^T M u <= 1 for a rational symmetric
    positive-definite matrix M."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = self.matrix
        n = len(m)
        if any(len(row) != n for row in m):
            raise InputError("control matrix must be square")
        for i in range(n):
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise InputError("control matrix must be symmetric")
        for k in range(1, n + 1):
            minor = [row[:k] for row in m[:k]]
            if linalg.det(minor) <= 0:
                raise InputError("control matrix must be positive definite")

    @classmethod
    def identity(cls, r: int) -> "ControlSpec":
        return cls(tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(r)) for i in range(r)
        ))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "ControlSpec":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def inverse(self) -> list[list[Fraction]]:
        n = self.dim
        aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
               for i, row in enumerate(self.matrix)]
        reduced, pivots = linalg.rref(aug, 2 * n)
        assert pivots == list(range(n))
        return [row[n:] for row in reduced]


def support_hamiltonian(spec: ControlSpec, h: Iterable[float]) -> tuple[float, np.ndarray]:
    """H(h) = sqrt(h^T M^-1 h), the support function of the ellipsoid, and
    its gradient; undefined at h = 0."""
    hv = np.asarray([float(x) for x in h], dtype=float)
    if hv.shape != (spec.dim,):
        raise InputError(f"expected {spec.dim} first-layer coordinates")
    minv = np.array([[float(x) for x in row] for row in spec.inverse()])
    w = minv @ hv
    value = math.sqrt(float(hv @ w))
    if value == 0.0:
        raise InputError("support function gradient undefined at h = 0; use the energy form")
    return value, w / value


def energy_hamiltonian(spec: ControlSpec, h: Iterable[float]) -> tuple[float, np.ndarray]:
    """H2(h) = (1/2) h^T M^-1 h and its (everywhere smooth) gradient."""
    hv = np.asarray([float(x) for x in h], dtype=float)
    if hv.shape != (spec.dim,):
        raise InputError(f"expected {spec.dim} first-layer coordinates")
    minv = np.array([[float(x) for x in row] for row in spec.inverse()])
    w = minv @ hv
    return 0.5 * float(hv @ w), w


@dataclass(frozen=True)
class Trajectory:
    alg: GradedAlgebra
    times: np.ndarray
    states: np.ndarray
    step_size: float
    method: str = "rk4"

    @property
    def names(self) -> tuple[str, ...]:
        return self.alg.names

    def first_layer(self) -> np.ndarray:
        return self.states[:, : self.alg.r]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", *self.names])
            for t, row in zip(self.times, self.states):
                writer.writerow([repr(float(t))] + [repr(float(x)) for x in row])


def _structure_tensor(alg: GradedAlgebra) -> np.ndarray:
    """S[a, b, k] with [x_a, x_b] = sum_k S[a, b, k] x_k, floats."""
    cached = alg.caches.get("structure_tensor")
    if cached is not None:
        return cached
    n = alg.dim
    tensor = np.zeros((n, n, n))
    for a in range(n):
        for b in range(n):
            for k, c in alg.bracket_indices(a, b):
                tensor[a, b, k] = float(c)
    alg.caches["structure_tensor"] = tensor
    return tensor


def integrate_vertical(
    alg: GradedAlgebra,
    spec: ControlSpec,
    p0: Point,
    T: float,
    dt: float,
) -> Trajectory:
    """Classical fixed-step RK4 for p' = -B_p grad H2 on [0, T]."""
    if spec.dim != alg.r:
        raise InputError("control matrix size must equal the rank")
    if p0.alg.key != alg.key:
        raise InputError("initial point belongs to a different algebra")
    if dt <= 0 or T <= 0:
        raise InputError("need positive T and dt")
    tensor = _structure_tensor(alg)
    n, r = alg.dim, alg.r
    top = alg.slice_of_degree(alg.s)
    # top-degree rows never pair with a generator: their RHS is identically 0
    assert not tensor[top.start:, :r, :].any()
    pair = tensor[:, :r, :]          # (n, r, n): B_{ab} for b in the first layer
    minv = np.array([[float(x) for x in row] for row in spec.inverse()])

    def rhs(state: np.ndarray) -> np.ndarray:
        grad = minv @ state[:r]
        b_part = pair @ state        # (n, r) block of B_p against the first layer
        return -(b_part @ grad)

    steps = int(round(T / dt))
    states = np.empty((steps + 1, n))
    states[0] = [float(x) for x in p0.values]
    times = np.linspace(0.0, steps * dt, steps + 1)
    y = states[0].copy()
    for i in range(steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise IntegrationError("state left the finite range", i)
        states[i + 1] = y
    return Trajectory(alg, times, states, dt)


def _compile_numeric(f: Polynomial):
    terms = [
        (float(c), [(v, e) for v, e in m])
        for m, c in f.terms.items()
    ]

    def evaluate(states: np.ndarray) -> np.ndarray:
        total = np.zeros(states.shape[0])
        for coeff, mono in terms:
            prod = np.full(states.shape[0], coeff)
            for v, e in mono:
                prod *= states[:, v] ** e
            total += prod
        return total

    return evaluate


@dataclass(frozen=True)
class ConservationReport:
    tolerance: float
    entries: tuple[dict, ...]

    @property
    def ok(self) -> bool:
        return all(e["pass"] for e in self.entries)

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "pass": self.ok,
            "functions": list(self.entries),
        }


def conservation_report(
    alg: GradedAlgebra,
    casimirs: CasimirSet,
    traj: Trajectory,
    *,
    spec: ControlSpec | None = None,
    tolerance: float = DRIFT_TOLERANCE,
) -> ConservationReport:
    """Max |f(p(t)) - f(p(0))| per Casimir function (and the energy form when
    a control spec is supplied), with pass/fail against the tolerance."""
    entries = []
    labels = (
        [f"linear_{i}" for i in range(len(casimirs.linear))]
        + [f"minor_{i}" for i in range(len(casimirs.minor))]
        + [f"quadratic_{i}" for i in range(len(casimirs.quadratic))]
    )
    for label, f in zip(labels, casimirs.functions):
        values = _compile_numeric(f)(traj.states)
        drift = np.abs(values - values[0])
        worst = int(np.argmax(drift))
        entries.append(
            {
                "name": label,
                "max_drift": float(drift[worst]),
                "argmax_index": worst,
                "pass": bool(drift[worst] < tolerance),
            }
        )
    if spec is not None:
        minv = np.array([[float(x) for x in row] for row in spec.inverse()])
        h = traj.first_layer()
        values = 0.5 * np.einsum("ti,ij,tj->t", h, minv, h)
        drift = np.abs(values - values[0])
        worst = int(np.argmax(drift))
        entries.append(
            {
                "name": "energy",
                "max_drift": float(drift[worst]),
                "argmax_index": worst,
                "pass": bool(drift[worst] < tolerance),
            }
        )
    return ConservationReport(tolerance, tuple(entries))


def classify_2d_orbit(alg: GradedAlgebra, p: Point) -> str:
    """"heisenberg" when the orbit through p is 2-dimensional with vanishing
    (g_1, g_2) block, "engel" when 2-dimensional with a nonzero block,
    "not_2d" otherwise."""
    report = classify_orbit(alg, p)
    if report.orbit_dim != 2:
        return "not_2d"
    from .bivector import block, evaluate_matrix

    values = evaluate_matrix(block(alg, 1, 2), p)
    zero_block = all(not x for row in values for x in row)
    return "heisenberg" if zero_block else "engel"


@dataclass(frozen=True)
class BehaviorReport:
    kind: str
    period: float | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "period": self.period}


def behavior_classify(
    traj: Trajectory,
    *,
    period_tolerance: float = PERIOD_TOLERANCE,
    constancy_tolerance: float = CONSTANCY_TOLERANCE,
) -> BehaviorReport:
    """Constant / periodic(period) / asymptotically_constant / undetermined,
    judged on the first-layer coordinates."""
    h = traj.first_layer()
    t = traj.times
    deviation = np.linalg.norm(h - h[0], axis=1)
    if float(deviation.max()) < constancy_tolerance:
        return BehaviorReport("constant")
    velocity = np.gradient(h, traj.step_size, axis=0)
    speed = np.linalg.norm(velocity, axis=1)
    # periodic: a local minimum of the deviation that interpolates below the
    # tolerance with matching velocity, after the trajectory has left p0
    scale = float(deviation.max())
    left = deviation > 0.5 * scale
    first_far = int(np.argmax(left)) if left.any() else 0
    if first_far:
        squared = deviation ** 2   # smooth at the return point, unlike |d|
        for i in range(first_far, len(t) - 1):
            if deviation[i] <= deviation[i - 1] and deviation[i] <= deviation[i + 1]:
                t_min, sq_min = _refine_minimum(t, squared, i)
                if math.sqrt(max(sq_min, 0.0)) < period_tolerance:
                    vel_match = np.linalg.norm(velocity[i] - velocity[0])
                    vnorm = max(np.linalg.norm(velocity[0]), 1e-30)
                    if vel_match / vnorm < 1e-2:
                        return BehaviorReport("periodic", t_min)
    quarter = len(t) // 4
    tail = speed[-quarter:] if quarter else speed
    slack = 1e-9 * max(float(speed.max()), 1.0)
    if len(tail) > 2 and np.all(np.diff(tail) <= slack) and tail[-1] < period_tolerance:
        return BehaviorReport("asymptotically_constant")
    return BehaviorReport("undetermined")


def _refine_minimum(t: np.ndarray, d: np.ndarray, j: int) -> tuple[float, float]:
    """Parabolic refinement of a sampled local minimum: (time, value)."""
    if 0 < j < len(t) - 1:
        y0, y1, y2 = d[j - 1], d[j], d[j + 1]
        denom = y0 - 2 * y1 + y2
        if denom > 0:
            shift = 0.5 * (y0 - y2) / denom
            value = y1 - 0.125 * (y0 - y2) ** 2 / denom
            return float(t[j] + shift * (t[1] - t[0])), float(max(value, 0.0))
    return float(t[j]), float(d[j])
