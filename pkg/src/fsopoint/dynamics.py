"""Six degree-of-freedom platform vibration model.

Solves ``M q'' + C q' + K q = B F(t)`` with a fixed-step classical RK4 scheme.
Generalized coordinates follow :data:`DOF_NAMES`: three translations in
metres followed by three rotations in radians.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DivergenceError,
    IntegrationError,
    InvalidParameterError,
    UnsupportedConfigurationError,
)

DOF_NAMES = ("x", "y", "z", "roll", "pitch", "yaw")
DOF_UNITS = ("m", "m", "m", "rad", "rad", "rad")
N_DOF = 6
TRANSLATIONAL = slice(0, 3)
ROTATIONAL = slice(3, 6)

# Default rotational inertia of a sub-kilogram quadcopter, kg m^2.
DEFAULT_INERTIA = (0.01, 0.01, 0.02)
DEFAULT_DIVERGENCE_BOUND = 1e3

Forcing = Callable[[float], np.ndarray]


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SystemMatrices:
    M: np.ndarray
    C: np.ndarray
    K: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        for name in ("M", "C", "K", "B"):
            m = _frozen(getattr(self, name))
            if m.shape != (N_DOF, N_DOF):
                raise InvalidParameterError(f"{name} must be 6x6, got {m.shape}")
            if not np.all(np.isfinite(m)):
                raise InvalidParameterError(f"{name} has non-finite entries")
            object.__setattr__(self, name, m)
        d = np.diag(self.M)
        if np.any(d <= 0) or np.any(self.M != np.diag(d)):
            raise InvalidParameterError("M must be diagonal with positive entries")

    def first_order(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(A, G)`` with ``y' = A y + G F`` for ``y = (q, qdot)``."""
        minv = np.diag(1.0 / np.diag(self.M))
        A = np.zeros((2 * N_DOF, 2 * N_DOF))
        A[:N_DOF, N_DOF:] = np.eye(N_DOF)
        A[N_DOF:, :N_DOF] = -minv @ self.K
        A[N_DOF:, N_DOF:] = -minv @ self.C
        G = np.zeros((2 * N_DOF, N_DOF))
        G[N_DOF:, :] = minv @ self.B
        return A, G

    def energy(self, q, qdot) -> float:
        q = np.asarray(q, dtype=float)
        qdot = np.asarray(qdot, dtype=float)
        return 0.5 * float(qdot @ self.M @ qdot) + 0.5 * float(q @ self.K @ q)

    def static_deflection(self, force) -> np.ndarray:
        """Steady-state coordinates under a constant generalized force."""
        return np.linalg.solve(self.K, self.B @ np.asarray(force, dtype=float))


@dataclass(frozen=True)
class PlatformState:
    t: float
    q: np.ndarray
    qdot: np.ndarray

    def __post_init__(self):
        q = _frozen(self.q)
        qdot = _frozen(self.qdot)
        if q.shape != (N_DOF,) or qdot.shape != (N_DOF,):
            raise InvalidParameterError("q and qdot must be 6-vectors")
        if not (math.isfinite(self.t) and np.all(np.isfinite(q)) and np.all(np.isfinite(qdot))):
            raise IntegrationError("platform state has non-finite entries", t=self.t)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qdot", qdot)

    @classmethod
    def rest(cls, t: float = 0.0) -> "PlatformState":
        return cls(t, np.zeros(N_DOF), np.zeros(N_DOF))


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled platform motion.

    ``q`` and ``qdot`` are ``(n, 6)`` arrays; ``t[i] == t0 + i*dt`` exactly.
    """

    dt: float
    t: np.ndarray
    q: np.ndarray
    qdot: np.ndarray

    def __post_init__(self):
        for name in ("t", "q", "qdot"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    def __len__(self) -> int:
        return len(self.t)

    @property
    def states(self) -> list[PlatformState]:
        return [PlatformState(self.t[i], self.q[i], self.qdot[i]) for i in range(len(self))]

    def __getitem__(self, i) -> PlatformState:
        return PlatformState(self.t[i], self.q[i], self.qdot[i])


def build_system(
    mass_kg: float,
    inertia_kgm2: Sequence[float] = DEFAULT_INERTIA,
    k_trans: float = 1e3,
    k_rot: float = 1e3,
    damping_alpha: float = 0.002,
    input_matrix=None,
) -> SystemMatrices:
    """Assemble diagonal mass/stiffness, proportional damping ``C = alpha*K``.

    ``input_matrix`` defaults to the identity.
    """
    inertia = np.asarray(inertia_kgm2, dtype=float)
    problems = []
    if not mass_kg > 0:
        problems.append(f"mass_kg must be > 0 (got {mass_kg})")
    if inertia.shape != (3,) or not np.all(inertia > 0):
        problems.append(f"inertia_kgm2 must be three positive values (got {inertia_kgm2})")
    if not k_trans > 0:
        problems.append(f"k_trans must be > 0 (got {k_trans})")
    if not k_rot > 0:
        problems.append(f"k_rot must be > 0 (got {k_rot})")
    if not damping_alpha >= 0:
        problems.append(f"damping_alpha must be >= 0 (got {damping_alpha})")
    if problems:
        raise InvalidParameterError("; ".join(problems))

    M = np.diag(np.concatenate([[mass_kg] * 3, inertia]))
    K = np.diag([float(k_trans)] * 3 + [float(k_rot)] * 3)
    C = damping_alpha * K
    B = np.eye(N_DOF) if input_matrix is None else np.asarray(input_matrix, dtype=float).reshape(N_DOF, N_DOF)
    return SystemMatrices(M=M, C=C, K=K, B=B)


def natural_frequencies(system: SystemMatrices) -> np.ndarray:
    """Undamped per-DOF natural frequencies ``sqrt(K_ii / M_ii)`` in rad/s."""
    K = system.K
    if np.any(K != np.diag(np.diag(K))):
        raise UnsupportedConfigurationError("natural_frequencies requires a diagonal K")
    return np.sqrt(np.diag(K) / np.diag(system.M))


def _force_at(forcing, t: float) -> np.ndarray:
    f = np.asarray(forcing(t), dtype=float)
    if f.shape != (N_DOF,):
        raise IntegrationError(f"forcing returned shape {f.shape} at t={t!r}, expected (6,)", t=t)
    if not np.all(np.isfinite(f)):
        raise IntegrationError(f"non-finite forcing value at t={t!r}", t=t)
    return f


def _rk4(A, G, y, h, f0, fm, f1):
    k1 = A @ y + G @ f0
    k2 = A @ (y + 0.5 * h * k1) + G @ fm
    k3 = A @ (y + 0.5 * h * k2) + G @ fm
    k4 = A @ (y + h * k3) + G @ f1
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_step(system: SystemMatrices, state: PlatformState, dt: float, forcing: Forcing) -> PlatformState:
    if not dt > 0:
        raise InvalidParameterError(f"dt must be > 0 (got {dt})")
    A, G = system.first_order()
    t = state.t
    f0 = _force_at(forcing, t)
    fm = _force_at(forcing, t + 0.5 * dt)
    f1 = _force_at(forcing, t + dt)
    y = _rk4(A, G, np.concatenate([state.q, state.qdot]), dt, f0, fm, f1)
    if not np.all(np.isfinite(y)):
        raise IntegrationError(f"integration produced non-finite state at t={t + dt!r}", t=t + dt)
    return PlatformState(t + dt, y[:N_DOF], y[N_DOF:])


def n_steps(duration: float, dt: float) -> int:
    """Number of whole steps of size ``dt`` that fit in ``duration``."""
    # tolerate representation error such as 5 / (1/30) = 149.99999999999997
    return int(math.floor(duration / dt * (1.0 + 1e-12) + 1e-9))


def integrate(
    system: SystemMatrices,
    initial: PlatformState,
    forcing: Forcing,
    duration: float,
    dt: float,
    divergence_bound: float = DEFAULT_DIVERGENCE_BOUND,
) -> Trajectory:
    """Integrate from ``initial`` for ``duration`` seconds.

    Returns ``floor(duration/dt) + 1`` states. If ``forcing`` has a
    ``sample(times)`` method it is used to evaluate all stage times at once.

    Raises
    ------
    DivergenceError
        When any coordinate magnitude exceeds ``divergence_bound``.
    """
    if not dt > 0:
        raise InvalidParameterError(f"dt must be > 0 (got {dt})")
    if not duration >= dt:
        raise InvalidParameterError(f"duration must be >= dt (got duration={duration}, dt={dt})")
    n = n_steps(duration, dt)
    t0 = initial.t
    half = t0 + 0.5 * dt * np.arange(2 * n + 1)
    if hasattr(forcing, "sample"):
        F = np.asarray(forcing.sample(half), dtype=float)
        if F.shape != (2 * n + 1, N_DOF):
            raise IntegrationError(f"forcing.sample returned shape {F.shape}")
        bad = ~np.all(np.isfinite(F), axis=1)
        if bad.any():
            tb = float(half[np.argmax(bad)])
            raise IntegrationError(f"non-finite forcing value at t={tb!r}", t=tb)
    else:
        F = np.array([_force_at(forcing, float(s)) for s in half])

    A, G = system.first_order()
    GF = F @ G.T
    Y = np.empty((n + 1, 2 * N_DOF))
    y = np.concatenate([initial.q, initial.qdot])
    Y[0] = y
    h = float(dt)
    h2 = 0.5 * h
    for i in range(n):
        g0, gm, g1 = GF[2 * i], GF[2 * i + 1], GF[2 * i + 2]
        k1 = A @ y + g0
        k2 = A @ (y + h2 * k1) + gm
        k3 = A @ (y + h2 * k2) + gm
        k4 = A @ (y + h * k3) + g1
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        qmax = np.max(np.abs(y[:N_DOF]))
        if not qmax <= divergence_bound:
            t_fail = t0 + (i + 1) * h
            raise DivergenceError(
                f"state diverged at t={t_fail:.6g} s (|q| = {qmax:.3g} > {divergence_bound:g})", t=t_fail
            )
        Y[i + 1] = y
    t = t0 + h * np.arange(n + 1)
    return Trajectory(dt=h, t=t, q=Y[:, :N_DOF], qdot=Y[:, N_DOF:])
