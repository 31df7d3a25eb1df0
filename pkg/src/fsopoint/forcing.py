"""Generalized force histories for the platform model.

Two sources are provided: a deterministic propeller model (mean thrust plus a
blade-pass ripple) and a seeded stochastic wind model (mean wind plus
first-order low-pass filtered Gaussian gusts).
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.signal import lfilter

from .errors import InvalidParameterError

G_ACCEL = 9.81
THRUST_AXIS = 1  # y, the gravity path

SCENARIOS = ("calm", "typical", "turbulent", "unidirectional-x", "unidirectional-y", "unidirectional-z")
SCENARIO_SPEED = {
    "calm": 0.5,
    "typical": 5.0,
    "turbulent": 30.0,
    "unidirectional-x": 5.0,
    "unidirectional-y": 5.0,
    "unidirectional-z": 5.0,
}
WIND_MODES = ("as-given", "quadratic")

_RESULTANT = np.ones(3) / math.sqrt(3.0)
_AXIS = {"x": 0, "y": 1, "z": 2}


class ForcingFunction:
    """Map from time (s) to a 6-vector of generalized forces.

    Subclasses implement :meth:`sample`, a vectorized evaluation returning an
    ``(n, 6)`` array; calling the object evaluates one instant.
    """

    seed: Optional[int] = None

    def sample(self, times) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t: float) -> np.ndarray:
        return self.sample(np.array([float(t)]))[0]

    def __add__(self, other: "ForcingFunction") -> "ForcingFunction":
        return SumForcing((self, other))

    def __mul__(self, a: float) -> "ForcingFunction":
        return ScaledForcing(self, float(a))

    __rmul__ = __mul__


class ConstantForcing(ForcingFunction):
    def __init__(self, value):
        self.value = np.asarray(value, dtype=float).reshape(6)

    def sample(self, times) -> np.ndarray:
        return np.tile(self.value, (len(np.atleast_1d(times)), 1))


def zero_forcing() -> ConstantForcing:
    return ConstantForcing(np.zeros(6))


class SumForcing(ForcingFunction):
    def __init__(self, parts: Sequence[ForcingFunction]):
        self.parts = tuple(parts)

    def sample(self, times) -> np.ndarray:
        times = np.atleast_1d(np.asarray(times, dtype=float))
        out = np.zeros((len(times), 6))
        for p in self.parts:
            out = out + p.sample(times)
        return out


class ScaledForcing(ForcingFunction):
    def __init__(self, base: ForcingFunction, scale: float):
        self.base = base
        self.scale = scale

    def sample(self, times) -> np.ndarray:
        return self.scale * self.base.sample(times)


# ---------------------------------------------------------------- propeller


@dataclass(frozen=True)
class PropellerParams:
    m_hap: float = 0.7
    b_drag: float = 0.0
    v_hap: float = 0.0
    a_hap: tuple = (0.0, 0.0, 0.0)
    hover: bool = True
    ripple_fraction: float = 0.05
    blade_pass_hz: float = 100.0
    torque_arm_m: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "a_hap", tuple(float(v) for v in self.a_hap))
        problems = []
        if not self.m_hap > 0:
            problems.append(f"m_hap must be > 0 (got {self.m_hap})")
        if len(self.a_hap) != 3:
            problems.append("a_hap must have three components")
        if not 0 <= self.ripple_fraction <= 1:
            problems.append(f"ripple_fraction must be in [0, 1] (got {self.ripple_fraction})")
        if not self.blade_pass_hz > 0:
            problems.append(f"blade_pass_hz must be > 0 (got {self.blade_pass_hz})")
        if not self.b_drag >= 0:
            problems.append(f"b_drag must be >= 0 (got {self.b_drag})")
        if not self.torque_arm_m >= 0:
            problems.append(f"torque_arm_m must be >= 0 (got {self.torque_arm_m})")
        if problems:
            raise InvalidParameterError("; ".join(problems))


def propeller_force_mean(p: PropellerParams) -> np.ndarray:
    """Mean propeller force ``m*a - b*v**2`` along the thrust axis, N.

    In hover mode the lift ``m*g`` is added along the thrust axis.
    """
    axis = np.zeros(3)
    axis[THRUST_AXIS] = 1.0
    f = p.m_hap * np.asarray(p.a_hap) - p.b_drag * p.v_hap**2 * axis
    if p.hover:
        f = f + p.m_hap * G_ACCEL * axis
    return f


class PropellerForcing(ForcingFunction):
    def __init__(self, params: PropellerParams):
        self.params = params
        self.mean = propeller_force_mean(params)
        self.ripple_amplitude = params.ripple_fraction * float(np.linalg.norm(self.mean))

    def sample(self, times) -> np.ndarray:
        p = self.params
        times = np.atleast_1d(np.asarray(times, dtype=float))
        ripple = self.ripple_amplitude * np.sin(2.0 * math.pi * p.blade_pass_hz * times)
        out = np.zeros((len(times), 6))
        out[:, :3] = self.mean
        out[:, THRUST_AXIS] += ripple
        out[:, 3:] = (ripple * p.torque_arm_m)[:, None]
        return out


def propeller_forcing(p: PropellerParams) -> PropellerForcing:
    return PropellerForcing(p)


# --------------------------------------------------------------------- wind


@dataclass(frozen=True)
class WindParams:
    """Wind model settings.

    ``area_m2`` is either one impact area or three projected areas facing
    wind along x, y and z. ``pressure_offset_m`` is the vector from the centre
    of mass to the centre of pressure; wind torque is ``offset x force``.
    """

    area_m2: object = 1.0
    rho_strat: float = 0.09
    scenario: str = "typical"
    mean_speed_mps: Optional[float] = None
    gust_corner_hz: float = 2.0
    turbulence_intensity: float = 0.2
    seed: int = 0
    mode: str = "as-given"
    pressure_offset_m: tuple = (0.0, 0.05, 0.0)
    gust_dt: float = 1e-3

    def __post_init__(self):
        area = np.broadcast_to(np.asarray(self.area_m2, dtype=float), (3,))
        problems = []
        if np.any(area < 0) or not np.all(np.isfinite(area)):
            problems.append(f"area_m2 must be >= 0 (got {self.area_m2})")
        if not self.rho_strat > 0:
            problems.append(f"rho_strat must be > 0 (got {self.rho_strat})")
        if self.scenario not in SCENARIOS:
            problems.append(f"scenario must be one of {', '.join(SCENARIOS)} (got {self.scenario!r})")
        if self.mean_speed_mps is not None and not self.mean_speed_mps >= 0:
            problems.append(f"mean_speed_mps must be >= 0 (got {self.mean_speed_mps})")
        if not self.gust_corner_hz > 0:
            problems.append(f"gust_corner_hz must be > 0 (got {self.gust_corner_hz})")
        if not self.turbulence_intensity >= 0:
            problems.append(f"turbulence_intensity must be >= 0 (got {self.turbulence_intensity})")
        if self.mode not in WIND_MODES:
            problems.append(f"mode must be one of {', '.join(WIND_MODES)} (got {self.mode!r})")
        if len(tuple(self.pressure_offset_m)) != 3:
            problems.append("pressure_offset_m must have three components")
        if not self.gust_dt > 0:
            problems.append(f"gust_dt must be > 0 (got {self.gust_dt})")
        if int(self.seed) < 0:
            problems.append(f"seed must be a non-negative integer (got {self.seed})")
        if problems:
            raise InvalidParameterError("; ".join(problems))
        object.__setattr__(self, "pressure_offset_m", tuple(float(v) for v in self.pressure_offset_m))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def areas(self) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.area_m2, dtype=float), (3,)).copy()

    @property
    def speed(self) -> float:
        if self.mean_speed_mps is not None:
            return float(self.mean_speed_mps)
        return SCENARIO_SPEED[self.scenario]

    @property
    def direction(self) -> np.ndarray:
        if self.scenario.startswith("unidirectional-"):
            d = np.zeros(3)
            d[_AXIS[self.scenario[-1]]] = 1.0
            return d
        return _RESULTANT.copy()

    @property
    def gust_mask(self) -> np.ndarray:
        if self.scenario.startswith("unidirectional-"):
            return self.direction
        return np.ones(3)


class GustProcess:
    """Three-channel Ornstein-Uhlenbeck gust, materialized on a fixed grid.

    Samples are generated in fixed-size blocks from one seeded stream, so the
    value at grid index ``k`` does not depend on the order of queries.
    Between grid points the process is linearly interpolated.
    """

    block = 4096

    def __init__(self, sigma: float, corner_hz: float, dt: float, seed: int):
        self.sigma = float(sigma)
        self.dt = float(dt)
        self.a = math.exp(-2.0 * math.pi * corner_hz * dt)
        self.b = self.sigma * math.sqrt(1.0 - self.a * self.a)
        self._rng = np.random.default_rng(seed)
        self._values = (self.sigma * self._rng.standard_normal(3))[None, :]
        self._lock = threading.Lock()

    def _extend_to(self, k: int) -> None:
        with self._lock:
            while len(self._values) <= k:
                xi = self._rng.standard_normal((self.block, 3))
                zi = self.a * self._values[-1][None, :]
                new, _ = lfilter([self.b], [1.0, -self.a], xi, axis=0, zi=zi)
                self._values = np.concatenate([self._values, new])

    def sample(self, times) -> np.ndarray:
        times = np.atleast_1d(np.asarray(times, dtype=float))
        if len(times) == 0:
            return np.zeros((0, 3))
        if np.any(times < 0) or not np.all(np.isfinite(times)):
            raise InvalidParameterError("gust process is defined for finite t >= 0 only")
        u = times / self.dt
        k = np.floor(u).astype(np.int64)
        frac = (u - k)[:, None]
        self._extend_to(int(k.max()) + 1)
        v = self._values
        return (1.0 - frac) * v[k] + frac * v[k + 1]


class WindField:
    """Wind velocity (m/s) as a function of time for one parameter set."""

    def __init__(self, params: WindParams):
        self.params = params
        speed = params.speed
        self.mean = speed * params.direction
        self.gust = GustProcess(params.turbulence_intensity * speed, params.gust_corner_hz, params.gust_dt, params.seed)
        self.mask = params.gust_mask

    def sample(self, times) -> np.ndarray:
        g = self.gust.sample(times) * self.mask
        return self.mean + g


def wind_speed_series(w: WindParams, t):
    """Wind velocity at time ``t``; returns shape (3,) for scalar ``t``, (n, 3) otherwise."""
    v = WindField(w).sample(t)
    return v[0] if np.ndim(t) == 0 else v


def wind_force(w: WindParams, wind_velocity) -> np.ndarray:
    """Force on the platform from wind velocity ``v``.

    ``as-given`` mode uses ``A*rho*v`` component-wise; ``quadratic`` uses the
    drag form ``0.5*A*rho*|v|*v``. Accepts a 3-vector or an ``(n, 3)`` array.
    """
    v = np.asarray(wind_velocity, dtype=float)
    area = w.areas
    if w.mode == "as-given":
        return area * w.rho_strat * v
    if w.mode == "quadratic":
        speed = np.linalg.norm(v, axis=-1, keepdims=True)
        return 0.5 * area * w.rho_strat * speed * v
    raise InvalidParameterError(f"unknown wind force mode {w.mode!r}")


class WindForcing(ForcingFunction):
    def __init__(self, params: WindParams):
        self.params = params
        self.seed = params.seed
        self.field = WindField(params)
        self.offset = np.asarray(params.pressure_offset_m, dtype=float)
        self.metadata = {"wind_mode": params.mode, "scenario": params.scenario, "seed": params.seed}

    def sample(self, times) -> np.ndarray:
        v = self.field.sample(times)
        f = wind_force(self.params, v)
        out = np.empty((len(f), 6))
        out[:, :3] = f
        out[:, 3:] = np.cross(self.offset, f)
        return out


def wind_forcing(w: WindParams) -> WindForcing:
    return WindForcing(w)
