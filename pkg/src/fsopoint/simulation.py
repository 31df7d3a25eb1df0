"""Compose platform, forcing and projection into one simulation run."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from . import dynamics, forcing, pointing
from .config import RunConfig


@dataclass(frozen=True)
class SimulationResult:
    system: dynamics.SystemMatrices
    trajectory: dynamics.Trajectory
    series: pointing.PointingSeries
    forcing: forcing.ForcingFunction


def build_system(cfg: RunConfig) -> dynamics.SystemMatrices:
    p = cfg.platform
    return dynamics.build_system(p.mass_kg, p.inertia_kgm2, p.k_trans, p.k_rot, p.damping_alpha, p.input_matrix)


def wind_params(cfg: RunConfig) -> forcing.WindParams:
    return dataclasses.replace(cfg.forcing.wind, seed=cfg.sim.seed)


def build_forcing(cfg: RunConfig) -> forcing.ForcingFunction:
    parts = []
    if "propeller" in cfg.forcing.sources:
        parts.append(forcing.propeller_forcing(cfg.forcing.propeller))
    if "wind" in cfg.forcing.sources:
        parts.append(forcing.wind_forcing(wind_params(cfg)))
    if not parts:
        return forcing.zero_forcing()
    return parts[0] if len(parts) == 1 else forcing.SumForcing(parts)


def mean_force(cfg: RunConfig) -> np.ndarray:
    """Time-mean generalized force: propeller mean thrust plus mean-wind load."""
    f = np.zeros(6)
    if "propeller" in cfg.forcing.sources:
        f[:3] += forcing.propeller_force_mean(cfg.forcing.propeller)
    if "wind" in cfg.forcing.sources:
        w = wind_params(cfg)
        fw = forcing.wind_force(w, w.speed * w.direction)
        f[:3] += fw
        f[3:] += np.cross(np.asarray(w.pressure_offset_m), fw)
    return f


def initial_state(cfg: RunConfig, system: dynamics.SystemMatrices) -> dynamics.PlatformState:
    if cfg.sim.initial == "equilibrium":
        return dynamics.PlatformState(0.0, system.static_deflection(mean_force(cfg)), np.zeros(6))
    return dynamics.PlatformState.rest()


def run(cfg: RunConfig) -> SimulationResult:
    """Integrate the configured platform and project it onto the receiver.

    A settling phase of ``sim.settle_s`` is integrated first and discarded,
    so the returned trajectory starts at ``t = settle_s``.
    """
    system = build_system(cfg)
    force = build_forcing(cfg)
    state = initial_state(cfg, system)
    s = cfg.sim
    if s.settle_s >= s.dt_s:
        warm = dynamics.integrate(system, state, force, s.settle_s, s.dt_s, s.divergence_bound)
        state = warm[len(warm) - 1]
    traj = dynamics.integrate(system, state, force, s.duration_s, s.dt_s, s.divergence_bound)
    series = pointing.project_to_receiver(traj, cfg.link.range_m, cfg.link.projection)
    return SimulationResult(system, traj, series, force)
