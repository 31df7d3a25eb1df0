"""Receiver-plane pointing error, summary statistics and distribution fits.

Angles are carried in mrad throughout; lateral displacements in metres.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy import stats as sps

from .dynamics import Trajectory
from .errors import InsufficientDataError, InvalidParameterError

PROJECTION_MODES = ("angular-only", "angular-plus-linear")
_ROLL, _PITCH = 3, 4


@dataclass(frozen=True)
class PointingSample:
    t: float
    theta_x: float
    theta_y: float
    rho: float
    lateral_x: float
    lateral_y: float


@dataclass(frozen=True)
class PointingSeries:
    """Column-oriented pointing error history.

    ``theta_*`` and ``rho`` are mrad; ``lateral_*`` are metres at the
    receiver. Angles may be NaN when the range is unknown.
    """

    link_range_m: Optional[float]
    t: np.ndarray
    theta_x: np.ndarray
    theta_y: np.ndarray
    lateral_x: np.ndarray
    lateral_y: np.ndarray

    def __post_init__(self):
        n = len(self.t)
        for name in ("t", "theta_x", "theta_y", "lateral_x", "lateral_y"):
            a = np.array(getattr(self, name), dtype=float)
            if a.shape != (n,):
                raise InvalidParameterError(f"{name} has shape {a.shape}, expected ({n},)")
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if n > 1 and np.any(np.diff(self.t) <= 0):
            raise InvalidParameterError("pointing samples must be ordered by strictly increasing t")

    @property
    def rho(self) -> np.ndarray:
        return np.hypot(self.theta_x, self.theta_y)

    @property
    def lateral_magnitude(self) -> np.ndarray:
        return np.hypot(self.lateral_x, self.lateral_y)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def samples(self) -> list[PointingSample]:
        rho = self.rho
        return [
            PointingSample(self.t[i], self.theta_x[i], self.theta_y[i], rho[i], self.lateral_x[i], self.lateral_y[i])
            for i in range(len(self))
        ]

    @classmethod
    def from_angles(cls, t, theta_x_mrad, theta_y_mrad, link_range_m: float) -> "PointingSeries":
        """Series whose lateral columns follow from the small-angle contract."""
        tx = np.asarray(theta_x_mrad, dtype=float)
        ty = np.asarray(theta_y_mrad, dtype=float)
        return cls(link_range_m, t, tx, ty, tx * 1e-3 * link_range_m, ty * 1e-3 * link_range_m)


@dataclass(frozen=True)
class StatsSummary:
    mu_theta_x: float
    mu_theta_y: float
    mu_rho: float
    sigma_theta_x: float
    sigma_theta_y: float
    sigma_rho: float
    n: int
    # magnitude of the lateral displacement at the receiver, mm
    mu_lateral_mm: float = math.nan
    sigma_lateral_mm: float = math.nan


class GaussianFit(NamedTuple):
    mean: float
    std: float
    degenerate: bool = False


@dataclass(frozen=True)
class FitResult:
    gaussian_x: GaussianFit
    gaussian_y: GaussianFit
    rayleigh_sigma: float
    rayleigh_ks: float = math.nan
    rayleigh_ks_pvalue: float = math.nan


def project_to_receiver(traj: Trajectory, link_range_m: float, mode: str = "angular-only") -> PointingSeries:
    """Convert platform roll/pitch (and optionally translation) to receiver error.

    ``angular-only`` uses ``lateral = theta * L``; ``angular-plus-linear``
    adds the translational DOFs ``x``/``y`` and backs the angles out as
    ``lateral / L``.
    """
    if not (link_range_m is not None and link_range_m > 0):
        raise InvalidParameterError(f"link_range_m must be > 0 (got {link_range_m})")
    if mode not in PROJECTION_MODES:
        raise InvalidParameterError(f"mode must be one of {PROJECTION_MODES} (got {mode!r})")
    L = float(link_range_m)
    roll = traj.q[:, _ROLL]
    pitch = traj.q[:, _PITCH]
    lat_x = roll * L
    lat_y = pitch * L
    if mode == "angular-plus-linear":
        lat_x = lat_x + traj.q[:, 0]
        lat_y = lat_y + traj.q[:, 1]
        return PointingSeries(L, traj.t, 1e3 * lat_x / L, 1e3 * lat_y / L, lat_x, lat_y)
    return PointingSeries(L, traj.t, 1e3 * roll, 1e3 * pitch, lat_x, lat_y)


def angular_linear_ratio(traj: Trajectory, link_range_m: float) -> float:
    """RMS ratio of angular to linear contributions to lateral vibration.

    Both contributions are mean-removed 2-D vectors at the receiver: the
    angular one is ``(roll, pitch) * L``, the linear one ``(x, y)``.
    """
    L = float(link_range_m)
    ang = traj.q[:, [_ROLL, _PITCH]] * L
    lin = traj.q[:, [0, 1]]
    ang = ang - ang.mean(axis=0)
    lin = lin - lin.mean(axis=0)
    rms_lin = math.sqrt(float(np.mean(np.sum(lin**2, axis=1))))
    rms_ang = math.sqrt(float(np.mean(np.sum(ang**2, axis=1))))
    if rms_lin == 0.0:
        return math.inf
    return rms_ang / rms_lin


def _require_n(x, n_min=2):
    if len(x) < n_min:
        raise InsufficientDataError(f"need at least {n_min} samples, got {len(x)}")


def stats(series: PointingSeries) -> StatsSummary:
    """Sample means and standard deviations (n-1 denominator)."""
    _require_n(series.t)
    rho = series.rho
    lat = series.lateral_magnitude * 1e3
    return StatsSummary(
        mu_theta_x=float(np.mean(series.theta_x)),
        mu_theta_y=float(np.mean(series.theta_y)),
        mu_rho=float(np.mean(rho)),
        sigma_theta_x=float(np.std(series.theta_x, ddof=1)),
        sigma_theta_y=float(np.std(series.theta_y, ddof=1)),
        sigma_rho=float(np.std(rho, ddof=1)),
        n=len(series),
        mu_lateral_mm=float(np.mean(lat)),
        sigma_lateral_mm=float(np.std(lat, ddof=1)),
    )


def fit_gaussian(samples) -> GaussianFit:
    x = np.asarray(samples, dtype=float)
    _require_n(x)
    mean = float(np.mean(x))
    std = float(np.std(x, ddof=1))
    return GaussianFit(mean, std, degenerate=std == 0.0)


def fit_rayleigh(magnitudes) -> float:
    """Maximum-likelihood Rayleigh scale ``sqrt(sum(r**2) / (2n))``."""
    r = np.asarray(magnitudes, dtype=float)
    _require_n(r)
    if np.any(r < 0):
        raise InvalidParameterError("Rayleigh fit requires non-negative magnitudes")
    return math.sqrt(float(np.sum(r * r)) / (2 * len(r)))


def rayleigh_moments(sigma: float) -> tuple[float, float]:
    """Mean and standard deviation of a Rayleigh(sigma) variable."""
    return sigma * math.sqrt(math.pi / 2.0), sigma * math.sqrt(2.0 - math.pi / 2.0)


def fit(series: PointingSeries) -> FitResult:
    """Gaussian fits per axis and a Rayleigh fit to the magnitude.

    The Kolmogorov-Smirnov statistic of the Rayleigh fit is reported for
    information only; a poor fit is not an error.
    """
    rho = series.rho
    sigma = fit_rayleigh(rho)
    if sigma > 0:
        ks = sps.kstest(rho, sps.rayleigh(scale=sigma).cdf)
        ks_stat, ks_p = float(ks.statistic), float(ks.pvalue)
    else:
        ks_stat = ks_p = math.nan
    return FitResult(
        gaussian_x=fit_gaussian(series.theta_x),
        gaussian_y=fit_gaussian(series.theta_y),
        rayleigh_sigma=sigma,
        rayleigh_ks=ks_stat,
        rayleigh_ks_pvalue=ks_p,
    )


def prediction_error(measured_mu_rho: float, predicted_mu_rho: float) -> float:
    """Relative error of a predicted magnitude mean, in percent."""
    if not measured_mu_rho > 0:
        raise InvalidParameterError(f"measured_mu_rho must be > 0 (got {measured_mu_rho})")
    return 100.0 * abs(measured_mu_rho - predicted_mu_rho) / measured_mu_rho
