"""Attenuation figures for a flat-top beam falling on a circular aperture."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidParameterError

log = logging.getLogger(__name__)

DEFAULT_FLOOR_DB = -100.0


@dataclass(frozen=True)
class LinkGeometry:
    range_m: float
    divergence_rad: float
    aperture_m: float
    transmit_power_dbm: Optional[float] = None

    def __post_init__(self):
        problems = []
        for name in ("range_m", "divergence_rad", "aperture_m"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                problems.append(f"{name} must be > 0 (got {v})")
        if problems:
            raise InvalidParameterError("; ".join(problems))
        if self.footprint_m < self.aperture_m:
            log.warning(
                "beam footprint %.4g m is smaller than the aperture %.4g m; far-field loss formulas do not apply",
                self.footprint_m,
                self.aperture_m,
            )

    @property
    def footprint_m(self) -> float:
        """Beam footprint diameter at the receiver (small-angle)."""
        return self.divergence_rad * self.range_m


def attenuation_db(received_power: float, transmitted_power: float) -> float:
    if not (received_power > 0 and transmitted_power > 0):
        raise InvalidParameterError(
            f"powers must be > 0 (got received={received_power}, transmitted={transmitted_power})"
        )
    return 10.0 * math.log10(received_power / transmitted_power)


def geometric_loss_db(g: LinkGeometry) -> float:
    return 20.0 * math.log10(g.aperture_m / g.footprint_m)


def circle_overlap_area(r1, r2, d):
    """Intersection area of two circles with radii ``r1``, ``r2`` at centre distance ``d``.

    Vectorized over ``d``; handles containment and disjoint cases.
    """
    r1 = float(r1)
    r2 = float(r2)
    d = np.abs(np.asarray(d, dtype=float))
    small, big = min(r1, r2), max(r1, r2)
    out = np.zeros_like(d)
    inside = d <= big - small
    out[inside] = math.pi * small * small
    lens = (~inside) & (d < r1 + r2)
    if np.any(lens):
        dd = d[lens]
        c1 = np.clip((dd * dd + r1 * r1 - r2 * r2) / (2.0 * dd * r1), -1.0, 1.0)
        c2 = np.clip((dd * dd + r2 * r2 - r1 * r1) / (2.0 * dd * r2), -1.0, 1.0)
        k = (-dd + r1 + r2) * (dd + r1 - r2) * (dd - r1 + r2) * (dd + r1 + r2)
        out[lens] = r1 * r1 * np.arccos(c1) + r2 * r2 * np.arccos(c2) - 0.5 * np.sqrt(np.maximum(k, 0.0))
    return out if out.ndim else float(out)


def overlap_fraction(g: LinkGeometry, offset_r_m):
    """Fraction of the aperture area illuminated by the offset footprint."""
    ra = 0.5 * g.aperture_m
    area = circle_overlap_area(ra, 0.5 * g.footprint_m, offset_r_m)
    return area / (math.pi * ra * ra)


def _to_db(fraction, floor_db):
    f = np.asarray(fraction, dtype=float)
    with np.errstate(divide="ignore"):
        db = np.where(f > 0, 10.0 * np.log10(np.where(f > 0, f, 1.0)), -np.inf)
    db = np.maximum(db, floor_db)
    return db if db.ndim else float(db)


def pointing_loss_db(g: LinkGeometry, offset_r_m, floor_db: float = DEFAULT_FLOOR_DB):
    """Misalignment loss for a footprint centred ``offset_r_m`` from the aperture centre.

    Zero when the footprint covers the aperture; floored at ``floor_db`` when
    the circles are disjoint.
    """
    if np.any(np.asarray(offset_r_m) < 0):
        raise InvalidParameterError("offset_r_m must be >= 0")
    return _to_db(overlap_fraction(g, offset_r_m), floor_db)


@dataclass(frozen=True)
class ExpectedLoss:
    loss_db: float
    mean_fraction: float
    stderr_fraction: float
    n_samples: int

    @property
    def stderr_db(self) -> float:
        """First-order standard error of ``loss_db``."""
        if self.mean_fraction <= 0:
            return math.nan
        return 10.0 / math.log(10.0) * self.stderr_fraction / self.mean_fraction


def expected_pointing_loss_db(
    g: LinkGeometry,
    rayleigh_sigma_mrad: float,
    n_samples: int = 100_000,
    seed: int = 0,
    floor_db: float = DEFAULT_FLOOR_DB,
) -> ExpectedLoss:
    """Monte Carlo mean overlap under Rayleigh-distributed pointing jitter.

    Offsets are ``rho * L`` with ``rho ~ Rayleigh(sigma)``; the loss is the
    dB value of the mean linear overlap fraction.
    """
    if not rayleigh_sigma_mrad > 0:
        raise InvalidParameterError(f"rayleigh_sigma_mrad must be > 0 (got {rayleigh_sigma_mrad})")
    if n_samples < 1000:
        raise InvalidParameterError(f"n_samples must be >= 1000 (got {n_samples})")
    rng = np.random.default_rng(seed)
    rho = rng.rayleigh(rayleigh_sigma_mrad * 1e-3, size=n_samples)
    frac = overlap_fraction(g, rho * g.range_m)
    mean = float(np.mean(frac))
    se = float(np.std(frac, ddof=1) / math.sqrt(n_samples))
    return ExpectedLoss(float(_to_db(mean, floor_db)), mean, se, n_samples)


def geometric_loss_curve(aperture_m: float, divergence_rad: float, l_start: float, l_end: float, n_points: int):
    """Log-spaced ``(L, dB)`` pairs of geometric loss between ``l_start`` and ``l_end``."""
    if not 0 < l_start < l_end:
        raise InvalidParameterError(f"need 0 < l_start < l_end (got {l_start}, {l_end})")
    if n_points < 2:
        raise InvalidParameterError(f"n_points must be >= 2 (got {n_points})")
    ranges = np.geomspace(l_start, l_end, n_points)
    ranges[0], ranges[-1] = l_start, l_end
    return [(float(L), geometric_loss_db(LinkGeometry(float(L), divergence_rad, aperture_m))) for L in ranges]
