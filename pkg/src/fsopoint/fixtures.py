"""Synthetic fixtures matched to the published experiment statistics.

The experiment's raw 150-frame series was never released. The measured
fixture here is *synthetic*: a seeded draw whose per-axis angular mean and
standard deviation are set exactly by affine standardization, with the
axis correlation and the wall distance solved so that the lateral
displacement magnitude at the wall has mean 12.97 mm and standard
deviation 6.2563 mm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.optimize import brentq

from .pointing import PointingSeries

N_SAMPLES = 150
FPS = 30.0
SEED = 2018

THETA_X = (2.8749, 3.2768)  # mean, std in mrad
THETA_Y = (1.2746, 1.5535)
LATERAL_MAG_MM = (12.97, 6.2563)
PREDICTED_MU = 11.500


@dataclass(frozen=True)
class MeasuredFixture:
    series: PointingSeries
    correlation: float
    wall_distance_m: float


def _standardize(v, mean, std):
    return (v - v.mean()) / v.std(ddof=1) * std + mean


def _angles(z, k):
    tx = _standardize(z[0], *THETA_X)
    ty = _standardize(k * z[0] + math.sqrt(1.0 - k * k) * z[1], *THETA_Y)
    return tx, ty


def build_measured_fixture(seed: int = SEED, n: int = N_SAMPLES) -> MeasuredFixture:
    z = np.random.default_rng(seed).standard_normal((2, n))
    target_cv = LATERAL_MAG_MM[1] / LATERAL_MAG_MM[0]

    def cv_gap(k):
        r = np.hypot(*_angles(z, k))
        return r.std(ddof=1) / r.mean() - target_cv

    k = brentq(cv_gap, -0.999, 0.999, xtol=1e-14)
    tx, ty = _angles(z, k)
    distance = LATERAL_MAG_MM[0] / np.hypot(tx, ty).mean()  # mm per mrad == m
    t = np.arange(n) / FPS
    return MeasuredFixture(PointingSeries.from_angles(t, tx, ty, distance), float(k), float(distance))


def build_predicted_fixture(measured: PointingSeries, predicted_mu: float = PREDICTED_MU) -> PointingSeries:
    """Measured series scaled so magnitude means stand at ``predicted_mu : 12.97``."""
    s = predicted_mu / LATERAL_MAG_MM[0]
    return PointingSeries(
        measured.link_range_m,
        measured.t,
        measured.theta_x * s,
        measured.theta_y * s,
        measured.lateral_x * s,
        measured.lateral_y * s,
    )


def data_path(name: str):
    """Path of a file shipped in the package ``data`` directory."""
    return resources.files("fsopoint") / "data" / name


# frame rendering for the tracker pipeline
FRAME_SIZE = (256, 256)
REF_DIAMETER_PX = 40
REF_DIAMETER_M = 0.02
BORESIGHT_PX = (127.5, 127.5)  # half-integer so a 40 px disc spans exactly 40 pixels
SPOT_SIGMA_PX = 3.0


def render_fixture_frames(fixture: MeasuredFixture):
    """Reference disc frame plus one Gaussian-spot frame per fixture sample."""
    from . import tracker

    mpp = REF_DIAMETER_M / REF_DIAMETER_PX
    w, h = FRAME_SIZE
    ref = tracker.render_disc(w, h, BORESIGHT_PX[0], BORESIGHT_PX[1], REF_DIAMETER_PX)
    frames = tracker.render_sequence(
        fixture.series.lateral_x,
        fixture.series.lateral_y,
        mpp,
        BORESIGHT_PX,
        size=FRAME_SIZE,
        fps=FPS,
        sigma_px=SPOT_SIGMA_PX,
    )
    return ref, frames
