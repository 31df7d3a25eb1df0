"""Laser footprint tracking on grayscale frame sequences.

Frames are 8-bit portable graymaps; lexicographic filename order defines the
frame order. Image rows grow downward, so the receiver-plane ``y`` axis is
the negated row direction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from PIL import Image

from .errors import CalibrationError, InsufficientDataError, InvalidParameterError, SchemaError
from .pointing import PointingSeries

BORESIGHT_RULES = ("mean", "first-frame", "reference")


@dataclass(frozen=True)
class Frame:
    pixels: np.ndarray  # (height, width) uint8
    index: int = 0
    fps: float = 30.0

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2:
            raise InvalidParameterError(f"frame pixels must be 2-D, got shape {px.shape}")
        if not self.fps > 0:
            raise InvalidParameterError(f"fps must be > 0 (got {self.fps})")
        px = np.clip(px, 0, 255).astype(np.uint8)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def t(self) -> float:
        return self.index / self.fps


@dataclass(frozen=True)
class Calibration:
    meters_per_pixel: float
    ref_diameter_px: float
    ref_diameter_m: float
    ref_centroid_px: Optional[tuple] = None

    def __post_init__(self):
        if not (self.meters_per_pixel > 0 and self.ref_diameter_px > 0 and self.ref_diameter_m > 0):
            raise CalibrationError("calibration values must all be > 0")


def read_pgm(path, index: int = 0, fps: float = 30.0) -> Frame:
    path = Path(path)
    try:
        with Image.open(path) as im:
            if im.mode != "L":
                raise SchemaError(f"{path}: expected an 8-bit grayscale image, got mode {im.mode}")
            px = np.asarray(im, dtype=np.uint8)
    except (OSError, SyntaxError) as exc:
        raise SchemaError(f"{path}: unreadable frame ({exc})") from exc
    return Frame(px, index=index, fps=fps)


def write_pgm(path, frame: Frame) -> None:
    Image.fromarray(np.ascontiguousarray(frame.pixels), mode="L").save(Path(path), format="PPM")


def read_frames(directory, fps: float = 30.0) -> list[Frame]:
    directory = Path(directory)
    files = sorted(p for p in directory.iterdir() if p.suffix.lower() == ".pgm")
    return [read_pgm(p, index=i, fps=fps) for i, p in enumerate(files)]


def detect_centroid(frame: Frame, threshold: int = 40):
    """Intensity-weighted centroid ``(cx, cy)`` in pixels, or ``None``.

    Only pixels with intensity >= ``threshold`` contribute. ``cx`` is the
    column coordinate and ``cy`` the row coordinate.
    """
    px = frame.pixels.astype(float)
    w = np.where(px >= threshold, px, 0.0)
    total = w.sum()
    if total <= 0:
        return None
    rows, cols = np.indices(px.shape)
    return float((w * cols).sum() / total), float((w * rows).sum() / total)


def calibrate(ref_frame: Frame, threshold: int, ref_diameter_m: float) -> Calibration:
    """Pixel scale from a vibration-free reference footprint of known diameter.

    The footprint diameter in pixels is the mean of its x and y extents.
    """
    if not ref_diameter_m > 0:
        raise InvalidParameterError(f"ref_diameter_m must be > 0 (got {ref_diameter_m})")
    mask = ref_frame.pixels >= threshold
    if threshold <= 0 or not mask.any():
        raise CalibrationError("no detectable footprint in the reference frame")
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    extent_x = cols[-1] - cols[0] + 1
    extent_y = rows[-1] - rows[0] + 1
    diameter_px = 0.5 * (extent_x + extent_y)
    return Calibration(
        meters_per_pixel=float(ref_diameter_m / diameter_px),
        ref_diameter_px=float(diameter_px),
        ref_diameter_m=float(ref_diameter_m),
        ref_centroid_px=detect_centroid(ref_frame, threshold),
    )


def angular_from_lateral(lateral_m, distance_m: float):
    """Small-angle conversion of a lateral displacement to mrad."""
    if not distance_m > 0:
        raise InvalidParameterError(f"distance_m must be > 0 (got {distance_m})")
    out = 1000.0 * np.asarray(lateral_m, dtype=float) / distance_m
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TrackResult:
    series: PointingSeries
    gaps: tuple  # frame indices without a detection
    boresight_px: tuple


def extract_series(
    frames: Sequence[Frame],
    cal: Calibration,
    threshold: int = 40,
    boresight: str = "mean",
    distance_m: Optional[float] = None,
) -> TrackResult:
    """Lateral displacement history of the footprint centroid.

    ``boresight`` selects the zero reference: the mean centroid, the first
    detected centroid, or the calibration frame's centroid (``reference``).
    Angles are filled only when ``distance_m`` is given; otherwise they are NaN.
    """
    if boresight not in BORESIGHT_RULES:
        raise InvalidParameterError(f"boresight must be one of {BORESIGHT_RULES} (got {boresight!r})")
    hits, gaps = [], []
    for f in frames:
        c = detect_centroid(f, threshold)
        if c is None:
            gaps.append(f.index)
        else:
            hits.append((f.t, c[0], c[1]))
    if len(hits) < 2:
        raise InsufficientDataError(f"need at least 2 frames with a detection, got {len(hits)}")
    arr = np.array(hits)
    t, cx, cy = arr[:, 0], arr[:, 1], arr[:, 2]
    if boresight == "mean":
        b = (float(cx.mean()), float(cy.mean()))
    elif boresight == "first-frame":
        b = (float(cx[0]), float(cy[0]))
    else:
        if cal.ref_centroid_px is None:
            raise CalibrationError("reference boresight requires a calibration with a reference centroid")
        b = tuple(float(v) for v in cal.ref_centroid_px)
    lat_x = (cx - b[0]) * cal.meters_per_pixel
    lat_y = -(cy - b[1]) * cal.meters_per_pixel
    if distance_m is None:
        th_x = th_y = np.full(len(t), math.nan)
    else:
        th_x = angular_from_lateral(lat_x, distance_m)
        th_y = angular_from_lateral(lat_y, distance_m)
    series = PointingSeries(distance_m, t, th_x, th_y, lat_x, lat_y)
    return TrackResult(series, tuple(gaps), b)


# ------------------------------------------------------------- synthetic


def render_spot(width: int, height: int, cx: float, cy: float, sigma_px: float = 3.0, peak: float = 255.0, background: float = 0.0) -> Frame:
    """Gaussian laser spot rendered at sub-pixel position ``(cx, cy)``."""
    rows, cols = np.indices((height, width))
    img = background + peak * np.exp(-((cols - cx) ** 2 + (rows - cy) ** 2) / (2.0 * sigma_px**2))
    return Frame(np.rint(np.clip(img, 0, 255)).astype(np.uint8))


def render_disc(width: int, height: int, cx: float, cy: float, diameter_px: float, value: int = 255, aspect: float = 1.0) -> Frame:
    """Flat disc (or ellipse with y/x axis ratio ``aspect``) of the given x diameter."""
    rows, cols = np.indices((height, width))
    a = diameter_px / 2.0
    b = a * aspect
    inside = ((cols - cx) / a) ** 2 + ((rows - cy) / b) ** 2 <= 1.0
    return Frame(np.where(inside, value, 0).astype(np.uint8))


def render_sequence(
    lateral_x_m,
    lateral_y_m,
    meters_per_pixel: float,
    boresight_px: tuple,
    size: tuple = (160, 160),
    fps: float = 30.0,
    sigma_px: float = 3.0,
) -> list[Frame]:
    """Frames of a Gaussian spot following a lateral displacement history."""
    w, h = size
    frames = []
    for i, (lx, ly) in enumerate(zip(lateral_x_m, lateral_y_m)):
        cx = boresight_px[0] + lx / meters_per_pixel
        cy = boresight_px[1] - ly / meters_per_pixel
        f = render_spot(w, h, cx, cy, sigma_px=sigma_px)
        frames.append(Frame(f.pixels, index=i, fps=fps))
    return frames
