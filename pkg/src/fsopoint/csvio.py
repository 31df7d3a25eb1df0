"""CSV schemas for trajectories, pointing series, statistics and budgets."""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from .dynamics import Trajectory
from .errors import InsufficientDataError, SchemaError
from .pointing import FitResult, PointingSeries, StatsSummary

POINTING_COLUMNS = ("t_s", "theta_x_mrad", "theta_y_mrad", "rho_mrad", "lateral_x_m", "lateral_y_m")
TRAJECTORY_COLUMNS = (
    "t_s", "x_m", "y_m", "z_m", "roll_rad", "pitch_rad", "yaw_rad",
    "vx_mps", "vy_mps", "vz_mps", "roll_rate_radps", "pitch_rate_radps", "yaw_rate_radps",
)
BUDGET_COLUMNS = ("L_m", "geometric_db", "expected_pointing_db", "total_db")


def fmt(x, digits: int = 9) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    s = f"{x:.{digits}g}"
    return "0" if s == "-0" else s


def _write(path, header, rows, digits) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v, digits) for v in row) + "\n")
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, newline="")
    return text


def write_trajectory(path, traj: Trajectory, digits: int = 9) -> str:
    data = np.column_stack([traj.t, traj.q, traj.qdot])
    return _write(path, TRAJECTORY_COLUMNS, data, digits)


def write_pointing(path, series: PointingSeries, digits: int = 9) -> str:
    data = np.column_stack([series.t, series.theta_x, series.theta_y, series.rho, series.lateral_x, series.lateral_y])
    return _write(path, POINTING_COLUMNS, data, digits)


def read_pointing(path) -> PointingSeries:
    """Read a pointing CSV; the link range is not stored and comes back as ``None``."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read ({exc.strerror})") from exc
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise InsufficientDataError(f"{path}: empty file")
    header = [h.strip() for h in header]
    missing = [c for c in POINTING_COLUMNS if c not in header]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
    idx = [header.index(c) for c in POINTING_COLUMNS]
    rows = []
    for lineno, row in enumerate(reader, 2):
        if not row or not any(cell.strip() for cell in row):
            continue
        try:
            rows.append([float(row[i]) for i in idx])
        except (IndexError, ValueError) as exc:
            raise SchemaError(f"{path}:{lineno}: malformed row") from exc
    if len(rows) < 2:
        raise InsufficientDataError(f"{path}: need at least 2 data rows, got {len(rows)}")
    a = np.array(rows)
    return PointingSeries(None, a[:, 0], a[:, 1], a[:, 2], a[:, 4], a[:, 5])


def stats_rows(s: StatsSummary, f: FitResult | None = None):
    rows = [
        ("n", s.n),
        ("mu_theta_x_mrad", s.mu_theta_x),
        ("mu_theta_y_mrad", s.mu_theta_y),
        ("mu_rho_mrad", s.mu_rho),
        ("sigma_theta_x_mrad", s.sigma_theta_x),
        ("sigma_theta_y_mrad", s.sigma_theta_y),
        ("sigma_rho_mrad", s.sigma_rho),
        ("mu_lateral_mm", s.mu_lateral_mm),
        ("sigma_lateral_mm", s.sigma_lateral_mm),
    ]
    if f is not None:
        rows += [
            ("gaussian_x_mean_mrad", f.gaussian_x.mean),
            ("gaussian_x_std_mrad", f.gaussian_x.std),
            ("gaussian_y_mean_mrad", f.gaussian_y.mean),
            ("gaussian_y_std_mrad", f.gaussian_y.std),
            ("rayleigh_sigma_mrad", f.rayleigh_sigma),
            ("rayleigh_ks_statistic", f.rayleigh_ks),
        ]
    return rows


def write_stats(path, s: StatsSummary, f: FitResult | None = None, digits: int = 9) -> str:
    return _write(path, ("statistic", "value"), [(k, fmt(v, digits)) for k, v in stats_rows(s, f)], digits)


def write_budget(path, rows, digits: int = 9) -> str:
    return _write(path, BUDGET_COLUMNS, rows, digits)
