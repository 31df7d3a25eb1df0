"""Command line front end.

Exit status: 0 success, 2 usage or config error, 3 data error, 4 numerical
divergence.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import config as configmod
from . import csvio, fixtures, linkbudget, pointing, simulation, tracker
from .errors import ConfigError, FsoPointError, InsufficientDataError

log = logging.getLogger("fsopoint")


# ----------------------------------------------------------------- reports


def format_stats(s: pointing.StatsSummary, f: Optional[pointing.FitResult] = None) -> str:
    lines = [
        f"samples                 {s.n}",
        "statistic               value (mrad)",
        f"mu_theta_x              {s.mu_theta_x:.4f}",
        f"mu_theta_y              {s.mu_theta_y:.4f}",
        f"mu_rho                  {s.mu_rho:.4f}",
        f"sigma_theta_x           {s.sigma_theta_x:.4f}",
        f"sigma_theta_y           {s.sigma_theta_y:.4f}",
        f"sigma_rho               {s.sigma_rho:.4f}",
        f"lateral magnitude mean  {s.mu_lateral_mm:.4f} mm",
        f"lateral magnitude std   {s.sigma_lateral_mm:.4f} mm",
    ]
    if f is not None:
        flag = lambda g: " (degenerate)" if g.degenerate else ""  # noqa: E731
        lines += [
            "",
            f"gaussian fit x          mean {f.gaussian_x.mean:.4f}  std {f.gaussian_x.std:.4f}{flag(f.gaussian_x)}",
            f"gaussian fit y          mean {f.gaussian_y.mean:.4f}  std {f.gaussian_y.std:.4f}{flag(f.gaussian_y)}",
            f"rayleigh fit            sigma {f.rayleigh_sigma:.4f}  (KS statistic {f.rayleigh_ks:.4f})",
        ]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ComparisonReport:
    measured: pointing.StatsSummary
    predicted: Optional[pointing.StatsSummary]
    predicted_mu_rho: float
    prediction_error_percent: float
    deltas: dict


_STAT_FIELDS = ("mu_theta_x", "mu_theta_y", "mu_rho", "sigma_theta_x", "sigma_theta_y", "sigma_rho")


def compare(measured: pointing.PointingSeries, predicted=None, predicted_mu_rho: Optional[float] = None) -> ComparisonReport:
    """Compare a measured series against a predicted series or a bare predicted ``mu_rho``."""
    ms = pointing.stats(measured)
    ps = pointing.stats(predicted) if predicted is not None else None
    mu = ps.mu_rho if ps is not None else float(predicted_mu_rho)
    deltas = {}
    if ps is not None:
        deltas = {k: getattr(ps, k) - getattr(ms, k) for k in _STAT_FIELDS}
    else:
        deltas = {"mu_rho": mu - ms.mu_rho}
    return ComparisonReport(ms, ps, mu, pointing.prediction_error(ms.mu_rho, mu), deltas)


def format_comparison(r: ComparisonReport) -> str:
    head = f"{'statistic':<24}" + "".join(f"{k:>15}" for k in _STAT_FIELDS)
    meas = f"{'measured (mrad)':<24}" + "".join(f"{getattr(r.measured, k):>15.4f}" for k in _STAT_FIELDS)
    if r.predicted is not None:
        pred = f"{'predicted (mrad)':<24}" + "".join(f"{getattr(r.predicted, k):>15.4f}" for k in _STAT_FIELDS)
    else:
        pred = f"{'predicted (mrad)':<24}" + "".join(
            f"{r.predicted_mu_rho:>15.4f}" if k == "mu_rho" else f"{'':>15}" for k in _STAT_FIELDS
        )
    err = f"{'prediction error':<24}{'':>30}{r.prediction_error_percent:>14.2f}%"
    return "\n".join([head, meas, pred, err]) + "\n"


def comparison_rows(r: ComparisonReport):
    rows = []
    for k in _STAT_FIELDS:
        p = getattr(r.predicted, k) if r.predicted is not None else (r.predicted_mu_rho if k == "mu_rho" else math.nan)
        rows.append((k + "_mrad", getattr(r.measured, k), p, r.deltas.get(k, math.nan)))
    rows.append(("prediction_error_percent", r.prediction_error_percent, math.nan, math.nan))
    return rows


def write_comparison(path, r: ComparisonReport, digits: int = 9) -> str:
    rows = [(name, csvio.fmt(m, digits), csvio.fmt(p, digits), csvio.fmt(d, digits)) for name, m, p, d in comparison_rows(r)]
    return csvio._write(path, ("statistic", "measured", "predicted", "delta"), rows, digits)


# ---------------------------------------------------------------- commands


def _outdir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def cmd_simulate(args) -> int:
    cfg = configmod.load(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, sim=dataclasses.replace(cfg.sim, seed=args.seed))
    out = _outdir(args.out or cfg.output.directory)
    digits = cfg.output.csv_digits
    result = simulation.run(cfg)
    s = pointing.stats(result.series)
    f = pointing.fit(result.series)
    csvio.write_trajectory(out / "trajectory.csv", result.trajectory, digits)
    csvio.write_pointing(out / "pointing.csv", result.series, digits)
    csvio.write_stats(out / "stats.csv", s, f, digits)
    ratio = pointing.angular_linear_ratio(result.trajectory, cfg.link.range_m)
    report = format_stats(s, f) + f"angular/linear lateral vibration ratio {ratio:.4g}\n"
    (out / "report.txt").write_text(report)
    (out / "config.cfg").write_text(configmod.dumps(cfg))
    if args.figures:
        from . import plots

        plots.trajectory_figure(result.trajectory, out / "trajectory.png")
        plots.pointing_figure(result.series, f, out / "pointing.png", title="Simulated pointing error")
    sys.stdout.write(report)
    return 0


def cmd_track(args) -> int:
    frames_dir = Path(args.frames_dir)
    if not frames_dir.is_dir():
        raise ConfigError(f"frames_dir: not a directory: {frames_dir}")
    frames = tracker.read_frames(frames_dir, fps=args.fps)
    if not frames:
        raise ConfigError(f"frames_dir: no .pgm frames in {frames_dir}")
    if args.meters_per_pixel is not None:
        cal = tracker.Calibration(args.meters_per_pixel, 1.0, args.meters_per_pixel)
    else:
        if args.ref_frame is None or args.ref_diameter_m is None:
            raise ConfigError("calibration: give --meters-per-pixel or both --ref-frame and --ref-diameter-m")
        cal = tracker.calibrate(tracker.read_pgm(args.ref_frame), args.threshold, args.ref_diameter_m)
    res = tracker.extract_series(frames, cal, args.threshold, args.boresight, args.distance_m)
    out = _outdir(args.out)
    csvio.write_pointing(out / "pointing.csv", res.series, args.digits)
    report = f"frames {len(frames)}, detections {len(res.series)}, gaps {len(res.gaps)}\n"
    report += f"meters per pixel {cal.meters_per_pixel:.6g}\n"
    if args.distance_m is not None:
        s = pointing.stats(res.series)
        f = pointing.fit(res.series)
        csvio.write_stats(out / "stats.csv", s, f, args.digits)
        report += format_stats(s, f)
        if args.figures:
            from . import plots

            plots.pointing_figure(res.series, f, out / "pointing.png", title="Tracked pointing error")
    (out / "report.txt").write_text(report)
    sys.stdout.write(report)
    return 0


def cmd_stats(args) -> int:
    series = csvio.read_pointing(args.pointing_csv)
    s = pointing.stats(series)
    f = pointing.fit(series)
    report = format_stats(s, f)
    if args.out:
        out = _outdir(args.out)
        csvio.write_stats(out / "stats.csv", s, f, args.digits)
        (out / "report.txt").write_text(report)
        if args.figures:
            from . import plots

            plots.pointing_figure(series, f, out / "pointing.png")
    sys.stdout.write(report)
    return 0


def _budget_rows(g: linkbudget.LinkGeometry, sigma, samples, seed):
    geo = linkbudget.geometric_loss_db(g)
    if sigma is None:
        point = float(linkbudget.pointing_loss_db(g, 0.0))
    else:
        point = linkbudget.expected_pointing_loss_db(g, sigma, samples, seed).loss_db
    return (g.range_m, geo, point, geo + point)


def cmd_linkbudget(args) -> int:
    g = linkbudget.LinkGeometry(args.range_m, args.divergence_rad, args.aperture_m)
    rows = [_budget_rows(g, args.sigma_mrad, args.samples, args.seed)]
    curve = None
    if args.curve_start_m is not None or args.curve_end_m is not None:
        if args.curve_start_m is None or args.curve_end_m is None:
            raise ConfigError("curve: give both --curve-start-m and --curve-end-m")
        curve = linkbudget.geometric_loss_curve(args.aperture_m, args.divergence_rad, args.curve_start_m, args.curve_end_m, args.curve_points)
        rows += [
            _budget_rows(linkbudget.LinkGeometry(L, args.divergence_rad, args.aperture_m), args.sigma_mrad, args.samples, args.seed)
            for L, _ in curve
        ]
    path = None
    if args.out:
        out = _outdir(args.out)
        path = out / "budget.csv"
        if args.figures and curve is not None:
            from . import plots

            plots.budget_figure(curve, out / "geometric_loss.png")
    sys.stdout.write(csvio.write_budget(path, rows, args.digits))
    return 0


def cmd_compare(args) -> int:
    measured = csvio.read_pointing(args.measured_csv)
    predicted = None
    if args.simulated_csv is not None:
        predicted = csvio.read_pointing(args.simulated_csv)
    elif args.predicted_mu_rho is None:
        raise ConfigError("compare: give a simulated CSV or --predicted-mu-rho")
    r = compare(measured, predicted, args.predicted_mu_rho)
    text = format_comparison(r)
    if args.out:
        out = _outdir(args.out)
        write_comparison(out / "comparison.csv", r, args.digits)
        (out / "comparison.txt").write_text(text)
        if args.figures:
            from . import plots

            plots.comparison_figure(measured, predicted, out / "comparison.png")
    sys.stdout.write(text)
    return 0


def cmd_fixture(args) -> int:
    out = _outdir(args.out)
    fx = fixtures.build_measured_fixture()
    pred = fixtures.build_predicted_fixture(fx.series)
    csvio.write_pointing(out / "measured_fixture.csv", fx.series)
    csvio.write_pointing(out / "predicted_fixture.csv", pred)
    msg = f"wall distance {fx.wall_distance_m:.6f} m, axis correlation {fx.correlation:.6f}\n"
    if args.frames:
        ref, frames = fixtures.render_fixture_frames(fx)
        fdir = _outdir(out / "frames")
        for fr in frames:
            tracker.write_pgm(fdir / f"frame_{fr.index:04d}.pgm", fr)
        tracker.write_pgm(out / "reference.pgm", ref)
        msg += (
            f"{len(frames)} frames; calibrate with --ref-frame {out / 'reference.pgm'} "
            f"--ref-diameter-m {fixtures.REF_DIAMETER_M} --distance-m {fx.wall_distance_m:.9g} --boresight reference\n"
        )
    sys.stdout.write(msg)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fsopoint", description="Pointing-error simulation and analysis for airborne FSO links.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_required=False):
        sp.add_argument("--out", required=out_required, help="output directory")
        sp.add_argument("--figures", action="store_true", help="also render PNG figures into the output directory")
        sp.add_argument("--digits", type=int, default=9, help="significant digits in CSV output")

    s = sub.add_parser("simulate", help="integrate the platform model and report pointing statistics")
    s.add_argument("--config", required=True, help="config file or shipped config name")
    s.add_argument("--seed", type=int, help="override sim.seed")
    s.add_argument("--out", help="output directory (default: output.directory)")
    s.add_argument("--figures", action="store_true")
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("track", help="extract a pointing series from grayscale frames")
    t.add_argument("frames_dir")
    t.add_argument("--fps", type=float, default=30.0)
    t.add_argument("--threshold", type=int, default=40)
    t.add_argument("--ref-frame", help="vibration-free reference frame for calibration")
    t.add_argument("--ref-diameter-m", type=float, help="true footprint diameter in the reference frame")
    t.add_argument("--meters-per-pixel", type=float, help="skip calibration and use this scale")
    t.add_argument("--distance-m", type=float, help="transmitter-to-receiver distance for angle conversion")
    t.add_argument("--boresight", choices=tracker.BORESIGHT_RULES, default="mean")
    common(t, out_required=True)
    t.set_defaults(func=cmd_track)

    st = sub.add_parser("stats", help="statistics and fits of a pointing CSV")
    st.add_argument("pointing_csv")
    common(st)
    st.set_defaults(func=cmd_stats)

    lb = sub.add_parser("linkbudget", help="geometric and pointing loss budget")
    lb.add_argument("--range-m", type=float, required=True)
    lb.add_argument("--divergence-rad", type=float, required=True)
    lb.add_argument("--aperture-m", type=float, required=True)
    lb.add_argument("--sigma-mrad", type=float, help="Rayleigh jitter scale for expected pointing loss")
    lb.add_argument("--samples", type=int, default=100_000)
    lb.add_argument("--seed", type=int, default=0)
    lb.add_argument("--curve-start-m", type=float)
    lb.add_argument("--curve-end-m", type=float)
    lb.add_argument("--curve-points", type=int, default=10)
    common(lb)
    lb.set_defaults(func=cmd_linkbudget)

    c = sub.add_parser("compare", help="prediction error of a simulated series against a measured one")
    c.add_argument("measured_csv")
    c.add_argument("simulated_csv", nargs="?")
    c.add_argument("--predicted-mu-rho", type=float, help="compare against a bare predicted magnitude mean (mrad)")
    common(c)
    c.set_defaults(func=cmd_compare)

    fx = sub.add_parser("fixture", help="write the synthetic experiment fixtures")
    fx.add_argument("--out", required=True)
    fx.add_argument("--frames", action="store_true", help="also render the 150 frames and the reference frame")
    fx.set_defaults(func=cmd_fixture)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return exc.exit_code
    except FsoPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
