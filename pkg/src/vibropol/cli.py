"""Command-line interface.

Exit codes: 0 on success, 2 for configuration problems, 3 for physics
domain errors raised while running.  All outputs are deterministic, so
re-running a command overwrites its files byte-identically.
"""

from __future__ import annotations

import functools
import json
import os
import sys

import click
import numpy as np

from . import fit as fitmod
from . import io as iomod
from . import spectra as spectramod
from .config import load_config, parse_grid_spec
from .constants import cm1_to_mev
from .errors import ConfigError, DomainError, FitError, PeakCountError, VibropolError
from .fields import default_z_grid, field_map
from .polariton import estimate_report
from .tmm import angle_scan, spectrum_scan


def _translate_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as err:
            click.echo(f"config error: {err}", err=True)
            sys.exit(2)
        except (DomainError, PeakCountError, FitError) as err:
            click.echo(f"physics error: {err}", err=True)
            sys.exit(3)
        except VibropolError as err:
            click.echo(f"error: {err}", err=True)
            sys.exit(3)

    return wrapper


# wavenumbers in JSON summaries are rounded to 0.1 cm^-1 for display;
# CSV outputs keep full double precision
def _peak_dict(peak):
    return {
        "center_cm1": round(peak.center, 1),
        "height": peak.height,
        "prominence": peak.prominence,
        "fwhm_cm1": round(peak.fwhm, 1) if peak.fwhm is not None else None,
    }


def _splitting_dict(report):
    return {
        "channel": report.channel,
        "omega_lower_cm1": round(report.omega_lower, 1),
        "omega_upper_cm1": round(report.omega_upper, 1),
        "splitting_cm1": round(report.splitting_cm1, 1),
        "splitting_mev": round(report.splitting_mev, 2),
    }


def _channel_analysis(spectrum, channel, window, min_prominence):
    values = spectrum.channel(channel)
    shown = values if channel != "R" else 1.0 - values
    k = spectrum.k
    # peak search needs >= 3 samples; a sparser run still gets its CSV
    n_in = k.size if window is None else int(((k >= window[0]) & (k <= window[1])).sum())
    if n_in < 3:
        return {"analyzed": channel if channel != "R" else "1-R", "peaks": [], "splitting": None}
    peaks = spectramod.find_peaks(
        spectrum.k, shown, min_prominence=min_prominence, window=window
    )
    block = {
        "analyzed": channel if channel != "R" else "1-R",
        "peaks": [_peak_dict(p) for p in peaks],
    }
    try:
        rep = spectramod.extract_splitting(
            spectrum, channel, window=window, min_prominence=min_prominence
        )
        block["splitting"] = _splitting_dict(rep)
    except PeakCountError:
        block["splitting"] = None
    return block


def _emit_report(payload, out_dir, filename):
    if out_dir is None:
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        path = os.path.join(out_dir, filename)
        iomod.write_json(path, payload)
        click.echo(path)


@click.group()
def main():
    """Vibrational strong coupling in planar microcavities: simulate,
    map fields and analyze polariton spectra."""


_config_opt = click.option(
    "--config", "config_path", required=True,
    type=click.Path(exists=True, dir_okay=False), help="YAML run configuration.",
)
_out_dir_opt = click.option(
    "--out-dir", default=".", show_default=True,
    type=click.Path(file_okay=False), help="Directory for output files.",
)


@main.command()
@_config_opt
@_out_dir_opt
@click.option("--angle", type=float, default=None, help="Override the scan angle (deg).")
@click.option("--grid", "grid_spec", default=None, help="Override grid as min:max:step (cm^-1).")
@click.option("--polarization", type=click.Choice(["s", "p", "unpolarized"]), default=None)
@click.option("--divergence", type=float, default=None,
              help="Gaussian angular spread, one sigma in degrees.")
@_translate_errors
def simulate(config_path, out_dir, angle, grid_spec, polarization, divergence):
    """T/R/A spectrum of the configured stack at one angle."""
    cfg = load_config(config_path)
    stack = cfg.require_stack()
    grid = parse_grid_spec(grid_spec) if grid_spec else cfg.grid
    angle = cfg.scan.angle if angle is None else angle
    polarization = polarization or cfg.scan.polarization
    divergence = cfg.scan.divergence if divergence is None else divergence
    if divergence < 0:
        raise ConfigError("--divergence must be >= 0")

    if divergence > 0:
        spectrum = angle_scan(stack, grid, [angle], polarization, divergence=divergence)[0]
    else:
        spectrum = spectrum_scan(stack, grid, angle, polarization)

    iomod.write_spectrum_csv(os.path.join(out_dir, "spectrum.csv"), spectrum)
    summary = {
        "angle_deg": angle,
        "polarization": polarization,
        "divergence_deg": divergence,
        "grid": {"min": grid.k_min, "max": grid.k_max, "step": grid.step},
        "channels": {
            ch: _channel_analysis(spectrum, ch, cfg.scan.window, cfg.scan.min_prominence)
            for ch in ("T", "R", "A")
        },
    }
    iomod.write_json(os.path.join(out_dir, "summary.json"), summary)
    click.echo(os.path.join(out_dir, "spectrum.csv"))
    click.echo(os.path.join(out_dir, "summary.json"))


@main.command("scan-angle")
@_config_opt
@_out_dir_opt
@_translate_errors
def scan_angle(config_path, out_dir):
    """Spectra over the configured angle list plus a dispersion table."""
    cfg = load_config(config_path)
    stack = cfg.require_stack()
    if not cfg.scan.angles:
        raise ConfigError("scan.angles is required for scan-angle")
    spectra = angle_scan(
        stack, cfg.grid, cfg.scan.angles, cfg.scan.polarization,
        divergence=cfg.scan.divergence,
    )
    for sp in spectra:
        name = f"spectrum_{sp.angle:+08.3f}.csv"
        iomod.write_spectrum_csv(os.path.join(out_dir, name), sp)
    table = spectramod.build_dispersion(
        spectra, cfg.scan.channel, window=cfg.scan.window,
        min_prominence=cfg.scan.min_prominence,
    )
    path = os.path.join(out_dir, "dispersion.csv")
    iomod.write_dispersion_csv(path, table)
    click.echo(path)


@main.command("field-map")
@_config_opt
@_out_dir_opt
@click.option("--angle", type=float, default=None, help="Override the field-map angle (deg).")
@_translate_errors
def field_map_cmd(config_path, out_dir, angle):
    """|E(z, k)|^2 across the stack over a wavenumber grid."""
    cfg = load_config(config_path)
    stack = cfg.require_stack()
    settings = cfg.field_map
    grid = settings.grid if settings.grid is not None else cfg.grid
    angle = settings.angle if angle is None else angle
    z = default_z_grid(
        stack,
        z_step=settings.z_step,
        margin_ambient=settings.margin_ambient_nm,
        margin_substrate=settings.margin_substrate_nm,
    )
    fmap = field_map(stack, grid, z=z, angle=angle, polarization=settings.polarization)
    path = os.path.join(out_dir, "field_map.csv")
    iomod.write_field_map_csv(path, fmap)
    click.echo(path)


@main.command()
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--channel", type=click.Choice(["T", "R", "A"]), default="T", show_default=True)
@click.option("--window", default=None, help="Restrict analysis to lo:hi (cm^-1).")
@click.option("--min-prominence", type=float, default=None,
              help="Absolute prominence threshold (default: 5% of range).")
@click.option("--out-dir", default=None, type=click.Path(file_okay=False),
              help="Write analysis.json here instead of stdout.")
@_translate_errors
def analyze(csv_path, channel, window, min_prominence, out_dir):
    """Peaks and splittings of a spectrum CSV.

    Accepts the native k_cm1,T,R,A format or a two-column
    wavenumber,value file ('#' comments allowed)."""
    if window is not None:
        parts = window.split(":")
        if len(parts) != 2:
            raise ConfigError("--window must look like lo:hi")
        try:
            window = (float(parts[0]), float(parts[1]))
        except ValueError:
            raise ConfigError("--window must be numeric lo:hi") from None

    native = False
    with open(csv_path, "r", encoding="utf-8") as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            native = stripped.lower().startswith("k_cm1") and stripped.count(",") == 3
            break

    payload = {"source": os.path.basename(csv_path)}
    if native:
        spectrum = iomod.read_spectrum_csv(csv_path)
        payload["angle_deg"] = spectrum.angle
        payload["polarization"] = spectrum.polarization
        payload["channels"] = {
            ch: _channel_analysis(spectrum, ch, window, min_prominence)
            for ch in ("T", "R", "A")
        }
        payload["channel_requested"] = channel
    else:
        k, values = spectramod.load_measured(csv_path)
        peaks = spectramod.find_peaks(k, values, min_prominence=min_prominence, window=window)
        block = {"analyzed": "value", "peaks": [_peak_dict(p) for p in peaks]}
        if len(peaks) == 2:
            split = peaks[1].center - peaks[0].center
            block["splitting"] = {
                "omega_lower_cm1": round(peaks[0].center, 1),
                "omega_upper_cm1": round(peaks[1].center, 1),
                "splitting_cm1": round(split, 1),
                "splitting_mev": round(cm1_to_mev(split), 2),
            }
        else:
            block["splitting"] = None
        payload["channels"] = {"value": block}
    _emit_report(payload, out_dir, "analysis.json")


@main.command()
@_config_opt
@click.option("--out-dir", default=None, type=click.Path(file_okay=False),
              help="Write estimate.json here instead of stdout.")
@_translate_errors
def estimate(config_path, out_dir):
    """Scalar coupling estimates from the config's estimate section."""
    cfg = load_config(config_path)
    if cfg.estimate is None:
        raise ConfigError("config has no 'estimate' section")
    est = cfg.estimate
    payload = estimate_report(
        est.vibration, est.cavity, temperature_k=est.temperature_k,
        density=est.density, observed_splitting_mev=est.observed_splitting_mev,
        polariton_fwhm_mev=est.polariton_fwhm_mev,
    )
    _emit_report(payload, out_dir, "estimate.json")


@main.command()
@_config_opt
@_out_dir_opt
@click.option("--target", "target_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Measured two-column CSV (wavenumber, value).")
@click.option("--seed", type=int, default=None, help="Override the multi-start seed.")
@_translate_errors
def fit(config_path, out_dir, target_path, seed):
    """Fit the config's free stack parameters to measured data."""
    cfg = load_config(config_path)
    if cfg.fit is None:
        raise ConfigError("config has no 'fit' section")
    k, target = spectramod.load_measured(target_path)
    problem = cfg.fit_problem(k, target)
    seed = cfg.fit.seed if seed is None else seed
    result = fitmod.solve(problem, n_starts=cfg.fit.n_starts, seed=seed)

    best = np.array([result.params[p.path] for p in problem.free])
    model = fitmod.model_values(problem, best)
    lines = ["k_cm1,target,model"]
    for ki, ti, mi in zip(k, target, model):
        lines.append(",".join(repr(float(v)) for v in (ki, ti, mi)))
    curve_path = os.path.join(out_dir, "fit_curve.csv")
    iomod._write_text(curve_path, "\n".join(lines) + "\n")

    payload = {
        "params": result.params,
        "loss": result.loss,
        "success": result.success,
        "n_evaluations": result.n_evaluations,
        "start_losses": result.start_losses,
        "best_start": result.best_start,
        "seed": seed,
        "n_starts": cfg.fit.n_starts,
        "channel": problem.channel,
    }
    iomod.write_json(os.path.join(out_dir, "fit.json"), payload)
    click.echo(os.path.join(out_dir, "fit.json"))


if __name__ == "__main__":
    main()
