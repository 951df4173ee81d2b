"""Command-line frontend.

Six subcommands: ``simulate`` (trace a reduced evolution to CSV/JSON),
``readout`` (print the read-out time and probability), ``sweep-phase``,
``scaling``, ``trials`` (experiment drivers), and ``verify`` (the
acceptance suite).

Option values resolve with precedence: built-in defaults < config file
< preset < explicit flags.  The config file is flat ``key = value``
lines (``#`` comments allowed); keys match flag names with either ``-``
or ``_``.  The environment variable ``HSEARCH_SEED`` supplies the
default seed.  Outputs are deterministic: identical inputs give
byte-identical files — metadata rides in ``#``-prefixed header and
footer lines, data floats carry 15 significant digits, and nothing
timestamps.

Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import functools
import json
import math
import os
import sys

import click
import numpy as np

from . import closedform, evolution, experiments, verification
from .core import NumericalError, ValidationError, make_params

EXIT_NUMERICAL = 1
EXIT_USAGE = 2

_DEFAULTS = {"energy": 1.0, "a": 1.0, "d": 1.0, "r": 1.0, "phi": 0.0}

PRESETS = ("farhi", "fenner", "perfect", "new")


def _handled(fn):
    """Map package errors onto the exit-code contract."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        except NumericalError as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)

    return wrapper


# --------------------------------------------------------------------------
# Config file and value resolution
# --------------------------------------------------------------------------

def _load_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    config: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidationError(
                    f"{path}:{lineno}: expected 'key = value', got {line!r}"
                )
            key, _, value = line.partition("=")
            config[key.strip().replace("-", "_")] = value.strip()
    return config


def _from_config(config: dict[str, str], name: str, cast):
    try:
        return cast(config[name])
    except ValueError as exc:
        raise ValidationError(f"config value {name} = {config[name]!r}: {exc}") from None


def _resolve(name, flag, config, default, cast=float, preset_vals=None):
    """Precedence: flag > preset > config > default."""
    if flag is not None:
        return flag
    if preset_vals and name in preset_vals:
        return preset_vals[name]
    if name in config:
        return _from_config(config, name, cast)
    return default


def _preset_values(preset: str | None, overlap: float | None) -> dict[str, float]:
    if preset is None:
        return {}
    if preset == "farhi":
        return {"a": 1.0, "d": 1.0, "r": 0.0, "phi": 0.0}
    if preset == "perfect":
        return {"a": 1.0, "d": 1.0, "r": 1.0, "phi": 0.0}
    if preset == "new":
        return {"a": 0.0, "d": 0.0, "r": 1.0, "phi": 0.0}
    if preset == "fenner":
        if overlap is None:
            raise ValidationError(
                "the fenner preset ties r = 2x to the overlap; provide --overlap"
            )
        return {"a": 0.0, "d": 0.0, "r": 2.0 * overlap, "phi": math.pi / 2}
    raise ValidationError(f"unknown preset {preset!r}")


def _resolve_overlap(flag, config, required=True):
    x = _resolve("overlap", flag, config, None)
    if x is None and required:
        raise ValidationError("an overlap is required; pass --overlap or set it in the config")
    return x


def _resolve_params(energy, a, d, r, phi, preset, config, overlap=None):
    preset_vals = _preset_values(preset, overlap)
    return make_params(
        _resolve("energy", energy, config, _DEFAULTS["energy"]),
        _resolve("a", a, config, _DEFAULTS["a"], preset_vals=preset_vals),
        _resolve("d", d, config, _DEFAULTS["d"], preset_vals=preset_vals),
        _resolve("r", r, config, _DEFAULTS["r"], preset_vals=preset_vals),
        _resolve("phi", phi, config, _DEFAULTS["phi"], preset_vals=preset_vals),
    )


def _resolve_seed(flag, config) -> int:
    if flag is not None:
        return flag
    if "seed" in config:
        return _from_config(config, "seed", int)
    env = os.environ.get("HSEARCH_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"HSEARCH_SEED={env!r} is not an integer") from None
    return 0


# --------------------------------------------------------------------------
# Deterministic serialization
# --------------------------------------------------------------------------

def _fnum(v) -> str:
    return f"{float(v):.15g}"


def _meta_str(v) -> str:
    if isinstance(v, float):
        return _fnum(v)
    return str(v)


def _emit(command, meta, columns, rows, footer, out, fmt) -> None:
    if fmt == "csv":
        lines = [f"# hsearch {command}"]
        lines += [f"# {k} = {_meta_str(meta[k])}" for k in sorted(meta)]
        lines.append(",".join(columns))
        lines += [",".join(_fnum(v) for v in row) for row in rows]
        lines += [f"# {k} = {_meta_str(footer[k])}" for k in footer]
        text = "\n".join(lines) + "\n"
    else:
        doc = {
            "command": command,
            "config": meta,
            "columns": list(columns),
            "rows": [[float(v) for v in row] for row in rows],
            "footer": dict(footer),
        }
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _params_meta(params) -> dict:
    return {
        "energy": params.energy,
        "a": params.a,
        "d": params.d,
        "r": params.r,
        "phi": params.phi,
    }


# --------------------------------------------------------------------------
# Shared options
# --------------------------------------------------------------------------

def _param_options(fn):
    opts = [
        click.option("--energy", type=float, default=None, help="Overall scale E > 0 [default 1]."),
        click.option("--a", type=float, default=None, help="Target-projector weight [default 1]."),
        click.option("--d", type=float, default=None, help="Initial-projector weight [default 1]."),
        click.option("--r", type=float, default=None, help="Coupling magnitude >= 0 [default 1]."),
        click.option("--phi", type=float, default=None, help="Coupling phase in radians [default 0]."),
        click.option("--preset", type=click.Choice(PRESETS), default=None,
                     help="Named parameter set; individual flags still override."),
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="Flat key = value config file."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _output_options(fn):
    fn = click.option("--format", "fmt", type=click.Choice(("csv", "json")),
                      default="csv", help="Output format.")(fn)
    fn = click.option("--out", default="-", help="Output path, or - for stdout.")(fn)
    return fn


@click.group()
def main():
    """Two-level quantum search: exact evolution, closed forms, experiments."""


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------

@main.command("simulate")
@_param_options
@click.option("--overlap", type=float, default=None, help="Overlap x in (0, 1).")
@click.option("--t-max", type=float, default=None, help="End of the time grid.")
@click.option("--steps", type=int, default=None, help="Number of samples [default 200].")
@_output_options
@_handled
def cmd_simulate(energy, a, d, r, phi, preset, config_path, overlap, t_max, steps, out, fmt):
    """Trace the reduced evolution on a uniform time grid."""
    config = _load_config(config_path)
    x = _resolve_overlap(overlap, config)
    params = _resolve_params(energy, a, d, r, phi, preset, config, x)
    t_end = _resolve("t_max", t_max, config, None)
    if t_end is None:
        raise ValidationError("a time grid is required; pass --t-max")
    n_steps = _resolve("steps", steps, config, 200, cast=int)

    trace = evolution.probability_trace(params, x, t_end, n_steps)
    rows = [
        (t, p, aw.real, aw.imag, ar.real, ar.imag)
        for t, p, (aw, ar) in zip(trace.times, trace.probs, trace.amplitudes)
    ]
    meta = _params_meta(params) | {"overlap": x, "t_max": t_end, "steps": n_steps}
    _emit("simulate", meta, ("t", "P", "re_w", "im_w", "re_r", "im_r"), rows, {}, out, fmt)


# --------------------------------------------------------------------------
# readout
# --------------------------------------------------------------------------

@main.command("readout")
@_param_options
@click.option("--overlap", type=float, default=None, help="Overlap x in (0, 1).")
@_handled
def cmd_readout(energy, a, d, r, phi, preset, config_path, overlap):
    """Print the read-out time T and the success probability P(T)."""
    config = _load_config(config_path)
    x = _resolve_overlap(overlap, config)
    params = _resolve_params(energy, a, d, r, phi, preset, config, x)
    t_read = closedform.readout_time(params, x)
    p = min(max(evolution.success_probability(params, x, t_read), 0.0), 1.0)
    click.echo(f"T={t_read:.12f} P={p:.12f}")


# --------------------------------------------------------------------------
# sweep-phase
# --------------------------------------------------------------------------

@main.command("sweep-phase")
@_param_options
@click.option("--overlap", type=float, default=None, help="Overlap x in (0, 1).")
@click.option("--phi-min", type=float, default=None, help="Grid start [default 0].")
@click.option("--phi-max", type=float, default=None, help="Grid end [default pi].")
@click.option("--points", type=int, default=None, help="Grid size [default 9].")
@_output_options
@_handled
def cmd_sweep_phase(energy, a, d, r, phi, preset, config_path, overlap,
                    phi_min, phi_max, points, out, fmt):
    """Sweep the coupling phase and report P(T) and T per grid point.

    The --phi flag is ignored here; the phase comes from the grid.
    """
    config = _load_config(config_path)
    x = _resolve_overlap(overlap, config)
    params = _resolve_params(energy, a, d, r, phi, preset, config, x)
    lo = _resolve("phi_min", phi_min, config, 0.0)
    hi = _resolve("phi_max", phi_max, config, math.pi)
    n = _resolve("points", points, config, 9, cast=int)
    if n < 1:
        raise ValidationError(f"--points must be at least 1, got {n}")

    report = experiments.phase_sweep(
        params.a, params.d, params.r, params.energy, x, np.linspace(lo, hi, n))
    rows = list(zip(report.axis_values, report.probabilities, report.readout_times))
    meta = _params_meta(params) | {
        "overlap": x, "phi_min": lo, "phi_max": hi, "points": n}
    del meta["phi"]  # swept, not fixed
    footer = {}
    if report.monotone_first_quadrant is not None:
        footer["monotone_first_quadrant"] = str(report.monotone_first_quadrant).lower()
    _emit("sweep-phase", meta, ("phi", "P", "T"), rows, footer, out, fmt)


# --------------------------------------------------------------------------
# scaling
# --------------------------------------------------------------------------

@main.command("scaling")
@click.option("--family", type=click.Choice(experiments.FAMILIES), default=None,
              help="Hamiltonian family.")
@click.option("--n-list", default=None,
              help="Comma-separated sizes [default 4,16,64,256,1024,4096].")
@click.option("--energy", type=float, default=None, help="Overall scale E [default 1].")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Flat key = value config file.")
@_output_options
@_handled
def cmd_scaling(family, n_list, energy, config_path, out, fmt):
    """Fit the read-out-time exponent T ~ N^slope with x = 1/sqrt(N)."""
    config = _load_config(config_path)
    family = _resolve("family", family, config, None, cast=str)
    if family is None:
        raise ValidationError(f"--family is required; choose one of {experiments.FAMILIES}")
    raw = _resolve("n_list", n_list, config, "4,16,64,256,1024,4096", cast=str)
    try:
        sizes = [int(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"--n-list must be comma-separated integers, got {raw!r}") from None
    e = _resolve("energy", energy, config, 1.0)

    report = experiments.scaling_study(family, sizes, e)
    rows = list(zip(report.sizes, report.overlaps, report.readout_times))
    meta = {"family": family, "energy": e, "n_list": raw}
    footer = {
        "slope": report.slope,
        "intercept": report.intercept,
        "residual_rms": report.residual_rms,
    }
    _emit("scaling", meta, ("N", "x", "T"), rows, footer, out, fmt)


# --------------------------------------------------------------------------
# trials
# --------------------------------------------------------------------------

@main.command("trials")
@_param_options
@click.option("--n", "dim", type=int, default=None, help="Hilbert-space dimension N.")
@click.option("--targets", type=int, default=None, help="Number of marked states M.")
@click.option("--trials", "n_trials", type=int, default=None, help="Trial count [default 50].")
@click.option("--seed", type=int, default=None,
              help="RNG seed [default: HSEARCH_SEED or 0].")
@_output_options
@_handled
def cmd_trials(energy, a, d, r, phi, preset, config_path, dim, targets,
               n_trials, seed, out, fmt):
    """Random-initialization trials: evolve each draw to its own T and
    record the target-subspace probability."""
    config = _load_config(config_path)
    params = _resolve_params(energy, a, d, r, phi, preset, config)
    dim = _resolve("n", dim, config, None, cast=int)
    targets = _resolve("targets", targets, config, None, cast=int)
    if dim is None or targets is None:
        raise ValidationError("--n and --targets are required")
    n_trials = _resolve("trials", n_trials, config, 50, cast=int)
    seed = _resolve_seed(seed, config)

    report = experiments.random_init_trials(dim, targets, n_trials, seed, params)
    rows = [
        (i, report.overlaps[i], report.probabilities[i])
        for i in range(report.trials)
    ]
    meta = _params_meta(params) | {
        "n": dim, "targets": targets, "trials": n_trials, "seed": seed}
    footer = {
        "min_P": report.min_probability,
        "max_P": report.max_probability,
        "mean_P": report.mean_probability,
        "redraws": report.redraws,
    }
    _emit("trials", meta, ("trial", "x", "P"), rows, footer, out, fmt)


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

@main.command("verify")
@click.option("--only", default=None,
              help="Run only criteria whose name contains this substring.")
@click.option("--tolerance", type=float, default=None,
              help="Override every default threshold with one value.")
@_handled
def cmd_verify(only, tolerance):
    """Run the acceptance suite and report pass/fail per criterion."""
    results = verification.run_all(only=only, tolerance=tolerance)
    for result in results:
        click.echo(result.line())
    failed = [r for r in results if not r.passed]
    if failed:
        click.echo(f"{len(failed)} of {len(results)} criteria failed", err=True)
        sys.exit(EXIT_NUMERICAL)
    click.echo(f"all {len(results)} criteria passed")


if __name__ == "__main__":
    main()
