"""Command-line entry point.

``ampcat reproduce TARGET`` writes one CSV per figure panel (``coordinate,density``)
and a ``summary.json``; the other subcommands print a JSON object to stdout.
Exit status is 0 on success, 2 for bad flags or configuration and 3 when a
numerical check fails.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .amplifier import added_noise, caves_bound, output_moments
from .classical import basis_interference, make_slot_mixture, mixture_pr_x, plateau_flatness
from .measures import purity, purity_matched_gain, state_macroscopicity
from .phasespace import SQRT2, Grid1D, Grid2D
from .projection import fringe_period, fringe_visibility, pr_p, pr_x, project
from .states import PRESETS, AmplifiedCoherentState, SmearingSpec, ThermalCoherentState, p_form

TARGETS = ("fig3", "fig4", "fig5", "fig6", "gains")

DEFAULTS = {
    "alpha": 10.0,
    "g": 10.0,
    "target_purity": 0.01,
    "thermal": {"v": 100.0, "d": 100.0},
    "g_values": [1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0],
}
SERIES = {
    "fig3": ("decreasing", "uniform", "three_term"),
    "fig4": ("ideal", "two_term", "three_term"),
    "fig5": ("ideal", "two_term", "three_term"),
    "fig6": ("ideal", "two_term", "three_term"),
    "gains": ("ideal", "two_term", "three_term"),
}
CONFIG_KEYS = {"alpha", "g", "lambdas", "grid_x", "grid_p", "target_purity", "thermal", "g_values"}

# grid defaults: lobe reach in standard deviations, samples per deviation / per fringe
REACH_SIGMAS = 6.0
SAMPLES_PER_SIGMA = 20
SAMPLES_PER_FRINGE = 25
VISIBILITY_PERIODS = 3
VISIBILITY_SAMPLES = 200


class ConfigError(ValueError):
    pass


# --- configuration -----------------------------------------------------------

def _amplitude(value, key):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    raise ConfigError(f"{key} must be a number or [re, im]")


def _grid(value, key):
    if not isinstance(value, dict) or set(value) != {"lo", "hi", "n"}:
        raise ConfigError(f"{key} must be an object with keys lo, hi, n")
    return Grid1D(float(value["lo"]), float(value["hi"]), int(value["n"]))


def _series(value, target):
    if value is None:
        return [(name, PRESETS[name]) for name in SERIES[target]]
    if not isinstance(value, list) or not value:
        raise ConfigError("lambdas must be a list of numbers or a list of such lists")
    sets = [value] if all(isinstance(v, (int, float)) for v in value) else value
    out = []
    for i, lam in enumerate(sets):
        if not isinstance(lam, list) or not all(isinstance(v, (int, float)) for v in lam):
            raise ConfigError("lambdas must be a list of numbers or a list of such lists")
        lam = tuple(float(v) for v in lam)
        name = next((k for k, v in PRESETS.items() if v == lam), f"lambdas_{i}")
        out.append((name, lam))
    return out


def load_config(path, target):
    raw = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(raw) - CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    thermal = raw.get("thermal", DEFAULTS["thermal"])
    if not isinstance(thermal, dict) or set(thermal) - {"v", "d"}:
        raise ConfigError("thermal must be an object with keys v, d")
    g_values = raw.get("g_values", DEFAULTS["g_values"])
    if not isinstance(g_values, list) or not g_values:
        raise ConfigError("g_values must be a non-empty list")
    cfg = {
        "alpha": _amplitude(raw.get("alpha", DEFAULTS["alpha"]), "alpha"),
        "g": float(raw.get("g", DEFAULTS["g"])),
        "series": _series(raw.get("lambdas"), target),
        "target_purity": float(raw.get("target_purity", DEFAULTS["target_purity"])),
        "thermal_v": float(thermal.get("v", DEFAULTS["thermal"]["v"])),
        "thermal_d": _amplitude(thermal.get("d", DEFAULTS["thermal"]["d"]), "thermal.d"),
        "g_values": sorted(float(g) for g in g_values),
        "grid_x": _grid(raw["grid_x"], "grid_x") if "grid_x" in raw else None,
        "grid_p": _grid(raw["grid_p"], "grid_p") if "grid_p" in raw else None,
    }
    return cfg


def _echo(cfg):
    a, d = cfg["alpha"], cfg["thermal_d"]
    return {
        "alpha": [a.real, a.imag],
        "g": cfg["g"],
        "lambdas": {name: list(lam) for name, lam in cfg["series"]},
        "target_purity": cfg["target_purity"],
        "thermal": {"v": cfg["thermal_v"], "d": [d.real, d.imag]},
        "g_values": cfg["g_values"],
    }


# --- grids -------------------------------------------------------------------

def default_grid(state, axis):
    """Quadrature grid covering both lobes of the projected state and resolving its fringes."""
    form = p_form(state)
    c = complex(form.center)
    sigma = math.sqrt(form.normal_variance + 0.5)
    along, across = (c.real, c.imag) if axis == "x" else (c.imag, c.real)
    half = SQRT2 * abs(along) + REACH_SIGMAS * sigma
    h = sigma / SAMPLES_PER_SIGMA
    if across:
        h = min(h, fringe_period(across) / SAMPLES_PER_FRINGE)
    return Grid1D.centered(0.0, half, h)


def _visibility(ps):
    c = complex(p_form(ps.base).center)
    if not c.real:
        return 0.0
    period = fringe_period(c.real)
    grid = Grid1D.centered(0.0, VISIBILITY_PERIODS * period, period / VISIBILITY_SAMPLES)
    return fringe_visibility(pr_p(ps, grid, check_coverage=False))


def _orders(state):
    deg = p_form(state).degree
    return {"single": deg + 4, "pair": 2 * deg + 4}


# --- output ------------------------------------------------------------------

def write_csv(path: Path, coords, values):
    rows = "\n".join(f"{x!r},{y!r}" for x, y in zip(np.asarray(coords).tolist(), np.asarray(values).tolist()))
    path.write_text("coordinate,density\n" + rows + "\n")


def _write_summary(out: Path, target, cfg, body):
    doc = {"version": __version__, "target": target, "parameters": _echo(cfg), **body}
    (out / "summary.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _panel(out, name, dist):
    write_csv(out / name, dist.coords, dist.values)
    return {"file": name, "grid": dist.grid.as_dict(), "norm": dist.norm,
            "interference_suppressed": dist.interference_suppressed}


def _state_block(state, cfg, out, label, axes=("x", "p"), with_s=True):
    ps = project(state, "+")
    block = {
        "p_plus": ps.p_sign,
        "p_minus": 1.0 - ps.p_sign,
        "purity": purity(state),
        "purity_projected": purity(ps),
        "visibility": _visibility(ps),
        "quadrature_orders": _orders(state),
        "panels": {},
    }
    if with_s:
        block["macroscopicity"] = state_macroscopicity(ps)
    for axis in axes:
        grid = cfg[f"grid_{axis}"] or default_grid(state, axis)
        dist = (pr_x if axis == "x" else pr_p)(ps, grid)
        block["panels"][axis] = _panel(out, f"{label}_{axis}.csv", dist)
    return block


def _amp(cfg, lam, g=None):
    return AmplifiedCoherentState(cfg["alpha"], SmearingSpec(cfg["g"] if g is None else g, lam))


def reproduce(target, cfg, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    states = {}
    if target == "gains":
        gains = {name: purity_matched_gain(lam, cfg["target_purity"]) for name, lam in cfg["series"]}
        thermal = ThermalCoherentState(cfg["thermal_v"], cfg["thermal_d"])
        body = {"matched_gains": gains, "thermal_purity": purity(thermal),
                "bisection": {"xtol": 1e-10, "g_range": [1.0 + 1e-6, 1e3]}}
    elif target in ("fig3", "fig4"):
        if target == "fig4":
            thermal = ThermalCoherentState(cfg["thermal_v"], cfg["thermal_d"])
            states["thermal"] = _state_block(thermal, cfg, out, "fig4_thermal")
        for name, lam in cfg["series"]:
            block = _state_block(_amp(cfg, lam), cfg, out, f"{target}_{name}")
            states[name] = {"g": cfg["g"], "lambdas": list(lam), **block}
        body = {"states": states}
    elif target == "fig5":
        curves = {}
        for name, lam in cfg["series"]:
            s_values = [state_macroscopicity(project(_amp(cfg, lam, g), "+")) for g in cfg["g_values"]]
            write_csv(out / f"fig5_{name}.csv", cfg["g_values"], s_values)
            curves[name] = {"file": f"fig5_{name}.csv", "lambdas": list(lam),
                            "g": cfg["g_values"], "macroscopicity": s_values,
                            "quadrature_orders": _orders(_amp(cfg, lam))}
        body = {"curves": curves, "columns": {"coordinate": "g", "density": "S"}}
    elif target == "fig6":
        for name, lam in cfg["series"]:
            g = purity_matched_gain(lam, cfg["target_purity"])
            block = _state_block(_amp(cfg, lam, g), cfg, out, f"fig6_{name}", axes=("p",))
            states[name] = {"g": g, "lambdas": list(lam), **block}
        body = {"states": states}
    else:
        raise ConfigError(f"unknown target {target!r}")
    _write_summary(out, target, cfg, body)


# --- single computations ------------------------------------------------------

def _lambdas(values):
    return tuple(values) if values else (1.0,)


def cmd_amplify(args):
    state = AmplifiedCoherentState(complex(args.alpha, args.alpha_im), SmearingSpec(args.g, _lambdas(args.lambdas)))
    mean, var = output_moments(state)
    return {"mean": [mean.real, mean.imag], "variance": var, "caves_bound": caves_bound(args.g),
            "added_noise": added_noise(state), "purity": purity(state)}


def cmd_project(args):
    state = AmplifiedCoherentState(complex(args.alpha, args.alpha_im), SmearingSpec(args.g, _lambdas(args.lambdas)))
    ps = project(state, "+")
    return {"p_plus": ps.p_sign, "p_minus": 1.0 - ps.p_sign}


def cmd_measure(args):
    state = AmplifiedCoherentState(complex(args.alpha, args.alpha_im), SmearingSpec(args.g, _lambdas(args.lambdas)))
    target = project(state, args.sign) if args.sign else state
    want_all = not (args.purity or args.macroscopicity or args.visibility)
    out = {}
    if args.purity or want_all:
        out["purity"] = purity(target)
    if args.macroscopicity:
        out["macroscopicity"] = state_macroscopicity(target)
    if args.visibility:
        out["visibility"] = _visibility(target if args.sign else project(state, "+"))
    return out


def cmd_classical(args):
    mix = make_slot_mixture(complex(args.slot, args.slot_im), args.radius, args.n)
    out = {}
    if args.interference or not args.flatness:
        reach = abs(mix.slot_center) + args.radius + 1.0
        axis = Grid1D.centered(0.0, reach, args.radius / 20.0)
        rep = basis_interference(mix, Grid2D(axis, axis))
        out.update({"ratio": rep.ratio, "log10_ratio": rep.log10_ratio, "suppressed": rep.suppressed})
    if args.flatness:
        centre = SQRT2 * mix.slot_center.real
        grid = Grid1D.centered(centre, SQRT2 * args.radius + 6.0, 0.01)
        values = mixture_pr_x(mix, grid)
        out["flatness"] = plateau_flatness(values, grid, centre, SQRT2 * args.radius / 3.0)
    return out


# --- argument parsing --------------------------------------------------------

def _state_flags(p):
    p.add_argument("--alpha", type=float, default=DEFAULTS["alpha"], help="input amplitude (real part)")
    p.add_argument("--alpha-im", type=float, default=0.0, help="input amplitude (imaginary part)")
    p.add_argument("--g", type=float, default=DEFAULTS["g"], help="amplitude gain, > 1")
    p.add_argument("--lambdas", type=float, nargs="+", default=None, help="ancilla eigenvalues (sum 1)")


def build_parser():
    parser = argparse.ArgumentParser(prog="ampcat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("reproduce", help="write CSV panels and summary.json for a figure")
    rep.add_argument("target", choices=TARGETS)
    rep.add_argument("--config", help="JSON config overriding the built-in parameters")
    rep.add_argument("--out-dir", default=".", help="output directory")

    amp = sub.add_parser("amplify", help="output moments and noise of an amplified coherent state")
    _state_flags(amp)
    amp.set_defaults(func=cmd_amplify)

    prj = sub.add_parser("project", help="parity outcome probabilities")
    _state_flags(prj)
    prj.set_defaults(func=cmd_project)

    mea = sub.add_parser("measure", help="purity, macroscopicity or fringe visibility")
    _state_flags(mea)
    mea.add_argument("--sign", choices=["+", "-"], default=None, help="measure the projected state")
    mea.add_argument("--purity", action="store_true")
    mea.add_argument("--macroscopicity", action="store_true")
    mea.add_argument("--visibility", action="store_true")
    mea.set_defaults(func=cmd_measure)

    cla = sub.add_parser("classical", help="coarse-grained slot mixture diagnostics")
    cla.add_argument("--slot", type=float, required=True, help="slot centre (real part)")
    cla.add_argument("--slot-im", type=float, default=0.0)
    cla.add_argument("--radius", type=float, default=1.0)
    cla.add_argument("--n", type=int, default=100)
    cla.add_argument("--interference", action="store_true")
    cla.add_argument("--flatness", action="store_true")
    cla.set_defaults(func=cmd_classical)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "reproduce":
            reproduce(args.target, load_config(args.config, args.target), Path(args.out_dir))
        else:
            print(json.dumps(args.func(args), sort_keys=True))
    except ArithmeticError as exc:
        print(f"ampcat: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError) as exc:
        print(f"ampcat: invalid input: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
