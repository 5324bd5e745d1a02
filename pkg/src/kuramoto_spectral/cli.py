"""Command-line front end: config parsing, subcommands, and the verify suite.

Subcommands: ``transition``, ``poles``, ``eta``, ``simulate``, ``bifurcate``,
``eval-F``, ``verify``.  Outputs are deterministic: identical configuration
and seed produce byte-identical files.  Exit codes: 0 success, 1 check
failure, 2 configuration error, 3 numerical-method failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bifurcation import amplitude_model, bifurcation_diagram, predicted_rc
from .density import SpectralDensity, builtin_density, make_quadrature, sampling_rule
from .errors import ConfigError, KuramotoSpectralError
from .lindyn import constant_one, direct_integration, predict_eta
from .resolvent import boundary_value, closed_form_D, continued_resolvent_F, hilbert_transform
from .simulate import make_ensemble, simulate_finite_N, simulate_galerkin
from .spectrum import SearchWindow, check_simplicity, count_zeros, find_roots
from .transition import instability_windows, transition_point

try:  # 3.11+
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

_CONFIG_KEYS = {"density", "resolution", "newton_tol", "dt", "seed", "out"}


@dataclass
class RunConfig:
    """Fully resolved run configuration with documented defaults."""

    density_kind: str = "gaussian"
    density_params: list | None = None
    resolution: int = 256
    newton_tol: float = 1e-10
    dt: float | None = None
    seed: int | None = None
    out: str | None = None
    command_args: dict = field(default_factory=dict)

    def density(self) -> SpectralDensity:
        try:
            return builtin_density(self.density_kind, self.density_params)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"density: {exc}") from exc

    def hash(self) -> str:
        blob = json.dumps(
            {
                "density": [self.density_kind, self.density_params],
                "resolution": self.resolution,
                "newton_tol": self.newton_tol,
                "dt": self.dt,
                "seed": self.seed,
                "args": {k: v for k, v in sorted(self.command_args.items())},
            },
            sort_keys=True,
            default=str,
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file: {exc}") from exc
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "density" in data:
        d = data["density"]
        if not isinstance(d, dict) or "kind" not in d:
            raise ConfigError("density: expected a table with a 'kind' field")
        extra = set(d) - {"kind", "params"}
        if extra:
            raise ConfigError(f"density: unknown fields {sorted(extra)}")
    return data


def parse_config(args: argparse.Namespace) -> RunConfig:
    """Merge config file values and command-line flags (flags win)."""
    cfg = RunConfig()
    if getattr(args, "config", None):
        data = _load_config_file(args.config)
        if "density" in data:
            cfg.density_kind = data["density"]["kind"]
            cfg.density_params = data["density"].get("params")
        for key in ("resolution", "newton_tol", "dt", "seed", "out"):
            if key in data:
                setattr(cfg, key, data[key])
    if getattr(args, "density", None):
        cfg.density_kind = args.density
        cfg.density_params = None
    if getattr(args, "density_params", None):
        try:
            cfg.density_params = json.loads(args.density_params)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"density-params: {exc}") from exc
        if not isinstance(cfg.density_params, list):
            cfg.density_params = [cfg.density_params]
    for key in ("resolution", "newton_tol", "dt", "seed", "out"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    if cfg.resolution <= 0 or cfg.newton_tol <= 0 or (cfg.dt is not None and cfg.dt <= 0):
        raise ConfigError("tolerances and resolutions must be positive")
    cfg.command_args = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func", "config", "density", "density_params", "resolution", "newton_tol", "dt", "seed", "out")
        and v is not None
    }
    return cfg


# -- deterministic output helpers ------------------------------------------


def _meta_lines(cfg: RunConfig) -> list[str]:
    density = {"kind": cfg.density_kind, "params": cfg.density_params}
    return [
        f"# tool=kuramoto-spectral {__version__}",
        f"# config_hash={cfg.hash()}",
        f"# density={json.dumps(density, sort_keys=True)}",
    ]


def _write_csv(path: str | None, cfg: RunConfig, header: list[str], rows) -> None:
    lines = _meta_lines(cfg) + [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


def _write_json(path: str | None, cfg: RunConfig, payload: dict) -> None:
    out = {
        "tool_version": __version__,
        "config_hash": cfg.hash(),
        "density": {"kind": cfg.density_kind, "params": cfg.density_params},
    }
    out.update(payload)
    text = json.dumps(out, indent=2, sort_keys=False, default=_json_default) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serializable: {type(x)}")


# -- subcommands -------------------------------------------------------------


def _cmd_transition(args) -> int:
    cfg = parse_config(args)
    g = cfg.density()
    report = transition_point(g)
    windows = []
    if args.k_max is not None:
        windows = instability_windows(g, args.k_max)
    _write_json(
        cfg.out,
        cfg,
        {
            "critical_ys": list(report.critical_ys),
            "candidate_Ks": [k if math.isfinite(k) else "inf" for k in report.candidate_Ks],
            "K_c": report.K_c if math.isfinite(report.K_c) else "inf",
            "kuramoto_point": report.kuramoto_point,
            "windows": [[lo, hi if math.isfinite(hi) else "inf"] for lo, hi in windows],
        },
    )
    return 0


def _cmd_poles(args) -> int:
    cfg = parse_config(args)
    g = cfg.density()
    re0, re1, im0, im1 = (float(x) for x in args.window.split(","))
    window = SearchWindow(re0, re1, im0, im1)
    roots = find_roots(g, args.k, window, newton_tol=cfg.newton_tol)
    rows = [
        (r.lam.real, r.lam.imag, r.kind, r.multiplicity, r.residue_coeff.real, r.residue_coeff.imag, r.newton_residual)
        for r in roots
    ]
    _write_csv(cfg.out, cfg, ["re_lambda", "im_lambda", "kind", "multiplicity", "re_D", "im_D", "residual"], rows)
    return 0


def _cmd_eta(args) -> int:
    cfg = parse_config(args)
    g = cfg.density()
    times = np.linspace(0.0, args.t_max, args.samples)
    rows = []
    phi = constant_one()
    if args.method in ("predict", "both"):
        traj = predict_eta(g, args.k, phi, times, strip_depth=args.strip_depth, rule=make_quadrature(g, cfg.resolution))
        rows += [(t, v.real, v.imag, traj.source) for t, v in zip(traj.times, traj.values)]
    if args.method in ("integrate", "both"):
        traj = direct_integration(g, args.k, phi, times, rule=sampling_rule(g), dt=cfg.dt)
        rows += [(t, v.real, v.imag, traj.source) for t, v in zip(traj.times, traj.values)]
    _write_csv(cfg.out, cfg, ["t", "re_eta", "im_eta", "source"], rows)
    return 0


def _cmd_simulate(args) -> int:
    cfg = parse_config(args)
    g = cfg.density()
    if args.backend == "finite-n":
        ens = make_ensemble(g, args.n, args.k, seed=cfg.seed, eps_h=args.eps_h)
        traj = simulate_finite_N(ens, args.t_max, dt=cfg.dt)
    else:
        rule = sampling_rule(g, args.nodes) if args.nodes else None
        traj = simulate_galerkin(
            g, args.k, J=args.modes, rule=rule, phi_init=(args.eps_h,), T=args.t_max, dt=cfg.dt, closure=args.closure
        )
    rows = [(t, v.real, v.imag, traj.source) for t, v in zip(traj.times, traj.values)]
    _write_csv(cfg.out, cfg, ["t", "re_eta", "im_eta", "source"], rows)
    return 0


def _cmd_bifurcate(args) -> int:
    cfg = parse_config(args)
    g = cfg.density()
    grid = np.linspace(args.k_min, args.k_max, args.k_steps)
    params = {"backend": args.backend, "seed": cfg.seed}
    if args.t_max is not None:
        params["T"] = args.t_max
    curve = bifurcation_diagram(g, grid, params)
    _write_csv(cfg.out, cfg, ["K", "r_theory", "r_sim", "sim_stderr", "converged"], curve.rows)
    return 0


def _cmd_eval_f(args) -> int:
    cfg = parse_config(args)
    g = cfg.density()
    re, im = (float(x) for x in getattr(args, "lambda").split(","))
    val = continued_resolvent_F(g, complex(re, im))
    _write_json(
        cfg.out,
        cfg,
        {"lambda": {"re": re, "im": im}, "F": {"re": val.value.real, "im": val.value.imag}, "sheet": val.sheet, "method": val.method},
    )
    return 0


# -- verify -------------------------------------------------------------------


def _verify_checks(overrides: dict | None = None):
    """Golden and property checks; each yields (name, computed, expected, tol, mode)."""
    dens = {
        name: builtin_density(name)
        for name in ("gaussian", "lorentzian", "two_step", "bimodal_linear", "multiband")
    }
    if overrides:
        dens.update(overrides)
    g, lor = dens["gaussian"], dens["lorentzian"]
    two, bim, multi = dens["two_step"], dens["bimodal_linear"], dens["multiband"]

    checks = []

    def add(name, computed, expected, tol, mode="abs"):
        checks.append((name, computed, expected, tol, mode))

    # transition goldens
    add("K_c_gaussian", transition_point(g).K_c, 2 * math.sqrt(2 / math.pi), 1e-6)
    add("K_c_lorentzian", transition_point(lor).K_c, 2.0, 1e-9)
    rep2 = transition_point(two)
    for want, got in zip((-0.706, -0.044, 0.567), rep2.critical_ys):
        add(f"two_step_ordinate_{want}", got, want, 1e-3)
    add("K_c_two_step", rep2.K_c, 2 / math.pi, 1e-6)
    repb = transition_point(bim)
    add("bimodal_positive_ordinate", max(repb.critical_ys), 0.7459, 1e-3)
    add("K_c_bimodal", repb.K_c, 2 / (math.pi * 1.9671), 1e-3, "rel")
    wins = instability_windows(multi, 0.4)
    add("multiband_window1_lo", wins[0][0], 0.0909, 1e-3)
    add("multiband_window1_hi", wins[0][1], 0.1604, 1e-3)
    add("multiband_window2_lo", wins[1][0], 0.1616, 1e-3)
    add("multiband_window2_open", 0.0 if math.isinf(wins[1][1]) else 1.0, 0.0, 0.5)

    # resolvent values
    add("lorentzian_D_at_1", closed_form_D(lor, 1.0), 0.5, 1e-12)
    add("gaussian_boundary_value_0", boundary_value(g, 0.0).real, math.sqrt(math.pi / 2), 1e-12)
    from scipy.integrate import quad

    a1 = math.exp(0.5) * (math.sqrt(math.pi / 2) - quad(lambda x: math.exp(-(x**2) / 2), 0, -1)[0])
    add("gaussian_F_at_minus_1", continued_resolvent_F(g, -1.0).value.real, a1, 1e-8)
    add("gaussian_hilbert_0", hilbert_transform(g, 0.0), 0.0, 1e-12)

    # pole suite at K = 1
    window = SearchWindow(-8.0, 0.05, -10.0, 10.0, grid_resolution=161)
    roots = find_roots(g, 1.0, window)
    lams = np.array([r.lam for r in roots])
    conj_gap = max(min(abs(np.conj(l) - lams)) for l in lams)
    add("gaussian_poles_count_ge_10", float(len(roots)), 10.0, float(len(roots)) - 10.0 if len(roots) >= 10 else -1.0)
    add("gaussian_poles_conjugation", conj_gap, 0.0, 1e-8)
    add("gaussian_poles_one_real", float(sum(1 for l in lams if abs(l.imag) < 1e-9)), 1.0, 0.1)
    deep = lams[np.argsort(lams.real)[:4]]
    ray_dev = max(min(abs(abs(np.angle(l)) - 3 * math.pi / 4), abs(abs(np.angle(l)) - 5 * math.pi / 4)) for l in deep)
    add("gaussian_poles_ray_approach", ray_dev, 0.0, 0.1)
    fprime = np.array([2 * l / 1.0 - 1 for l in lams])
    add("gaussian_poles_simplicity_margin", float(np.min(np.abs(fprime))), 1.0, 1.0, "ge-tol")
    # analytic versus numerical derivative of G at the first pole
    from .resolvent import characteristic_G, characteristic_G_derivative

    lam0 = lams[np.argmax(lams.real)]
    h = 1e-6
    num = (characteristic_G(g, 1.0, lam0 + h) - characteristic_G(g, 1.0, lam0 - h)) / (2 * h)
    ana = characteristic_G_derivative(g, 1.0, lam0)
    add("gaussian_G_derivative_consistency", abs(num - ana) / abs(ana), 0.0, 1e-6)
    add("simplicity_all", 1.0 if check_simplicity(roots).all_simple else 0.0, 1.0, 0.1)

    # count consistency on a straddling window
    add(
        "count_matches_roots",
        float(count_zeros(g, 1.0, window)),
        float(sum(r.multiplicity for r in roots)),
        0.1,
    )

    # quadrature normalization
    for name in ("gaussian", "lorentzian", "two_step", "bimodal_linear"):
        rule = make_quadrature(dens[name], 256)
        add(f"quadrature_mass_{name}", float(np.sum(rule.weights)), 1.0, 1e-10)

    # linear theory: exact lorentzian decay and the t = 0 identity
    times = np.linspace(0.0, 10.0, 41)
    pred = predict_eta(lor, 1.0, constant_one(), times)
    add("lorentzian_eta_exact", float(np.max(np.abs(pred.values - np.exp(-times / 2)))), 0.0, 1e-10)
    predg = predict_eta(g, 1.0, constant_one(), np.array([0.0, 1.0]), strip_depth=3.0)
    add("gaussian_eta0_identity", abs(predg.values[0] - 1.0), 0.0, 1e-4)

    # amplitude equation coefficients
    ml = amplitude_model(lor)
    add("lorentzian_D0", ml.D0.real, 1.0, 1e-10)
    add("lorentzian_cubic_coeff", ml.cubic_coeff, -2.0, 1e-10)
    mg = amplitude_model(g)
    add("gaussian_D0_positive", 1.0 if mg.D0.real > 0 else 0.0, 1.0, 0.1)
    add("gaussian_rc_prefactor", predicted_rc(mg, mg.K_c + 1.0), math.sqrt(math.pi * math.sqrt(2 * math.pi) / 4), 1e-6)
    return checks


def run_verify(out_path: str | None = None, overrides: dict | None = None) -> int:
    """Run the golden/property suite; nonzero exit on any failure."""
    checks = _verify_checks(overrides)
    results = []
    n_fail = 0
    for name, computed, expected, tol, mode in checks:
        computed_f = float(np.real(computed))
        if mode == "rel":
            ok = abs(computed_f - expected) <= tol * abs(expected)
        elif mode == "ge-tol":
            ok = computed_f >= 1e-3
        else:
            ok = abs(computed_f - expected) <= tol
        n_fail += not ok
        results.append(
            {"check": name, "computed": computed_f, "expected": expected, "tolerance": tol, "passed": bool(ok)}
        )
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: computed={computed_f!r} expected={expected!r} tol={tol!r}")
    payload = {"n_checks": len(results), "n_failed": n_fail, "checks": results}
    for row in results:
        if row["check"] in ("K_c_gaussian", "K_c_lorentzian", "K_c_two_step"):
            payload[row["check"]] = row["computed"]
    if out_path:
        cfg = RunConfig()
        _write_json(out_path, cfg, payload)
    print(f"{len(results)} checks, {n_fail} failed")
    return 1 if n_fail else 0


def _cmd_verify(args) -> int:
    return run_verify(out_path=getattr(args, "out", None))


# -- entry point --------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML run-config file")
    p.add_argument("--density", help="built-in density kind")
    p.add_argument("--density-params", help="JSON-encoded density parameters")
    p.add_argument("--resolution", type=int, help="quadrature resolution (default 256)")
    p.add_argument("--newton-tol", type=float, dest="newton_tol", help="Newton tolerance (default 1e-10)")
    p.add_argument("--dt", type=float, help="integrator step override")
    p.add_argument("--seed", type=int, help="RNG seed for i.i.d. sampling")
    p.add_argument("--out", help="output file (stdout if omitted)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kuramoto-spectral", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transition", help="critical ordinates, K_c, optional instability windows")
    p.add_argument("--k-max", type=float, default=None, help="also scan instability windows up to this K")
    p.set_defaults(func=_cmd_transition)
    _add_common(p)

    p = sub.add_parser("poles", help="locate eigenvalues/resonance poles in a window")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--window", required=True, help="re0,re1,im0,im1")
    p.set_defaults(func=_cmd_poles)
    _add_common(p)

    p = sub.add_parser("eta", help="linearized order parameter: prediction and/or direct integration")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--method", choices=("predict", "integrate", "both"), default="both")
    p.add_argument("--strip-depth", type=float, default=3.0)
    p.set_defaults(func=_cmd_eta)
    _add_common(p)

    p = sub.add_parser("simulate", help="nonlinear simulation (finite-N or mode hierarchy)")
    p.add_argument("--backend", choices=("finite-n", "galerkin"), default="galerkin")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--t-max", type=float, default=100.0)
    p.add_argument("--n", type=int, default=10_000, help="oscillator count (finite-n)")
    p.add_argument("--modes", type=int, default=16, help="mode cutoff J (galerkin)")
    p.add_argument("--nodes", type=int, default=None, help="frequency nodes (galerkin)")
    p.add_argument("--eps-h", type=float, default=1e-2, dest="eps_h", help="initial first Fourier coefficient")
    p.add_argument("--closure", choices=("truncate", "geometric"), default="truncate")
    p.set_defaults(func=_cmd_simulate)
    _add_common(p)

    p = sub.add_parser("bifurcate", help="theory-vs-simulation bifurcation curve")
    p.add_argument("--k-min", type=float, required=True)
    p.add_argument("--k-max", type=float, required=True)
    p.add_argument("--k-steps", type=int, default=5)
    p.add_argument("--backend", choices=("galerkin", "finite-n"), default="galerkin")
    p.add_argument("--t-max", type=float, default=None)
    p.set_defaults(func=_cmd_bifurcate)
    _add_common(p)

    p = sub.add_parser("eval-F", help="evaluate the continued resolvent at one point")
    p.add_argument("--lambda", required=True, help="re,im")
    p.set_defaults(func=_cmd_eval_f)
    _add_common(p)

    p = sub.add_parser("verify", help="run the golden/property check suite")
    p.set_defaults(func=_cmd_verify)
    _add_common(p)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except KuramotoSpectralError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
