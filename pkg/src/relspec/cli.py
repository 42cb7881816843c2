"""Command-line interface: config ingestion, pipeline orchestration,
atomic result persistence, and optional figure rendering.

Exit codes: 0 success, 1 numerical failure, 2 config/compatibility error,
3 hypothesis violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__
from .errors import (
    CompatibilityError,
    ComponentViolationError,
    ConfigError,
    DomainError,
    FitError,
    GradingError,
    HypothesisError,
    NumericalError,
    RelspecError,
    ShapeError,
)
from .geometry import (
    Boundary,
    Grid1D,
    GridKind,
    MetricData,
    ScalarField,
    discrete_sobolev_distance,
    symmetry_defect,
)
from .heat import (
    HeatTraceSamples,
    projected_relative_trace,
    relative_heat_trace,
)
from .index import (
    relative_supertrace,
    scattering_index,
    spectral_shift,
    krein_heat_defect,
    susy_scattering_certificate,
    witten_index,
)
from .operators import (
    build_derham_circle,
    build_eta_model,
    build_padded_pair,
    build_schrodinger,
    build_susy_pair,
)
from .spectra import ExplicitSpectrum, Spectrum, eigensolve
from . import zeta as zeta_mod

SCHEMA = "relspec/1"
MODELS = ("schrodinger", "susy", "derham-circle", "eta-circle", "explicit", "padded")
COMMANDS = ("heat-trace", "fit", "zeta", "det", "index", "ssf", "eta",
            "torsion", "sobolev-dist", "certify")

_COMPAT = {
    "heat-trace": set(MODELS),
    "fit": set(MODELS),
    "zeta": {"schrodinger", "explicit", "derham-circle"},
    "det": {"schrodinger", "explicit", "derham-circle"},
    "index": {"susy"},
    "ssf": {"schrodinger", "explicit", "derham-circle", "eta-circle"},
    "eta": {"eta-circle", "explicit"},
    "torsion": {"derham-circle"},
    "sobolev-dist": {"derham-circle"},
    "certify": {"susy"},
}


# ---------------------------------------------------------------------------
# configuration


def load_config(path: str, overrides: argparse.Namespace | None = None) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config {path!r} is not valid JSON (line {exc.lineno}, column {exc.colno})"
        ) from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be an object")
    if cfg.get("model") not in MODELS:
        raise ConfigError(f"config model must be one of {MODELS}, got {cfg.get('model')!r}")
    if not isinstance(cfg.get("pair"), dict):
        raise ConfigError("config requires a 'pair' object")
    for key, val in (cfg.get("tolerances") or {}).items():
        if not (isinstance(val, (int, float)) and val > 0):
            raise ConfigError(f"tolerance {key!r} must be positive")
    if overrides is not None:
        tg = dict(cfg.get("tGrid") or {})
        if getattr(overrides, "t_min", None) is not None:
            tg["min"] = overrides.t_min
        if getattr(overrides, "t_max", None) is not None:
            tg["max"] = overrides.t_max
        if getattr(overrides, "t_points", None) is not None:
            tg["points"] = overrides.t_points
        if tg:
            cfg["tGrid"] = tg
        if getattr(overrides, "seed", None) is not None:
            cfg["seed"] = overrides.seed
    return cfg


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(_canonical(cfg).encode()).hexdigest()


def cache_key(description: dict) -> str:
    """Stable content hash over a canonicalized model/grid description."""
    return hashlib.sha256(_canonical(description).encode()).hexdigest()[:32]


def _grid_from_config(cfg: dict) -> Grid1D:
    g = cfg.get("grid")
    if not isinstance(g, dict):
        raise ConfigError("config requires a 'grid' object")
    try:
        kind = GridKind(g.get("kind", "interval"))
        n = int(g["n"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad grid descriptor: {exc}") from exc
    if kind is GridKind.CIRCLE:
        return Grid1D.circle(float(g.get("length", g.get("b", 2 * np.pi))), n)
    return Grid1D(kind, n, (float(g.get("a", 0.0)), float(g.get("b", 1.0))),
                  Boundary.DIRICHLET)


def _t_grid(cfg: dict) -> np.ndarray:
    tg = cfg.get("tGrid") or {}
    t_min = float(tg.get("min", 1e-3))
    t_max = float(tg.get("max", 20.0))
    points = int(tg.get("points", 64))
    if not (0 < t_min < t_max and points >= 2):
        raise ConfigError(f"bad tGrid {tg!r}")
    return np.geomspace(t_min, t_max, points)


def _fit_window(cfg: dict) -> tuple[float, float] | None:
    win = cfg.get("fitWindow")
    if win is None:
        return None
    try:
        lo, hi = float(win[0]), float(win[1])
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"bad fitWindow {win!r}") from exc
    return lo, hi


def _expr_field(grid: Grid1D, pair: dict, key: str, label: str | None = None) -> ScalarField:
    expr = pair.get(key)
    if not isinstance(expr, str):
        raise ConfigError(f"pair.{key} must be an expression string")
    try:
        return ScalarField.from_expression(grid, expr, label or key)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _explicit_side(side: dict, seed: int | None) -> ExplicitSpectrum:
    if not isinstance(side, dict) or "law" not in side:
        raise ConfigError("explicit pair sides need a 'law' field")
    law = side["law"]
    params = {k: v for k, v in side.items() if k not in ("law", "weight")}
    if law == "random-uniform":
        rng = np.random.default_rng(seed)
        values = np.sort(rng.uniform(float(params.get("low", 0.0)),
                                     float(params.get("high", 50.0)),
                                     int(params.get("count", 50))))
        return ExplicitSpectrum("custom-sequence", {"values": values.tolist()},
                                weight=float(side.get("weight", 1.0)))
    return ExplicitSpectrum(law, params, weight=float(side.get("weight", 1.0)))


class PairContext:
    """Built operators/spectra for one configured pair."""

    def __init__(self, cfg: dict, cache_dir: str | None = None):
        self.cfg = cfg
        self.model = cfg["model"]
        self.cache_dir = cache_dir
        pair = cfg["pair"]
        self.grid = None if self.model == "explicit" else _grid_from_config(cfg)
        self.graded_pair = None
        self.padded_pair = None
        self.ops = None
        self.metrics = None
        self.laws = None
        if self.model == "schrodinger":
            va = _expr_field(self.grid, pair, "v")
            vb = _expr_field(self.grid, pair, "vPrime")
            order = int(pair.get("order", 4))
            self.ops = (build_schrodinger(self.grid, va, order),
                        build_schrodinger(self.grid, vb, order))
        elif self.model == "susy":
            w = _expr_field(self.grid, pair, "w")
            w2 = _expr_field(self.grid, pair, "w2")
            wp = _expr_field(self.grid, pair, "wPrime") if "wPrime" in pair else None
            w2p = _expr_field(self.grid, pair, "w2Prime") if "w2Prime" in pair else None
            self.graded_pair = build_susy_pair(self.grid, w, w2, wp, w2p)
        elif self.model == "derham-circle":
            self.metrics = (
                MetricData(self.grid, _expr_field(self.grid, pair, "density")),
                MetricData(self.grid, _expr_field(self.grid, pair, "densityPrime")),
            )
            self.ops = (build_derham_circle(self.grid, self.metrics[0])[1],
                        build_derham_circle(self.grid, self.metrics[1])[1])
        elif self.model == "eta-circle":
            self.ops = (build_eta_model(self.grid, _expr_field(self.grid, pair, "a")),
                        build_eta_model(self.grid, _expr_field(self.grid, pair, "aPrime")))
        elif self.model == "explicit":
            seed = cfg.get("seed")
            self.laws = (_explicit_side(pair.get("a"), seed),
                         _explicit_side(pair.get("b"), None if seed is None else seed + 1))
        elif self.model == "padded":
            va = _expr_field(self.grid, pair, "v")
            vb = _expr_field(self.grid, pair, "vPrime")
            op_a = build_schrodinger(self.grid, va, int(pair.get("order", 4)))
            op_b = build_schrodinger(self.grid, vb, int(pair.get("order", 4)))
            try:
                core_a = tuple(int(i) for i in pair["coreA"])
                core_b = tuple(int(i) for i in pair["coreB"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"padded model needs coreA/coreB index pairs: {exc}") from exc
            self.padded_pair = build_padded_pair(op_a, op_b, core_a, core_b)

    def spectra(self) -> tuple:
        """Spectra of the two sides (closed-form laws for explicit)."""
        if self.laws is not None:
            return self.laws
        if self.graded_pair is not None:
            ha = _block_spectrum(self.graded_pair, primed=False, ctx=self)
            hb = _block_spectrum(self.graded_pair, primed=True, ctx=self)
            return ha, hb
        if self.padded_pair is not None:
            return (self._cached_spectrum(self.padded_pair.op_a, "a"),
                    self._cached_spectrum(self.padded_pair.op_b, "b"))
        return (self._cached_spectrum(self.ops[0], "a"),
                self._cached_spectrum(self.ops[1], "b"))

    def _cached_spectrum(self, op, tag: str) -> Spectrum:
        if self.cache_dir is None:
            return eigensolve(op)
        key = cache_key({"config": self.cfg.get("pair"), "grid": self.cfg.get("grid"),
                         "model": self.model, "side": tag})
        path = os.path.join(self.cache_dir, f"spectrum-{key}.txt")
        if os.path.exists(path):
            ev = np.loadtxt(path, ndmin=1)
            return Spectrum(ev, weight=op.spectral_weight, label=op.label)
        spec = eigensolve(op)
        os.makedirs(self.cache_dir, exist_ok=True)
        _atomic_write(path, "\n".join(f"{v:.17g}" for v in spec.eigenvalues) + "\n")
        return spec


def _block_spectrum(pair, primed: bool, ctx: PairContext) -> Spectrum:
    h_plus, h_minus = pair.squares(primed)
    sp = ctx._cached_spectrum(h_plus, f"h+{primed}")
    sm = ctx._cached_spectrum(h_minus, f"h-{primed}")
    return Spectrum(np.concatenate([sp.eigenvalues, sm.eigenvalues]),
                    weight=sp.weight, label=f"D^2[{primed}]")


# ---------------------------------------------------------------------------
# persistence


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".relspec-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Envelope:
    def __init__(self, cfg: dict, command: str):
        self.payload = {
            "schema": SCHEMA,
            "tool": {"name": "relspec", "version": __version__},
            "command": command,
            "configHash": config_hash(cfg),
            "results": {},
            "wallTime": {},
        }
        self._t0 = time.monotonic()

    def add(self, name: str, result: dict, tolerance: dict | None = None) -> None:
        entry = dict(result)
        if tolerance:
            entry["tolerances"] = tolerance
        self.payload["results"][name] = entry
        self.payload["wallTime"][name] = round(time.monotonic() - self._t0, 6)
        self._t0 = time.monotonic()

    def write(self, out_dir: str, command: str) -> str:
        path = os.path.join(out_dir, f"{command}.json")
        _atomic_write(path, json.dumps(self.payload, indent=2, sort_keys=True) + "\n")
        return path


def _write_plot(out_dir: str, command: str, x, ys: dict, xlabel: str,
                logx: bool = True) -> str:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, y in ys.items():
        if command == "ssf":
            ax.step(x, y, where="post", label=label)
        else:
            ax.plot(x, y, label=label)
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = os.path.join(out_dir, f"{command}.png")
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


# ---------------------------------------------------------------------------
# commands


def _is_odd_model(ctx: PairContext) -> bool:
    """First-order models whose even heat sum is divergent or meaningless;
    their natural relative trace is the lambda-weighted odd one."""
    if ctx.model == "eta-circle":
        return True
    return (ctx.model == "explicit"
            and any(law.law == "shifted-integers" for law in ctx.laws))


def _samples_for(ctx: PairContext, t_grid: np.ndarray) -> HeatTraceSamples:
    if ctx.padded_pair is not None:
        return projected_relative_trace(ctx.padded_pair, t_grid)
    if ctx.graded_pair is not None:
        return relative_supertrace(ctx.graded_pair, t_grid)
    a, b = ctx.spectra()
    if _is_odd_model(ctx):
        theta = zeta_mod.odd_theta_function(a, b)
        return HeatTraceSamples(t_grid, np.array([theta(t) for t in t_grid]))
    return relative_heat_trace(a, b, t_grid)


def _fit_for(ctx: PairContext, cfg: dict, samples: HeatTraceSamples):
    a, b = ctx.spectra()
    gap = min(a.gap_mu, b.gap_mu)
    if _is_odd_model(ctx):
        fit = zeta_mod.fit_expansion(samples, window=_fit_window(cfg),
                                     exponents=zeta_mod.odd_exponents(1),
                                     h_pin=0.0)
        return fit, gap
    kdiff = a.kernel_dim - b.kernel_dim
    return zeta_mod.fit_expansion(samples, kernel_dim_difference=kdiff,
                                  gap_mu=gap, window=_fit_window(cfg)), gap


def cmd_heat_trace(ctx, cfg, args, env: Envelope, out_dir: str) -> None:
    samples = _samples_for(ctx, _t_grid(cfg))
    _atomic_write(os.path.join(out_dir, "heat-trace.csv"), samples.to_csv())
    env.add("heatTrace", {
        "tMin": float(samples.t[0]), "tMax": float(samples.t[-1]),
        "points": int(samples.t.size), "csv": "heat-trace.csv",
        "graded": samples.supertrace is not None,
    })
    if args.plots:
        ys = {"trace": samples.trace}
        if samples.supertrace is not None:
            ys["supertrace"] = samples.supertrace
        env.add("figure", {"path": _write_plot(out_dir, "heat-trace", samples.t, ys, "t")})


def cmd_fit(ctx, cfg, args, env: Envelope, out_dir: str) -> None:
    samples = _samples_for(ctx, _t_grid(cfg))
    fit, _ = _fit_for(ctx, cfg, samples)
    env.add("fit", {
        "exponents": fit.exponents.tolist(),
        "coefficients": fit.coefficients.tolist(),
        "h": fit.h,
        "fitWindow": list(fit.fit_window),
        "conditionNumber": fit.condition_number,
        "residual": fit.residual,
    })


def cmd_zeta(ctx, cfg, args, env: Envelope, out_dir: str) -> None:
    a, b = ctx.spectra()
    theta = zeta_mod.theta_function(a, b)
    samples = _samples_for(ctx, _t_grid(cfg))
    fit, gap = _fit_for(ctx, cfg, samples)
    rz = zeta_mod.relative_zeta_at_zero(theta, fit, gap)
    env.add("zeta", {
        "valueAtZero": rz.value_at_zero,
        "derivativeAtZero": rz.derivative_at_zero,
        "h": fit.h,
        "polePositions": [list(p) for p in rz.pole_positions],
        "determinant": zeta_mod.relative_determinant(rz),
    })
    sg = cfg.get("sGrid")
    if sg:
        s_vals = np.linspace(float(sg.get("min", -0.4)), float(sg.get("max", 0.4)),
                             int(sg.get("points", 9)))
        rows = ["s,zeta"]
        zs = []
        for s in s_vals:
            z = (rz.value_at_zero if s == 0.0
                 else zeta_mod.relative_zeta(theta, fit, float(s), gap))
            zs.append(z)
            rows.append(f"{s:.17g},{z:.17g}")
        _atomic_write(os.path.join(out_dir, "zeta.csv"), "\n".join(rows) + "\n")
        env.add("zetaSamples", {"csv": "zeta.csv", "points": len(zs)})
        if args.plots:
            env.add("figure", {"path": _write_plot(out_dir, "zeta", s_vals,
                                                   {"zeta(s)": np.array(zs)}, "s",
                                                   logx=False)})


def cmd_det(ctx, cfg, args, env: Envelope, out_dir: str) -> None:
    a, b = ctx.spectra()
    theta = zeta_mod.theta_function(a, b)
    samples = _samples_for(ctx, _t_grid(cfg))
    fit, gap = _fit_for(ctx, cfg, samples)
    rz = zeta_mod.relative_zeta_at_zero(theta, fit, gap)
    env.add("determinant", {
        "value": zeta_mod.relative_determinant(rz),
        "zetaPrimeAtZero": rz.derivative_at_zero,
    }, tolerance={"detTol": float((cfg.get("tolerances") or {}).get("detTol", 1e-6))})


def cmd_index(ctx, cfg, args, env: Envelope, out_dir: str) -> None:
    pair = ctx.graded_pair
    t_grid = _t_grid(cfg)
    report = scattering_index(pair, t_grid)
    wa = witten_index(pair.h_plus, pair.h_minus)
    wb = witten_index(pair.h_plus_prime, pair.h_minus_prime)
    env.add("index", {
        "relativeIndex": report.relative_index,
        "tConstancyDrift": report.t_constancy_drift,
        "indA": report.ind_a,
        "indB": report.ind_b,
        "ncScattering": report.nc_scattering,
        "wittenA": {"kernel": wa.kernel_route, "supertrace": wa.supertrace_route},
        "wittenB": {"kernel": wb.kernel_route, "supertrace": wb.supertrace_route},
    }, tolerance={"nearInteger": 1e-6, "driftTol": 1e-7})


def cmd_ssf(ctx, cfg, args, env: Envelope, out_dir: str) -> None:
    a, b = ctx.spectra()
    if not isinstance(a, Spectrum):
        bound = float((cfg.get("lambdaGrid") or {}).get("max", 50.0)) * 1.2
        a, b = a.materialize(bound), b.materialize(bound)
    lg = cfg.get("lambdaGrid") or {}
    lo = float(lg.get("min", float(min(a.eigenvalues[0], b.eigenvalues[0])) - 1.0))
    hi = float(lg.get("max", float(max(a.eigenvalues[-1], b.eigenvalues[-1])) + 1.0))
    grid = np.linspace(lo, hi, int(lg.get("points", 501)))
    shift = spectral_shift(a, b, grid)
    _atomic_write(os.path.join(out_dir, "ssf.csv"), shift.to_csv())
    defects = [krein_heat_defect(a, b, t) for t in (0.5, 1.0, 2.0)]
    env.add("spectralShift", {
        "csv": "ssf.csv",
        "gapWindow": list(shift.gap_window) if shift.gap_window else None,
        "kreinHeatDefects": defects,
    }, tolerance={"kreinTol": 1e-8})
    if args.plots:
        env.add("figure", {"path": _write_plot(out_dir, "ssf", grid,
                                               {"xi": shift.xi}, "lambda", logx=False)})


def cmd_eta(ctx, cfg, args, env: Envelope, out_dir: str) -> None:
    a, b = ctx.spectra()
    result = zeta_mod.relative_eta_from_spectra(
        a, b, t_grid=_t_grid(cfg), window=_fit_window(cfg))
    env.add("eta", {
        "etaAtZero": result.eta_at_zero,
        "aMinusHalf": result.a_minus_half,
        "regular": result.regular,
    }, tolerance={"regularityTol": 1e-6})


def cmd_torsion(ctx, cfg, args, env: Envelope, out_dir: str) -> None:
    ma, mb = ctx.metrics
    log_tau = zeta_mod.relative_torsion(ma, mb, t_grid=_t_grid(cfg),
                                        window=_fit_window(cfg))
    env.add("torsion", {"logTau": log_tau})


def cmd_sobolev(ctx, cfg, args, env: Envelope, out_dir: str) -> None:
    ma, mb = ctx.metrics
    sb = cfg.get("sobolev") or {}
    p, r = int(sb.get("p", 2)), int(sb.get("r", 1))
    rep = discrete_sobolev_distance(ma, mb, p, r)
    result = {
        "p": p, "r": r, "norm": rep.norm,
        "c1": rep.c1, "c2": rep.c2, "inComponent": rep.in_component,
    }
    if rep.in_component and rep.norm > 0:
        result["symmetryDefect"] = symmetry_defect(ma, mb, p, r)
    env.add("sobolevDistance", result)


def cmd_certify(ctx, cfg, args, env: Envelope, out_dir: str) -> None:
    t_grid = _t_grid(cfg)
    t_grid = t_grid[(t_grid >= 0.05)]
    cert = susy_scattering_certificate(ctx.graded_pair, t_grid)
    env.add("scatteringCertificate", {
        "granted": cert.granted,
        "evenCurveMax": float(np.max(cert.even_curve)),
        "oddCurveMax": float(np.max(cert.odd_curve)),
        "points": int(cert.t_samples.size),
    })
    if args.plots:
        env.add("figure", {"path": _write_plot(
            out_dir, "certify", cert.t_samples,
            {"|e^{-tH}-e^{-tH'}|_1": cert.even_curve,
             "|De^{-tH}-D'e^{-tH'}|_1": cert.odd_curve}, "t")})


_DISPATCH = {
    "heat-trace": cmd_heat_trace,
    "fit": cmd_fit,
    "zeta": cmd_zeta,
    "det": cmd_det,
    "index": cmd_index,
    "ssf": cmd_ssf,
    "eta": cmd_eta,
    "torsion": cmd_torsion,
    "sobolev-dist": cmd_sobolev,
    "certify": cmd_certify,
}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relspec",
        description="Relative spectral invariants of 1D operator pairs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--cache", default=None, help="spectrum cache directory")
        p.add_argument("--t-min", type=float, default=None)
        p.add_argument("--t-max", type=float, default=None)
        p.add_argument("--t-points", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--plots", action="store_true",
                       help="render figures next to the tabular output")
    return parser


def run(cfg: dict, command: str, args: argparse.Namespace) -> Envelope:
    if command not in _COMPAT:
        raise ConfigError(f"unknown command {command!r}")
    if cfg["model"] not in _COMPAT[command]:
        raise CompatibilityError(
            f"invariant {command!r} is incompatible with model {cfg['model']!r}"
        )
    ctx = PairContext(cfg, cache_dir=args.cache)
    env = Envelope(cfg, command)
    _DISPATCH[command](ctx, cfg, args, env, args.out)
    return env


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, overrides=args)
        env = run(cfg, args.command, args)
        path = env.write(args.out, args.command)
        print(path)
        return 0
    except HypothesisError as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, CompatibilityError, ComponentViolationError,
            GradingError, ShapeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, FitError, DomainError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except RelspecError as exc:  # pragma: no cover - catch-all
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
