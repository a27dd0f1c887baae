"""Command-line harness: parameter sweeps, figure reproductions, verification.

Output CSVs are deterministic: fixed 12-significant-digit scientific
notation, LF line endings, and a comment header carrying the tool version,
the full parameter set of every curve and the integrator tolerances.

Sweep points are independent pure-function evaluations; they are dispatched
to a process pool sized by the CASCADEG2_WORKERS environment variable
(default: available parallelism).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .model import CascadeParams, DetectorSetting, omega_star
from .correlate import correlation_curve
from .observables import bell_s_chsh, bell_s_shortcut, degree_of_correlation
from .verify import run_all_checks, summarize

WORKERS_ENV = "CASCADEG2_WORKERS"
_POOL_THRESHOLD = 32  # below this many jobs a pool costs more than it saves

PARAM_FIELDS = ("gamma1", "gamma2", "gamma3", "gamma4", "gamma_u",
                "gamma12", "gamma21", "delta_fs", "rabi", "detuning")

# The model proper has gamma_u = 0; swept figures keep a small nonzero decay
# into the auxiliary level unless overridden.
CLI_DEFAULT_GAMMA_U = 0.01

FIGURE_IDS = ("3a", "3b", "3c", "4a", "4b", "5", "6")


def _fmt(value: float) -> str:
    """Fixed 12-significant-digit scientific notation."""
    return f"{float(value):.11e}"


@dataclass(frozen=True)
class RunConfig:
    """Validated sweep/angle-grid configuration."""

    start: float
    stop: float
    steps: int
    rtol: float = 1e-10
    atol: float = 1e-12

    def __post_init__(self) -> None:
        if self.steps < 2:
            raise ValueError(f"steps must be >= 2, got {self.steps}")
        if not self.stop > self.start:
            raise ValueError(f"stop must exceed start, got [{self.start}, {self.stop}]")
        for name in ("rtol", "atol"):
            tol = getattr(self, name)
            if not 0.0 < tol < 1e-2:
                raise ValueError(f"{name} must lie in (0, 1e-2), got {tol}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepResult:
    """Rows of (swept value, observable name, value) plus metadata header."""

    metadata: tuple[tuple[str, str], ...]
    rows: tuple[tuple[float, str, float], ...]

    def write_csv(self, stream) -> None:
        for key, value in self.metadata:
            stream.write(f"# {key} = {value}\n")
        stream.write("x,observable,value\n")
        for x, name, value in self.rows:
            if "," in name:
                raise ValueError(f"observable name {name!r} would break the CSV")
            if not math.isfinite(value):
                raise ValueError(f"non-finite value for {name} at x={x}")
            stream.write(f"{_fmt(x)},{name},{_fmt(value)}\n")

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            self.write_csv(fh)


def _params_summary(params: CascadeParams) -> str:
    return " ".join(f"{name}={_fmt(getattr(params, name))}"
                    for name in PARAM_FIELDS)


def load_config(path: str) -> dict[str, float]:
    """Parse a flat ``key = value`` config file; # starts a comment."""
    values: dict[str, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            try:
                values[key] = float(value.strip())
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return values


def _parse_overrides(pairs) -> dict[str, float]:
    overrides: dict[str, float] = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ValueError(f"override {pair!r} is not of the form key=value")
        key, _, value = pair.partition("=")
        overrides[key.strip().replace("-", "_")] = float(value)
    return overrides


def _worker_count(explicit: int | None = None) -> int:
    if explicit is not None:
        return max(1, explicit)
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# Top-level so jobs pickle cleanly into pool workers.
def _evaluate_job(job):
    kind, params, arg = job
    if kind == "degree":
        return degree_of_correlation(params, arg).value
    if kind == "bell":
        return bell_s_shortcut(params).s
    raise ValueError(f"unknown job kind {kind!r}")


def _run_jobs(jobs, workers: int) -> list[float]:
    if workers <= 1 or len(jobs) < _POOL_THRESHOLD:
        return [_evaluate_job(job) for job in jobs]
    chunk = max(1, len(jobs) // (4 * workers))
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate_job, jobs, chunksize=chunk))


def _base_metadata(command: str) -> list[tuple[str, str]]:
    return [("tool", f"cascadeg2 {__version__}"), ("command", command),
            ("rtol", _fmt(1e-10)), ("atol", _fmt(1e-12))]


def _apply_param_overrides(params: CascadeParams,
                           overrides: dict[str, float]) -> CascadeParams:
    changes = {}
    for key, value in overrides.items():
        if key == "gamma_d":
            changes["gamma12"] = changes["gamma21"] = value
        elif key in PARAM_FIELDS:
            changes[key] = value
    return params.with_(**changes) if changes else params


def _figure_curves(fig_id: str, gamma_u: float):
    """Parameter sets for the predefined figure sweeps.

    The drive condition of the detuned curves is rabi = omega_star(delta_fs,
    detuning); detunings follow the 5 x delta_fs regime of the split-doublet
    sweep (10 x for the delta_fs = 10 panel).
    """
    base = CascadeParams(gamma_u=gamma_u)

    def detuned(dfs: float, factor: float = 5.0) -> CascadeParams:
        delta = factor * dfs
        return base.with_(delta_fs=dfs, detuning=delta,
                          rabi=omega_star(dfs, delta))

    if fig_id == "3a":
        return "degree", [(f"C[dfs{v:g}_no_field]", base.with_(delta_fs=v))
                          for v in (0.0, 1.0, 5.0, 10.0)]
    if fig_id == "3b":
        return "degree", [
            ("C[dfs5_no_field]", base.with_(delta_fs=5.0)),
            ("C[dfs5_resonant]", base.with_(delta_fs=5.0, rabi=5.0)),
            ("C[dfs5_detuned]", detuned(5.0)),
        ]
    if fig_id == "3c":
        return "degree", [
            ("C[dfs10_no_field]", base.with_(delta_fs=10.0)),
            ("C[dfs10_resonant]", base.with_(delta_fs=10.0, rabi=10.0)),
            ("C[dfs10_detuned]", detuned(10.0, factor=10.0)),
        ]
    if fig_id == "4a":
        dephased = base.with_(gamma12=1.0, gamma21=1.0)
        return "degree", [
            (f"C[dfs0_gd1_rabi{v:g}]", dephased.with_(rabi=v))
            for v in (0.0, 1.0, 3.0)
        ]
    if fig_id == "4b":
        dephased = base.with_(delta_fs=5.0, gamma12=1.0, gamma21=1.0)
        return "degree", [
            ("C[dfs5_gd1_no_field]", dephased),
            ("C[dfs5_gd1_resonant]", dephased.with_(rabi=5.0)),
            ("C[dfs5_gd1_detuned]",
             dephased.with_(detuning=25.0, rabi=omega_star(5.0, 25.0))),
        ]
    if fig_id == "5":
        return "bell_vs_delta_fs", [
            ("S[no_field]", base),
            ("S[resonant]", base),
            ("S[detuned]", base),
        ]
    if fig_id == "6":
        return "bell_vs_gamma_d", [
            ("S[dfs0_no_field]", base),
            ("S[dfs5_no_field]", base.with_(delta_fs=5.0)),
            ("S[dfs5_detuned]",
             base.with_(delta_fs=5.0, detuning=25.0, rabi=omega_star(5.0, 25.0))),
        ]
    raise ValueError(f"unknown figure id {fig_id!r}; expected one of {FIGURE_IDS}")


def run_figure(fig_id: str, overrides: dict[str, float] | None = None,
               workers: int | None = None) -> SweepResult:
    """Evaluate one predefined sweep and return its rows and metadata."""
    overrides = dict(overrides or {})
    gamma_u = overrides.pop("gamma_u", CLI_DEFAULT_GAMMA_U)
    steps = int(overrides.pop("steps", 0)) or None
    kind, curves = _figure_curves(fig_id, gamma_u)
    curves = [(label, _apply_param_overrides(params, overrides))
              for label, params in curves]

    metadata = _base_metadata(f"figure {fig_id}")
    jobs = []
    labels = []
    xs = []

    if kind == "degree":
        config = RunConfig(start=0.0, stop=math.pi / 2.0, steps=steps or 91)
        metadata.append(("axis", "basis angle theta [rad]"))
        for label, params in curves:
            metadata.append((f"curve {label}", _params_summary(params)))
            for theta in config.grid():
                jobs.append(("degree", params, float(theta)))
                labels.append(label)
                xs.append(float(theta))
    elif kind == "bell_vs_delta_fs":
        config = RunConfig(start=0.0, stop=10.0, steps=steps or 101)
        metadata.append(("axis", "delta_fs [gamma]"))
        for label, params in curves:
            metadata.append((f"curve {label}", _params_summary(params)
                             + " (delta_fs swept)"))
            for dfs in config.grid():
                dfs = float(dfs)
                if label == "S[resonant]":
                    point = params.with_(delta_fs=dfs, rabi=dfs)
                elif label == "S[detuned]":
                    point = params.with_(delta_fs=dfs, detuning=5.0 * dfs,
                                         rabi=omega_star(dfs, 5.0 * dfs))
                else:
                    point = params.with_(delta_fs=dfs)
                jobs.append(("bell", point, None))
                labels.append(label)
                xs.append(dfs)
    elif kind == "bell_vs_gamma_d":
        config = RunConfig(start=0.0, stop=2.0, steps=steps or 101)
        metadata.append(("axis", "gamma_d [gamma]"))
        for label, params in curves:
            metadata.append((f"curve {label}", _params_summary(params)
                             + " (gamma_d swept)"))
            for gd in config.grid():
                point = params.with_(gamma12=float(gd), gamma21=float(gd))
                jobs.append(("bell", point, None))
                labels.append(label)
                xs.append(float(gd))
    else:  # pragma: no cover - guarded by _figure_curves
        raise ValueError(kind)

    values = _run_jobs(jobs, _worker_count(workers))
    rows = tuple((x, label, value) for x, label, value in zip(xs, labels, values))
    return SweepResult(metadata=tuple(metadata), rows=rows)


SWEEP_AXES = ("delta_fs", "rabi", "detuning", "gamma_d", "gamma_u")
SWEEP_OBSERVABLES = ("c_h", "c_d", "s")


def run_sweep(params: CascadeParams, axis: str, config: RunConfig,
              observables=SWEEP_OBSERVABLES,
              workers: int | None = None) -> SweepResult:
    """Sweep one parameter axis and evaluate the requested observables."""
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown axis {axis!r}; expected one of {SWEEP_AXES}")
    for name in observables:
        if name not in SWEEP_OBSERVABLES:
            raise ValueError(f"unknown observable {name!r}")

    metadata = _base_metadata(f"sweep {axis}")
    metadata.append(("axis", f"{axis} from {_fmt(config.start)} to "
                             f"{_fmt(config.stop)} in {config.steps} steps"))
    metadata.append(("base", _params_summary(params)))

    jobs, labels, xs = [], [], []
    for x in config.grid():
        x = float(x)
        if axis == "gamma_d":
            point = params.with_(gamma12=x, gamma21=x)
        else:
            point = params.with_(**{axis: x})
        for name in observables:
            if name == "c_h":
                jobs.append(("degree", point, 0.0))
            elif name == "c_d":
                jobs.append(("degree", point, math.pi / 4.0))
            else:
                jobs.append(("bell", point, None))
            labels.append(name)
            xs.append(x)

    values = _run_jobs(jobs, _worker_count(workers))
    rows = tuple((x, label, value) for x, label, value in zip(xs, labels, values))
    return SweepResult(metadata=tuple(metadata), rows=rows)


def _add_param_arguments(parser: argparse.ArgumentParser) -> None:
    for name in PARAM_FIELDS:
        parser.add_argument(f"--{name.replace('_', '-')}", type=float,
                            default=None, dest=name)
    parser.add_argument("--gamma-d", type=float, default=None, dest="gamma_d",
                        help="set gamma12 and gamma21 together")
    parser.add_argument("--config", type=str, default=None,
                        help="flat key = value file with parameter defaults")


def _resolve_params(args) -> CascadeParams:
    config = load_config(args.config) if args.config else {}
    values = {}
    for name in PARAM_FIELDS:
        cli_value = getattr(args, name)
        if cli_value is not None:
            values[name] = cli_value
        elif name in config:
            values[name] = config[name]
    gamma_d = args.gamma_d if args.gamma_d is not None else config.get("gamma_d")
    if gamma_d is not None:
        values.setdefault("gamma12", gamma_d)
        values.setdefault("gamma21", gamma_d)
    values.setdefault("gamma_u", CLI_DEFAULT_GAMMA_U)
    return CascadeParams(**values)


def _write_result(result: SweepResult, out: str | None) -> None:
    if out:
        result.save(out)
        print(f"wrote {out}")
    else:
        result.write_csv(sys.stdout)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascadeg2",
        description="Two-photon polarization correlations of a driven "
                    "radiative cascade")
    parser.add_argument("--version", action="version",
                        version=f"cascadeg2 {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fig = sub.add_parser("figure", help="run a predefined sweep (3a..6) as CSV")
    p_fig.add_argument("fig_id", choices=FIGURE_IDS)
    p_fig.add_argument("--out", type=str, default=None)
    p_fig.add_argument("--override", action="append", default=[],
                       metavar="KEY=VALUE",
                       help="override a parameter, gamma_u, or steps")
    p_fig.add_argument("--workers", type=int, default=None)

    p_deg = sub.add_parser("degree", help="degree of correlation at one basis angle")
    p_deg.add_argument("--theta", type=float, required=True)
    _add_param_arguments(p_deg)

    p_bell = sub.add_parser("bell", help="CHSH Bell parameter")
    p_bell.add_argument("--angles", type=float, nargs=4, default=None,
                        metavar=("A1", "A2", "B1", "B2"),
                        help="analyzer angles; omit for the rectilinear-"
                             "diagonal shortcut")
    _add_param_arguments(p_bell)

    p_corr = sub.add_parser("correlate", help="correlation curve G(tau) as CSV")
    p_corr.add_argument("--tau-max", type=float, required=True)
    p_corr.add_argument("--tau-steps", type=int, required=True)
    p_corr.add_argument("--theta1", type=float, default=0.0)
    p_corr.add_argument("--theta2", type=float, default=0.0)
    p_corr.add_argument("--phi1", type=float, default=0.0)
    p_corr.add_argument("--phi2", type=float, default=0.0)
    p_corr.add_argument("--method", choices=("analytic", "numeric"),
                        default="analytic")
    p_corr.add_argument("--out", type=str, default=None)
    _add_param_arguments(p_corr)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter axis")
    p_sweep.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p_sweep.add_argument("--start", type=float, required=True)
    p_sweep.add_argument("--stop", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--observables", type=str, default="c_h,c_d,s",
                         help="comma list from c_h, c_d, s")
    p_sweep.add_argument("--out", type=str, default=None)
    p_sweep.add_argument("--workers", type=int, default=None)
    _add_param_arguments(p_sweep)

    p_ver = sub.add_parser("verify", help="run the oracle and invariant suite")
    p_ver.add_argument("--tol", type=float, default=1e-6,
                       help="oracle-equivalence tolerance")
    p_ver.add_argument("--quick", action="store_true",
                       help="reduced parameter-set counts")
    p_ver.add_argument("--out", type=str, default=None,
                       help="write a JSON report here")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "figure":
        result = run_figure(args.fig_id, _parse_overrides(args.override),
                            workers=args.workers)
        _write_result(result, args.out or f"figure_{args.fig_id}.csv")
        return 0

    if args.command == "degree":
        params = _resolve_params(args)
        degree = degree_of_correlation(params, args.theta)
        print(f"C(theta={_fmt(args.theta)}) = {_fmt(degree.value)}")
        return 0

    if args.command == "bell":
        params = _resolve_params(args)
        if args.angles is None:
            result = bell_s_shortcut(params)
        else:
            result = bell_s_chsh(params, *args.angles)
        print(f"S = {_fmt(result.s)}  violated = {result.violated}")
        return 0

    if args.command == "correlate":
        params = _resolve_params(args)
        config = RunConfig(start=0.0, stop=args.tau_max, steps=args.tau_steps)
        taus = config.grid()
        curve = correlation_curve(params, DetectorSetting(args.theta1, args.phi1),
                                  DetectorSetting(args.theta2, args.phi2),
                                  taus, method=args.method)
        metadata = _base_metadata("correlate")
        metadata.append(("params", _params_summary(params)))
        metadata.append(("angles", f"theta1={_fmt(args.theta1)} "
                                   f"theta2={_fmt(args.theta2)} "
                                   f"phi1={_fmt(args.phi1)} "
                                   f"phi2={_fmt(args.phi2)}"))
        rows = tuple((float(t), f"g2[{args.method}]", float(v))
                     for t, v in zip(curve.tau_grid, curve.values))
        _write_result(SweepResult(metadata=tuple(metadata), rows=rows), args.out)
        return 0

    if args.command == "sweep":
        params = _resolve_params(args)
        config = RunConfig(start=args.start, stop=args.stop, steps=args.steps)
        observables = tuple(s.strip() for s in args.observables.split(",") if s.strip())
        result = run_sweep(params, args.axis, config, observables,
                           workers=args.workers)
        _write_result(result, args.out)
        return 0

    if args.command == "verify":
        results = run_all_checks(tol=args.tol, quick=args.quick)
        text, ok = summarize(results)
        print(text)
        if args.out:
            report = {"version": __version__, "tol": args.tol,
                      "passed": ok,
                      "checks": [dataclasses.asdict(r) for r in results]}
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(report, fh, indent=2)
                fh.write("\n")
        return 0 if ok else 1

    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
