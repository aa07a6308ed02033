"""Command-line front end: sweeps, QCP estimation, verification, simulation.

Subcommands
    sweep      run a detector sweep, one CSV per temperature
    estimate   locate critical points from sweeps and extrapolate to kT = 0
    verify     run a named self-check group (lines|bell|oracles|symmetry)
    simulate   Monte Carlo teleportation through a thermal resource state

Configuration is a flat ``key = value`` text file (diffable, no nesting);
command-line flags override single keys.  Unknown keys are errors.  All CSV
output uses period decimals, LF endings, and 12 significant digits, so a
rerun with the same configuration is byte-identical.

Exit codes: 0 success, 1 configuration error, 2 computation error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .coherence import (
    AXES,
    log_spectrum,
    spectrum_eigenvalues,
    spectrum_eigenvalues_oracle,
)
from .discord import quantum_discord, s_tilde, entropy_single, entropy_pair
from .models import (
    FAMILIES,
    ModelSpec,
    thermal_correlators,
    xxz_delta1,
    xxz_delta2,
    xy_thermo_correlators,
)
from .scan import (
    AXIS_FIELDS,
    DEFAULT_ETA,
    DEFAULT_METHOD,
    METHODS,
    NUMERIC_COLUMNS,
    estimate_qcp,
    extrapolate_to_zero,
    sweep,
)
from .teleport import (
    BELL_LABELS,
    InputQubit,
    max_mean_fidelity,
    max_mean_fidelity_bruteforce,
    min_mean_trace_distance,
    min_mean_trace_distance_bruteforce,
    simulate_protocol,
)
from .xstate import Correlators, build_xstate, make_xstate, sample_random_xstate

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_COMPUTE = 2
EXIT_VERIFY = 3

SWEEP_HEADER = (
    "param,kT,z,xx,yy,zz,qd,theta_star,sqc_x,sqc_y,sqc_z,"
    "lqc_x,lqc_y,lqc_z,lqc_x_divergent,lqc_y_divergent,lqc_z_divergent,"
    "fmax_ext,fmax_branch,dmin_int,dmin_branch"
)
ESTIMATE_HEADER = "detector,kT,method,order,estimate,uncertainty"
EXTRAPOLATION_HEADER = "detector,method,order,intercept,stderr,slope,n_points"

# Detector columns cmd_estimate may differentiate (raw correlators included;
# the 0/1 divergence flags excluded).
ESTIMATABLE = tuple(c for c in NUMERIC_COLUMNS if not c.endswith("_divergent"))

VERIFY_SUBSETS = ("lines", "bell", "oracles", "symmetry")

# Seed for the randomized oracle checks of `verify oracles`; fixed so the
# command is deterministic.  The pytest suite runs the same comparisons at
# larger N; this subset keeps N small enough for an interactive command.
VERIFY_ORACLE_SEED = 20250817
VERIFY_ORACLE_STATES = 200


class ConfigError(ValueError):
    """Bad configuration file, flag, or key combination (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError (exit 1, not 2)."""

    def error(self, message):
        raise ConfigError(message)


KNOWN_KEYS = frozenset(
    {
        "family",
        "L",
        "kT",
        "kT_list",
        "delta",
        "h",
        "lam",
        "gamma",
        "axis",
        "start",
        "stop",
        "eta",
        "method",
        "order",
        "detectors",
        "window_lo",
        "window_hi",
        "candidate",
        "out",
        "workers",
        "seed",
        "solver",
        "input_theta",
        "input_chi",
        "bell",
        "runs",
        "z",
        "xx",
        "yy",
        "zz",
    }
)


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Parse flat ``key = value`` lines; '#' starts a comment line."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _as_float(raw: dict[str, str], key: str, default=None) -> float | None:
    if key not in raw:
        return default
    try:
        return float(raw[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {exc}") from None


def _as_int(raw: dict[str, str], key: str, default=None) -> int | None:
    if key not in raw:
        return default
    try:
        return int(raw[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {exc}") from None


def _as_length(value: str) -> int | None:
    if value.lower() in ("none", "inf", "infinite"):
        return None
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigError(f"key 'L': {exc}") from None


@dataclass
class RunConfig:
    """Validated run parameters shared by the subcommands."""

    family: str | None = None
    L: int | None = None
    L_given: bool = False
    kT_list: tuple[float, ...] = ()
    delta: float = 0.0
    h: float = 0.0
    lam: float = 0.0
    gamma: float = 1.0
    axis: str | None = None
    start: float | None = None
    stop: float | None = None
    eta: float = DEFAULT_ETA
    method: str = DEFAULT_METHOD
    order: int = 1
    detectors: tuple[str, ...] = ()
    window: tuple[float, float] | None = None
    candidate: float | None = None
    out: Path = Path(".")
    workers: int = 1
    seed: int = 0
    solver: str = "auto"
    input_theta: float | None = None
    input_chi: float | None = None
    bell: str = "phi+"
    runs: int = 10000
    correlators: Correlators | None = None

    @classmethod
    def from_mapping(cls, raw: dict[str, str]) -> "RunConfig":
        cfg = cls()
        cfg.family = raw.get("family")
        if cfg.family is not None and cfg.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}, got {cfg.family!r}")
        if "L" in raw:
            cfg.L = _as_length(raw["L"])
            cfg.L_given = True
        kts: list[float] = []
        if "kT_list" in raw:
            try:
                kts = [float(p) for p in raw["kT_list"].split(",") if p.strip()]
            except ValueError as exc:
                raise ConfigError(f"key 'kT_list': {exc}") from None
        elif "kT" in raw:
            kts = [_as_float(raw, "kT")]
        cfg.kT_list = tuple(kts)
        if any(not (k >= 0.0) for k in cfg.kT_list):
            raise ConfigError(f"all kT must be >= 0, got {cfg.kT_list}")
        cfg.delta = _as_float(raw, "delta", 0.0)
        cfg.h = _as_float(raw, "h", 0.0)
        cfg.lam = _as_float(raw, "lam", 0.0)
        cfg.gamma = _as_float(raw, "gamma", 1.0)
        cfg.axis = raw.get("axis")
        if cfg.axis is not None and cfg.axis not in AXIS_FIELDS:
            raise ConfigError(
                f"axis must be one of {sorted(AXIS_FIELDS)}, got {cfg.axis!r}"
            )
        cfg.start = _as_float(raw, "start")
        cfg.stop = _as_float(raw, "stop")
        cfg.eta = _as_float(raw, "eta", DEFAULT_ETA)
        if not (cfg.eta > 0.0):
            raise ConfigError(f"eta must be > 0, got {cfg.eta}")
        cfg.method = raw.get("method", DEFAULT_METHOD)
        if cfg.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {cfg.method!r}")
        cfg.order = _as_int(raw, "order", 1)
        if cfg.order not in (1, 2):
            raise ConfigError(f"order must be 1 or 2, got {cfg.order}")
        if "detectors" in raw:
            names = tuple(p.strip() for p in raw["detectors"].split(",") if p.strip())
            for name in names:
                if name not in ESTIMATABLE:
                    raise ConfigError(
                        f"unknown detector {name!r}; choose from {ESTIMATABLE}"
                    )
            cfg.detectors = names
        lo = _as_float(raw, "window_lo")
        hi = _as_float(raw, "window_hi")
        if (lo is None) != (hi is None):
            raise ConfigError("window_lo and window_hi must be given together")
        if lo is not None:
            if not (lo < hi):
                raise ConfigError(f"need window_lo < window_hi, got ({lo}, {hi})")
            cfg.window = (lo, hi)
        cfg.candidate = _as_float(raw, "candidate")
        if "out" in raw:
            cfg.out = Path(raw["out"])
        cfg.workers = _as_int(raw, "workers", 1)
        if cfg.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {cfg.workers}")
        cfg.seed = _as_int(raw, "seed", 0)
        cfg.solver = raw.get("solver", "auto")
        if cfg.solver not in ("auto", "dense", "sector"):
            raise ConfigError(f"solver must be auto|dense|sector, got {cfg.solver!r}")
        cfg.input_theta = _as_float(raw, "input_theta")
        cfg.input_chi = _as_float(raw, "input_chi")
        cfg.bell = raw.get("bell", "phi+")
        if cfg.bell not in BELL_LABELS:
            raise ConfigError(f"bell must be one of {BELL_LABELS}, got {cfg.bell!r}")
        cfg.runs = _as_int(raw, "runs", 10000)
        if cfg.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {cfg.runs}")
        corr_keys = [k for k in ("z", "xx", "yy", "zz") if k in raw]
        if corr_keys:
            if len(corr_keys) != 4:
                raise ConfigError("give all four of z, xx, yy, zz or none")
            cfg.correlators = Correlators(
                z=_as_float(raw, "z"),
                xx=_as_float(raw, "xx"),
                yy=_as_float(raw, "yy"),
                zz=_as_float(raw, "zz"),
            )
        return cfg

    def model_template(self) -> ModelSpec:
        """The ModelSpec shared by every sweep point (kT is per result)."""
        if self.family is None:
            raise ConfigError("missing key 'family'")
        if not self.kT_list:
            raise ConfigError("missing key 'kT_list' (or 'kT')")
        length = self.L if self.L_given else 12
        try:
            return ModelSpec(
                family=self.family,
                L=length,
                kT=self.kT_list[0],
                delta=self.delta,
                h=self.h,
                lam=self.lam,
                gamma=self.gamma,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def require_sweep_axis(self) -> None:
        if self.axis is None:
            raise ConfigError("missing key 'axis'")
        if self.start is None or self.stop is None:
            raise ConfigError("missing key 'start' or 'stop'")
        if not (self.stop > self.start):
            raise ConfigError(f"need stop > start, got [{self.start}, {self.stop}]")


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _sweep_rows(result) -> list[str]:
    rows = []
    for rec in result.records:
        cells = [_fmt(rec.param), _fmt(result.kT)]
        for name in (
            "z",
            "xx",
            "yy",
            "zz",
            "qd",
            "theta_star",
            "sqc_x",
            "sqc_y",
            "sqc_z",
            "lqc_x",
            "lqc_y",
            "lqc_z",
        ):
            cells.append(_fmt(rec.value(name)))
        for name in ("lqc_x_divergent", "lqc_y_divergent", "lqc_z_divergent"):
            cells.append(str(int(rec.value(name))))
        cells.append(_fmt(rec.fmax_ext))
        cells.append(rec.fmax_branch or "")
        cells.append(_fmt(rec.dmin_int))
        cells.append(rec.dmin_branch or "")
        rows.append(",".join(cells))
    return rows


def write_sweep_csv(result, path: Path) -> None:
    lines = [SWEEP_HEADER] + _sweep_rows(result)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_sweep(cfg: RunConfig) -> int:
    cfg.require_sweep_axis()
    template = cfg.model_template()
    results = sweep(
        template,
        cfg.axis,
        cfg.start,
        cfg.stop,
        cfg.eta,
        cfg.kT_list,
        method=cfg.solver,
        workers=cfg.workers,
    )
    cfg.out.mkdir(parents=True, exist_ok=True)
    for result in results:
        path = cfg.out / f"sweep_kT{_fmt(result.kT)}.csv"
        write_sweep_csv(result, path)
        note = ""
        if result.failed_count:
            note = f"  ({result.failed_count} failed points)"
        print(f"wrote {path}  [{len(result.records)} rows]{note}")
    return EXIT_OK


def cmd_estimate(cfg: RunConfig) -> int:
    cfg.require_sweep_axis()
    if not cfg.detectors:
        raise ConfigError("missing key 'detectors'")
    if cfg.window is None and cfg.candidate is None:
        raise ConfigError("need window_lo/window_hi or candidate")
    window = cfg.window
    if window is None:
        window = (cfg.candidate - 0.5, cfg.candidate + 0.5)
    if window[0] < cfg.start or window[1] > cfg.stop:
        raise ConfigError(
            f"window {window} leaves the sweep range [{cfg.start}, {cfg.stop}]"
        )
    template = cfg.model_template()
    results = sweep(
        template,
        cfg.axis,
        cfg.start,
        cfg.stop,
        cfg.eta,
        cfg.kT_list,
        method=cfg.solver,
        workers=cfg.workers,
    )
    estimates = []
    for detector in cfg.detectors:
        for result in results:
            estimates.append(
                estimate_qcp(
                    result,
                    detector,
                    order=cfg.order,
                    method=cfg.method,
                    window=window,
                )
            )
    cfg.out.mkdir(parents=True, exist_ok=True)
    est_path = cfg.out / "estimates.csv"
    lines = [ESTIMATE_HEADER]
    for e in estimates:
        lines.append(
            ",".join(
                [
                    e.detector,
                    _fmt(e.kT),
                    e.method,
                    str(e.order),
                    _fmt(e.estimate),
                    _fmt(e.uncertainty),
                ]
            )
        )
    with open(est_path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {est_path}  [{len(estimates)} estimates]")

    summary = ["T->0 extrapolation:"]
    extrap_lines = [EXTRAPOLATION_HEADER]
    wrote_any = False
    for detector in cfg.detectors:
        per_detector = [e for e in estimates if e.detector == detector]
        if len({e.kT for e in per_detector}) < 3:
            summary.append(f"  {detector}: skipped (needs >= 3 temperatures)")
            continue
        fit = extrapolate_to_zero(per_detector)
        extrap_lines.append(
            ",".join(
                [
                    fit.detector,
                    fit.method,
                    str(fit.order),
                    _fmt(fit.intercept),
                    _fmt(fit.stderr),
                    _fmt(fit.slope),
                    str(fit.n_points),
                ]
            )
        )
        wrote_any = True
        summary.append(
            f"  {detector}: intercept {_fmt(fit.intercept)} +- {_fmt(fit.stderr)}"
            f"  (slope {_fmt(fit.slope)}, n = {fit.n_points})"
        )
    if wrote_any:
        ext_path = cfg.out / "extrapolation.csv"
        with open(ext_path, "w", newline="\n") as fh:
            fh.write("\n".join(extrap_lines) + "\n")
        print(f"wrote {ext_path}")
    print("\n".join(summary))
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    if cfg.correlators is not None:
        corr = cfg.correlators
    else:
        spec = cfg.model_template()
        corr = thermal_correlators(spec, method=cfg.solver)
    x = build_xstate(corr)
    if cfg.input_theta is None or cfg.input_chi is None:
        raise ConfigError("missing key 'input_theta' or 'input_chi'")
    qubit = InputQubit(theta=cfg.input_theta, chi=cfg.input_chi)
    result = simulate_protocol(x, qubit, cfg.bell, runs=cfg.runs, seed=cfg.seed)
    closed_f = max_mean_fidelity(x)
    closed_d = min_mean_trace_distance(x)
    print(f"resource correlators: z={_fmt(corr.z)} xx={_fmt(corr.xx)} "
          f"yy={_fmt(corr.yy)} zz={_fmt(corr.zz)}")
    print(f"correction set {cfg.bell!r}, runs {cfg.runs}, seed {cfg.seed}")
    print("outcome counts: " + ", ".join(
        f"{label}:{count}" for label, count in zip(BELL_LABELS, result.counts)
    ))
    print(f"mean fidelity       {result.mean_fidelity:.6f} "
          f"+- {result.stderr_fidelity:.6f}")
    print(f"mean trace distance {result.mean_trace_distance:.6f} "
          f"+- {result.stderr_trace_distance:.6f}")
    print(f"closed-form detectors: fmax_ext {_fmt(closed_f.value)} "
          f"({closed_f.branch}), dmin_int {_fmt(closed_d.value)} "
          f"({closed_d.branch})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    expected: str
    got: str
    tol: str
    passed: bool


def _close(name: str, got: float, want: float, tol: float) -> Check:
    return Check(
        name=name,
        expected=_fmt(want),
        got=_fmt(got),
        tol=_fmt(tol),
        passed=bool(abs(got - want) <= tol),
    )


def _flag(name: str, got: bool, want: bool) -> Check:
    return Check(
        name=name,
        expected=str(want),
        got=str(got),
        tol="exact",
        passed=bool(got == want),
    )


def _verify_critical_lines() -> list[Check]:
    checks = [
        _close("delta1(h=0)", xxz_delta1(0.0), -1.0, 1e-12),
        _close("delta1(h=12)", xxz_delta1(12.0), 2.0, 1e-12),
        _close("delta2(h=12)", xxz_delta2(12.0), 4.875, 1e-3),
        _close("delta2(h->0+)", xxz_delta2(1e-50), 1.0, 1e-3),
    ]
    return checks


def _verify_bell() -> list[Check]:
    bell = make_xstate(0.5, 0.0, 0.0, 0.5, 0.5)  # (|00> + |11>)/sqrt(2)
    checks = []
    for axis in AXES:
        spec = spectrum_eigenvalues(bell, axis)
        ordered = sorted(spec.alphas)
        for i, want in enumerate((-1.0, -1.0, 0.0, 0.0)):
            checks.append(
                _close(f"bell alpha[{i}] axis {axis}", ordered[i], want, 1e-12)
            )
    for axis in AXES:
        checks.append(
            _flag(
                f"bell log-spectrum divergent axis {axis}",
                log_spectrum(bell, axis).divergent,
                True,
            )
        )
    checks.append(_close("bell discord = ln 2", quantum_discord(bell).value,
                         math.log(2.0), 1e-9))
    checks.append(_close("bell fmax_ext = 1", max_mean_fidelity(bell).value,
                         1.0, 1e-12))
    checks.append(_close("bell dmin_int = 0", min_mean_trace_distance(bell).value,
                         0.0, 1e-12))
    mixed = make_xstate(0.25, 0.25, 0.0, 0.25, 0.0)
    checks.append(_close("maximally mixed discord = 0",
                         quantum_discord(mixed).value, 0.0, 1e-12))
    return checks


def _verify_oracles() -> list[Check]:
    rng = np.random.default_rng(VERIFY_ORACLE_SEED)
    worst_coh = 0.0
    worst_f = 0.0
    worst_d = 0.0
    worst_qd = 0.0
    thetas = np.linspace(0.0, 0.5 * math.pi, 10001)
    for _ in range(VERIFY_ORACLE_STATES):
        x = sample_random_xstate(rng)
        for axis in AXES:
            closed = np.sort(np.asarray(spectrum_eigenvalues(x, axis).alphas))
            dense = np.sort(spectrum_eigenvalues_oracle(x, axis))
            worst_coh = max(worst_coh, float(np.max(np.abs(closed - dense))))
        brute = max_mean_fidelity_bruteforce(x, n_theta=64, n_chi=128)
        worst_f = max(worst_f, abs(max_mean_fidelity(x).value - brute.value))
        worst_d = max(
            worst_d,
            abs(min_mean_trace_distance(x).value - min_mean_trace_distance_bruteforce(x)),
        )
        dense_min = float(np.min(s_tilde(x, thetas)))
        qd_direct = entropy_single(x) - entropy_pair(x) + dense_min
        worst_qd = max(worst_qd, abs(quantum_discord(x).value - max(qd_direct, 0.0)))
    n = VERIFY_ORACLE_STATES
    return [
        _close(f"coherence spectra vs dense oracle (N={n})", worst_coh, 0.0, 1e-10),
        _close(f"fmax_ext closed vs brute force (N={n})", worst_f, 0.0, 1e-6),
        _close(f"dmin_int closed vs brute force (N={n})", worst_d, 0.0, 1e-9),
        _close(f"discord minimization vs dense theta grid (N={n})", worst_qd, 0.0, 1e-8),
    ]


def _verify_symmetry() -> list[Check]:
    checks = []
    c = thermal_correlators(ModelSpec("xxz", 8, 0.3, delta=1.0))
    checks.append(_close("xxz Delta=1: xx = zz", c.xx - c.zz, 0.0, 1e-10))
    c = thermal_correlators(ModelSpec("xxz", 8, 0.3, delta=-1.0))
    checks.append(_close("xxz Delta=-1: xx = -zz", c.xx + c.zz, 0.0, 1e-10))
    spec = ModelSpec("xxz_field", 8, 0.2, delta=1.5, h=3.0)
    cs = thermal_correlators(spec, method="sector")
    cd = thermal_correlators(spec, method="dense")
    for name in ("z", "xx", "yy", "zz"):
        checks.append(
            _close(
                f"xxz_field sector vs dense: {name}",
                getattr(cs, name) - getattr(cd, name),
                0.0,
                1e-10,
            )
        )
    spec = ModelSpec("xy", 8, 0.2, lam=1.1, gamma=1.0)
    cs = thermal_correlators(spec, method="sector")
    cd = thermal_correlators(spec, method="dense")
    for name in ("z", "xx", "yy", "zz"):
        checks.append(
            _close(
                f"xy sector vs dense: {name}",
                getattr(cs, name) - getattr(cd, name),
                0.0,
                1e-10,
            )
        )
    ct = xy_thermo_correlators(0.8, 1.0, 1.0)
    cf = thermal_correlators(ModelSpec("xy", 12, 1.0, lam=0.8, gamma=1.0))
    err = max(
        abs(cf.z - ct.z), abs(cf.xx - ct.xx), abs(cf.yy - ct.yy), abs(cf.zz - ct.zz)
    )
    checks.append(_close("xy L=12 vs thermodynamic limit (kT=1)", err, 0.0, 1e-4))
    c = thermal_correlators(ModelSpec("xxz_field", 6, math.inf, delta=0.9, h=1.0))
    for name in ("z", "xx", "yy", "zz"):
        checks.append(
            _close(f"kT=inf: {name} = 0", getattr(c, name), 0.0, 1e-12)
        )
    return checks


def cmd_verify(subset: str) -> int:
    if subset not in VERIFY_SUBSETS:
        raise ConfigError(f"subset must be one of {VERIFY_SUBSETS}, got {subset!r}")
    runner = {
        "lines": _verify_critical_lines,
        "bell": _verify_bell,
        "oracles": _verify_oracles,
        "symmetry": _verify_symmetry,
    }[subset]
    checks = runner()
    width = max(len(c.name) for c in checks)
    failures = 0
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        failures += not c.passed
        print(
            f"{status}  {c.name:<{width}}  expected {c.expected}  "
            f"got {c.got}  tol {c.tol}"
        )
    print(f"{subset}: {len(checks) - failures}/{len(checks)} checks passed")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="qcpdetect", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", type=Path, help="flat key = value config file")
        p.add_argument("--out", type=Path, help="output directory")
        p.add_argument("--workers", type=int, help="parallel grid workers")
        p.add_argument("--seed", type=int, help="RNG seed (simulate)")
        p.add_argument("--method", choices=METHODS, help="finite-difference method")
        p.add_argument("--L", type=str, help="chain length (or 'none' for L = inf)")

    for name in ("sweep", "estimate", "simulate"):
        add_common(sub.add_parser(name))
    verify = sub.add_parser("verify")
    verify.add_argument("subset", choices=VERIFY_SUBSETS)
    return parser


def _load_config(args) -> RunConfig:
    raw: dict[str, str] = {}
    if args.config is not None:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        raw = parse_config_text(text, source=str(args.config))
    if args.out is not None:
        raw["out"] = str(args.out)
    if args.workers is not None:
        raw["workers"] = str(args.workers)
    if args.seed is not None:
        raw["seed"] = str(args.seed)
    if args.method is not None:
        raw["method"] = str(args.method)
    if args.L is not None:
        raw["L"] = str(args.L)
    return RunConfig.from_mapping(raw)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify":
            return cmd_verify(args.subset)
        cfg = _load_config(args)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "estimate":
            return cmd_estimate(cfg)
        return cmd_simulate(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # computation failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
