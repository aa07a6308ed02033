"""Parameter sweeps, finite differences, and critical-point estimation.

A sweep walks one control axis (anisotropy, field, coupling, ...) over a
uniform grid, computes the thermal pair correlators at each point (one
diagonalization per point, reused across every requested temperature), and
evaluates all five detectors on the resulting X state.  Failures at a grid
point are caught and recorded, never aborting the sweep; downstream
derivative stencils that touch a failed point come out undefined (NaN)
rather than interpolated.

Critical points are then located as the extremum of a finite-difference
derivative of a chosen detector: forward [f(x+e)-f(x)]/e, central
[f(x+e)-f(x-e)]/(2e), or backward [f(x)-f(x-e)]/e, each optionally applied
twice for a second derivative.  The estimate is the grid point maximizing
|derivative| inside an explicit search window, quoted as +- eta for order 1
and +- 2 eta for order 2.  Estimates collected over several temperatures
extrapolate to kT = 0 by a linear least-squares fit.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, replace

import numpy as np

from .coherence import AXES, coherence_entropy, log_spectrum
from .discord import quantum_discord
from .models import ModelSpec, diagonalize, xy_thermo_correlators
from .teleport import max_mean_fidelity, min_mean_trace_distance
from .xstate import Correlators, XState, build_xstate

DEFAULT_ETA = 0.01
DEFAULT_METHOD = "forward"
DEFAULT_WINDOW_HALF_WIDTH = 0.5

METHODS = ("forward", "central", "backward")

# Control-axis name -> (ModelSpec field, families it drives)
AXIS_FIELDS: dict[str, tuple[str, tuple[str, ...]]] = {
    "delta": ("delta", ("xxz", "xxz_field")),
    "h": ("h", ("xxz_field",)),
    "lambda": ("lam", ("xy",)),
    "gamma": ("gamma", ("xy",)),
}

# Numeric per-record columns, in CSV emission order (branches are strings and
# live on the record itself).
NUMERIC_COLUMNS = (
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
    "lqc_x_divergent",
    "lqc_y_divergent",
    "lqc_z_divergent",
    "fmax_ext",
    "dmin_int",
)


@dataclass(frozen=True)
class SweepRecord:
    """Everything computed at one grid point and one temperature.

    ``failed`` marks a point whose model solve or detector evaluation raised;
    its detector fields are NaN and ``error`` holds the message.
    """

    param: float
    failed: bool
    error: str | None
    correlators: Correlators | None
    xstate: XState | None
    qd: float = math.nan
    theta_star: float = math.nan
    sqc_x: float = math.nan
    sqc_y: float = math.nan
    sqc_z: float = math.nan
    lqc_x: float = math.nan
    lqc_y: float = math.nan
    lqc_z: float = math.nan
    lqc_x_divergent: bool = False
    lqc_y_divergent: bool = False
    lqc_z_divergent: bool = False
    fmax_ext: float = math.nan
    fmax_branch: str | None = None
    dmin_int: float = math.nan
    dmin_branch: str | None = None

    def value(self, column: str) -> float:
        """Numeric value of a named column, NaN when the point failed."""
        if column not in NUMERIC_COLUMNS:
            raise KeyError(f"unknown numeric column {column!r}")
        if column in ("z", "xx", "yy", "zz"):
            if self.correlators is None:
                return math.nan
            return getattr(self.correlators, column)
        raw = getattr(self, column)
        if isinstance(raw, bool):
            return float(raw)
        return raw


@dataclass(frozen=True)
class SweepResult:
    """One temperature's worth of a sweep: uniform grid plus per-point records.

    ``spec`` is the model template with this result's kT filled in; the swept
    field itself is meaningless there (it varies along ``params``).
    """

    spec: ModelSpec
    axis: str
    eta: float
    kT: float
    params: np.ndarray
    records: list[SweepRecord]

    def column(self, name: str) -> np.ndarray:
        """A numeric column over the grid; NaN at failed points."""
        if name == "param":
            return self.params.copy()
        return np.array([rec.value(name) for rec in self.records])

    @property
    def failed_count(self) -> int:
        return sum(rec.failed for rec in self.records)


def evaluate_detectors(param: float, corr: Correlators) -> SweepRecord:
    """All five detectors on the X state built from one set of correlators."""
    x = build_xstate(corr)
    qd = quantum_discord(x)
    sqc = {ax: coherence_entropy(x, ax) for ax in AXES}
    lqc = {ax: log_spectrum(x, ax) for ax in AXES}
    fmax = max_mean_fidelity(x)
    dmin = min_mean_trace_distance(x)
    return SweepRecord(
        param=param,
        failed=False,
        error=None,
        correlators=corr,
        xstate=x,
        qd=qd.value,
        theta_star=qd.theta_star,
        sqc_x=sqc["x"],
        sqc_y=sqc["y"],
        sqc_z=sqc["z"],
        lqc_x=lqc["x"].value,
        lqc_y=lqc["y"].value,
        lqc_z=lqc["z"].value,
        lqc_x_divergent=lqc["x"].divergent,
        lqc_y_divergent=lqc["y"].divergent,
        lqc_z_divergent=lqc["z"].divergent,
        fmax_ext=fmax.value,
        fmax_branch=fmax.branch,
        dmin_int=dmin.value,
        dmin_branch=dmin.branch,
    )


def _failed_record(param: float, exc: BaseException) -> SweepRecord:
    return SweepRecord(
        param=param,
        failed=True,
        error=f"{type(exc).__name__}: {exc}",
        correlators=None,
        xstate=None,
    )


def _point_records(
    template: ModelSpec,
    axis_field: str,
    param: float,
    kT_list: tuple[float, ...],
    method: str,
) -> list[SweepRecord]:
    """Records for one grid point across all temperatures.

    The model is solved once; each temperature reuses the eigensystem.  A
    model failure marks every temperature's record failed; a detector failure
    marks only its own.
    """
    try:
        spec = replace(template, **{axis_field: param}, kT=kT_list[0])
        if spec.L is None:
            corrs = [
                xy_thermo_correlators(spec.lam, spec.gamma, kT) for kT in kT_list
            ]
        else:
            solution = diagonalize(spec, method=method)
            corrs = [solution.correlators(kT) for kT in kT_list]
    except Exception as exc:
        return [_failed_record(param, exc) for _ in kT_list]
    records = []
    for corr in corrs:
        try:
            records.append(evaluate_detectors(param, corr))
        except Exception as exc:
            records.append(_failed_record(param, exc))
    return records


def _grid(start: float, stop: float, eta: float) -> np.ndarray:
    if not (eta > 0.0):
        raise ValueError(f"eta must be > 0, got {eta}")
    if not (stop > start):
        raise ValueError(f"need stop > start, got [{start}, {stop}]")
    count = (stop - start) / eta
    n = int(round(count))
    if abs(count - n) > 1e-9 * max(1.0, abs(count)):
        raise ValueError(
            f"grid [{start}, {stop}] is not an integer number of eta = {eta} steps"
        )
    return start + np.arange(n + 1) * eta


def sweep(
    template: ModelSpec,
    axis: str,
    start: float,
    stop: float,
    eta: float = DEFAULT_ETA,
    kT_list: tuple[float, ...] | list[float] = (),
    method: str = "auto",
    workers: int = 1,
) -> list[SweepResult]:
    """Sweep one control axis, returning one SweepResult per temperature.

    Points are independent work items (optionally evaluated by a thread
    pool); assembly is index-ordered, so results are deterministic and
    independent of evaluation order.
    """
    if axis not in AXIS_FIELDS:
        raise ValueError(f"axis must be one of {sorted(AXIS_FIELDS)}, got {axis!r}")
    axis_field, families = AXIS_FIELDS[axis]
    if template.family not in families:
        raise ValueError(f"axis {axis!r} does not apply to family {template.family!r}")
    kts = tuple(float(k) for k in (kT_list or (template.kT,)))
    if any(not (k >= 0.0) for k in kts):
        raise ValueError(f"all kT must be >= 0, got {kts}")
    params = _grid(start, stop, eta)

    def work(param: float) -> list[SweepRecord]:
        return _point_records(template, axis_field, float(param), kts, method)

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            per_point = list(pool.map(work, params))
    else:
        per_point = [work(p) for p in params]

    results = []
    for j, kT in enumerate(kts):
        spec_kt = replace(template, kT=kT)
        records = [per_point[i][j] for i in range(len(params))]
        results.append(
            SweepResult(
                spec=spec_kt,
                axis=axis,
                eta=eta,
                kT=kT,
                params=params,
                records=records,
            )
        )
    return results


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------


def _derivative_once(values: np.ndarray, eta: float, method: str) -> np.ndarray:
    n = values.size
    out = np.full(n, math.nan)
    if method == "forward":
        out[: n - 1] = (values[1:] - values[: n - 1]) / eta
    elif method == "backward":
        out[1:] = (values[1:] - values[: n - 1]) / eta
    elif method == "central":
        out[1 : n - 1] = (values[2:] - values[: n - 2]) / (2.0 * eta)
    else:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    return out


def derivative(
    values: np.ndarray | list[float],
    eta: float,
    method: str = DEFAULT_METHOD,
    order: int = 1,
) -> np.ndarray:
    """Finite-difference derivative on a uniform grid, aligned with the input.

    Order 2 applies the chosen method twice.  Entries whose stencil leaves
    the grid, or touches a NaN input (a failed sweep point), are NaN.
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size < 3:
        raise ValueError("need a 1-d array of at least 3 grid values")
    if not (eta > 0.0):
        raise ValueError(f"eta must be > 0, got {eta}")
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    out = _derivative_once(vals, eta, method)
    if order == 2:
        out = _derivative_once(out, eta, method)
    return out


@dataclass(frozen=True)
class QcpEstimate:
    """A located critical point: where |d^order detector / d param^order| peaks."""

    kT: float
    detector: str
    order: int
    method: str
    estimate: float
    uncertainty: float  # eta * order

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")


def estimate_qcp(
    result: SweepResult,
    detector: str,
    order: int = 1,
    method: str = DEFAULT_METHOD,
    window: tuple[float, float] | None = None,
    candidate: float | None = None,
) -> QcpEstimate:
    """Locate a critical point as the in-window extremum of |derivative|.

    The search window is an explicit (lo, hi) interval, or candidate +- 0.5
    when only a candidate is given; it must lie inside the grid interior.
    Ties break toward the smaller control value.  Raises ValueError when the
    window contains no defined derivative value.
    """
    if window is None:
        if candidate is None:
            raise ValueError("provide either window=(lo, hi) or candidate")
        window = (
            candidate - DEFAULT_WINDOW_HALF_WIDTH,
            candidate + DEFAULT_WINDOW_HALF_WIDTH,
        )
    lo, hi = float(window[0]), float(window[1])
    if not (lo < hi):
        raise ValueError(f"window must satisfy lo < hi, got ({lo}, {hi})")
    params = result.params
    if lo < params[0] - 1e-12 or hi > params[-1] + 1e-12:
        raise ValueError(
            f"window ({lo}, {hi}) leaves the grid [{params[0]}, {params[-1]}]"
        )
    deriv = derivative(result.column(detector), result.eta, method, order)
    in_window = (params >= lo - 1e-12) & (params <= hi + 1e-12)
    usable = in_window & np.isfinite(deriv)
    if not usable.any():
        raise ValueError(
            f"no defined {method} order-{order} derivative of {detector!r} "
            f"inside window ({lo}, {hi})"
        )
    magnitude = np.where(usable, np.abs(deriv), -math.inf)
    best = int(np.argmax(magnitude))  # first occurrence = smaller param on ties
    return QcpEstimate(
        kT=result.kT,
        detector=detector,
        order=order,
        method=method,
        estimate=float(params[best]),
        uncertainty=result.eta * order,
    )


@dataclass(frozen=True)
class ZeroTemperatureExtrapolation:
    """kT = 0 intercept of a linear fit of QCP estimates against kT."""

    detector: str
    method: str
    order: int
    intercept: float
    stderr: float
    slope: float
    n_points: int


def extrapolate_to_zero(estimates: list[QcpEstimate]) -> ZeroTemperatureExtrapolation:
    """Least-squares linear fit of estimate vs kT, reported at kT = 0.

    Needs estimates at >= 3 distinct temperatures (with matching detector,
    method, and order); the standard error of the intercept uses the usual
    unbiased residual variance.  A fit through exactly collinear points
    reports stderr 0.
    """
    if len(estimates) < 3:
        raise ValueError("need at least 3 estimates to extrapolate")
    keys = {(e.detector, e.method, e.order) for e in estimates}
    if len(keys) != 1:
        raise ValueError(f"estimates mix detectors/methods/orders: {sorted(keys)}")
    detector, method, order = next(iter(keys))
    kts = np.array([e.kT for e in estimates])
    vals = np.array([e.estimate for e in estimates])
    if np.ptp(kts) == 0.0:
        raise ValueError("all estimates share one kT; fit is degenerate")
    n = kts.size
    kt_mean = kts.mean()
    sxx = float(((kts - kt_mean) ** 2).sum())
    slope = float(((kts - kt_mean) * (vals - vals.mean())).sum() / sxx)
    intercept = float(vals.mean() - slope * kt_mean)
    residuals = vals - (intercept + slope * kts)
    if n > 2:
        sigma2 = float((residuals**2).sum() / (n - 2))
    else:
        sigma2 = 0.0
    stderr = math.sqrt(max(sigma2, 0.0) * (1.0 / n + kt_mean**2 / sxx))
    return ZeroTemperatureExtrapolation(
        detector=detector,
        method=method,
        order=order,
        intercept=intercept,
        stderr=stderr,
        slope=slope,
        n_points=n,
    )
