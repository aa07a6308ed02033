"""Quantum discord of X-form two-qubit states.

For X states the measurement side of the discord optimization reduces to a
single angle: the optimal projective measurement on one qubit can be taken in
the plane spanned by sigma-z and a transverse axis, parameterized by
theta in [0, pi/2] (theta = 0 measures sigma-z, theta = pi/2 sigma-x).  The
discord is

    QD = S(rho_B) - S(rho_AB) + min_theta S~(theta)

with all entropies in nats.  S~(theta) has a closed form in the X-state
parameters, so the minimization is a cheap 1-d search: a coarse grid scan
followed by golden-section refinement of the best bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .xstate import XState

# Measurement-angle search controls.
THETA_GRID_POINTS = 1001
THETA_REFINE_TOL = 1e-9
# Results this close to zero (rounding residue on classical states) clamp to 0.
ZERO_CLAMP = 1e-10

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class DiscordResult:
    """Discord value in nats together with the minimizing angle."""

    value: float
    theta_star: float


def _xlogx(p):
    """p * ln(p) with the conventions 0 ln 0 = 0 and p clamped to [0, 1]."""
    p = np.clip(p, 0.0, 1.0)
    out = np.zeros_like(p)
    mask = p > 0.0
    out[mask] = p[mask] * np.log(p[mask])
    return out


def entropy_single(x: XState) -> float:
    """Von Neumann entropy of the one-qubit reduction diag(a+b, b+d), in nats."""
    return float(-np.sum(_xlogx(np.array([x.a + x.b, x.b + x.d]))))


def entropy_pair(x: XState) -> float:
    """Von Neumann entropy of the pair state, from the closed-form spectrum."""
    return float(-np.sum(_xlogx(x.eigenvalues())))


def s_tilde(x: XState, theta) -> np.ndarray | float:
    """Measured conditional entropy S~(theta); accepts scalar or array theta.

    With Lambda_{1,2} = [1 +/- (a-d) cos(theta)] / 2 and

      lambda_{1,2} = (1 + (a-d)cos(t) +/- sqrt([a-d+(a-2b+d)cos(t)]^2
                      + 4(|c|+|e|)^2 sin(t)^2)) / 4
      lambda_{3,4} = (1 - (a-d)cos(t) +/- sqrt([a-d-(a-2b+d)cos(t)]^2
                      + 4(|c|+|e|)^2 sin(t)^2)) / 4

    S~ = sum_i Lambda_i ln Lambda_i - sum_j lambda_j ln lambda_j >= 0.
    """
    theta_arr = np.asarray(theta, dtype=float)
    ct = np.cos(theta_arr)
    st = np.sin(theta_arr)
    zdiff = x.a - x.d
    zmid = x.a - 2.0 * x.b + x.d
    off = abs(x.c) + abs(x.e)

    lam_big = np.stack([0.5 * (1.0 + zdiff * ct), 0.5 * (1.0 - zdiff * ct)])

    r12 = np.sqrt((zdiff + zmid * ct) ** 2 + 4.0 * off**2 * st**2)
    r34 = np.sqrt((zdiff - zmid * ct) ** 2 + 4.0 * off**2 * st**2)
    lam = np.stack(
        [
            0.25 * (1.0 + zdiff * ct + r12),
            0.25 * (1.0 + zdiff * ct - r12),
            0.25 * (1.0 - zdiff * ct + r34),
            0.25 * (1.0 - zdiff * ct - r34),
        ]
    )

    value = np.sum(_xlogx(lam_big), axis=0) - np.sum(_xlogx(lam), axis=0)
    if np.ndim(theta) == 0:
        return float(value)
    return value


def _golden_min(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of f on [lo, hi] to bracket width tol."""
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def quantum_discord(x: XState) -> DiscordResult:
    """Discord QD = S(rho_B) - S(rho_AB) + min_theta S~(theta), in nats.

    The minimization scans THETA_GRID_POINTS points on [0, pi/2], then
    refines the best bracket by golden section to width THETA_REFINE_TOL.
    The refined value can only improve on the grid value; the better of the
    two is kept.  Values within ZERO_CLAMP of zero clamp to exactly 0.
    """
    grid = np.linspace(0.0, 0.5 * math.pi, THETA_GRID_POINTS)
    on_grid = s_tilde(x, grid)
    k = int(np.argmin(on_grid))
    theta_best, s_best = float(grid[k]), float(on_grid[k])

    step = grid[1] - grid[0]
    lo = max(0.0, theta_best - step)
    hi = min(0.5 * math.pi, theta_best + step)
    theta_ref, s_ref = _golden_min(lambda t: s_tilde(x, t), lo, hi, THETA_REFINE_TOL)
    if s_ref < s_best:
        theta_best, s_best = theta_ref, s_ref

    value = entropy_single(x) - entropy_pair(x) + s_best
    if -ZERO_CLAMP <= value < 0.0:
        value = 0.0
    return DiscordResult(value=value, theta_star=theta_best)
