"""Cumulated payoff and occupation curves on the normalized time axis.

Stage n of the discounted game occupies [t_{n-1}, t_n) with
t_n = 1 - (1-lam)^n; curves are linear between those dates.  The infinite
stage sum is truncated once the ignored discounted mass drops below
``mass_tol`` and closed with a flat segment to t = 1, whose certified error
is recorded on the trajectory.  Cumulative sums run in 80-bit extended
precision so breakpoint identities hold to 1e-12 even at the ~2e5 stages a
discount factor of 1e-4 requires.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .absorbing import AbsorbingGame, bilinear, check_lambda

__all__ = [
    "Trajectory",
    "fit_gamma",
    "occupation_limit",
    "occupation_trajectory",
    "payoff_trajectory",
    "stage_horizon",
    "stage_index",
    "sup_distance",
]

_LD = np.longdouble


@dataclass(frozen=True)
class Trajectory:
    """Piecewise-linear curve on [0, 1] sampled at the stage dates.

    ``tail_bound`` bounds the error introduced by the flat closing segment.
    """

    lam: float
    breakpoints: np.ndarray
    values: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if bp.ndim != 1 or bp.shape != vals.shape or bp.size < 2:
            raise ValueError("breakpoints and values must be matching 1-D arrays")
        if bp[0] != 0.0 or vals[0] != 0.0:
            raise ValueError("trajectories start at (0, 0)")
        if bp[-1] != 1.0:
            raise ValueError("trajectories must extend to t = 1")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    def __call__(self, t):
        return np.interp(t, self.breakpoints, self.values)


def stage_horizon(lam: float, mass_tol: float) -> int:
    """Smallest N with (1-lam)^N <= mass_tol; the tail beyond stage N carries
    at most mass_tol of the discounted weight."""
    lam = check_lambda(lam)
    if not 0.0 < mass_tol < 1.0:
        raise ValueError("mass_tol must lie in (0, 1)")
    if lam == 1.0:
        return 1
    n = max(1, math.ceil(math.log(mass_tol) / math.log1p(-lam)))
    while (1.0 - lam) ** n > mass_tol:
        n += 1
    while n > 1 and (1.0 - lam) ** (n - 1) <= mass_tol:
        n -= 1
    return n


def stage_index(lam: float, t: float, horizon: int) -> int:
    """Stage whose time interval [t_{n-1}, t_n) contains t, capped at horizon."""
    lam = check_lambda(lam)
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if lam == 1.0 or t >= 1.0:
        return min(1 if lam == 1.0 else horizon, horizon)
    n = 1 + math.floor(math.log1p(-t) / math.log1p(-lam))
    return max(1, min(n, horizon))


def _geometric(ratio, n: int) -> np.ndarray:
    """[1, r, r^2, ..., r^(n-1)] in extended precision."""
    out = np.empty(n, dtype=_LD)
    out[0] = 1.0
    if n > 1:
        np.multiply.accumulate(np.full(n - 1, ratio, dtype=_LD), out=out[1:])
    return out


def _assemble(lam: float, discounts: np.ndarray, values: np.ndarray, tail_bound: float) -> Trajectory:
    """Wrap stage values into a Trajectory, closing flat to t = 1."""
    keep = _LD(1.0) - _LD(lam)
    dates = np.asarray(_LD(1.0) - discounts * keep, dtype=float)  # t_n = 1-(1-lam)^n
    vals = np.asarray(values, dtype=float)
    bp = [0.0, *dates.tolist()]
    vv = [0.0, *vals.tolist()]
    if bp[-1] < 1.0:
        bp.append(1.0)
        vv.append(vv[-1])
    else:
        bp[-1] = 1.0
    return Trajectory(lam=lam, breakpoints=np.asarray(bp), values=np.asarray(vv), tail_bound=tail_bound)


def payoff_trajectory(
    game: AbsorbingGame, lam: float, x, y, mass_tol: float = 1e-9
) -> Trajectory:
    """Expected cumulated discounted payoff of a stationary pair over time.

    The expected stage payoff mixes the live payoff with the conditional
    absorbing payoff according to the survival probability (1-p*)^(n-1);
    without absorption the live payoff stands alone.
    """
    lam = check_lambda(lam)
    gxy = bilinear(game, "g", x, y)
    weighted = bilinear(game, "g_star_weighted", x, y)
    absorb = bilinear(game, "p_star", x, y)
    n = stage_horizon(lam, mass_tol)
    keep = _LD(1.0) - _LD(lam)
    discounts = _geometric(keep, n)
    if absorb > 0.0:
        g_bar = weighted / absorb
        survive = _geometric(keep * (_LD(1.0) - _LD(absorb)), n)
        stage = survive * _LD(gxy - g_bar) + discounts * _LD(g_bar)
    else:
        stage = discounts * _LD(gxy)
    values = _LD(lam) * np.cumsum(stage)
    tail = float(discounts[-1] * keep) * game.payoff_bound
    return _assemble(lam, discounts, values, tail)


def occupation_trajectory(
    game: AbsorbingGame, lam: float, x, y, mass_tol: float = 1e-9
) -> Trajectory:
    """Cumulated discounted probability of still being in the live state.

    The stage recursion and the geometric closed form
    (1 - ((1-lam)(1-p*))^n) / (1 + p*/lam - p*) are computed independently
    and must agree to 1e-12 at every breakpoint.
    """
    lam = check_lambda(lam)
    absorb = bilinear(game, "p_star", x, y)
    n = stage_horizon(lam, mass_tol)
    keep = _LD(1.0) - _LD(lam)
    joint = _geometric(keep * (_LD(1.0) - _LD(absorb)), n)
    recursion = _LD(lam) * np.cumsum(joint)
    denom = _LD(1.0) + _LD(absorb) / _LD(lam) - _LD(absorb)
    closed = (_LD(1.0) - joint * (keep * (_LD(1.0) - _LD(absorb)))) / denom
    drift = float(np.max(np.abs(recursion - closed)))
    if drift > 1e-12:
        raise ArithmeticError(
            f"occupation recursion drifted {drift:.3e} from the closed form"
        )
    discounts = _geometric(keep, n)
    return _assemble(lam, discounts, recursion, mass_tol)


def occupation_limit(gamma: float, t):
    """Limit occupation curve for absorption intensity gamma:
    (1 - (1-t)^(1+gamma)) / (1+gamma), taken as 0 when gamma is infinite."""
    if not (gamma >= 0.0 or math.isinf(gamma)):
        raise ValueError("gamma must be nonnegative or infinite")
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("t must lie in [0, 1]")
    if math.isinf(gamma):
        out = np.zeros_like(arr)
    else:
        out = (1.0 - (1.0 - arr) ** (1.0 + gamma)) / (1.0 + gamma)
    return float(out) if np.isscalar(t) or arr.ndim == 0 else out


def fit_gamma(q: Trajectory, floor: float = 1e-9) -> float:
    """Absorption intensity inferred from an occupation trajectory by
    inverting Q(1) = 1/(1+gamma); numerically-zero terminal mass maps to
    infinity."""
    terminal = float(q(1.0))
    if terminal <= floor:
        return math.inf
    return 1.0 / terminal - 1.0


def sup_distance(a, b, grid: int = 1001) -> float:
    """Max absolute gap between two curves on the uniform grid {k/(grid-1)}.

    Accepts trajectories or any callable vectorized over a time array.
    """
    if grid < 2:
        raise ValueError("grid must have at least 2 points")
    ts = np.linspace(0.0, 1.0, grid)
    fa = np.asarray(a(ts), dtype=float)
    fb = np.asarray(b(ts), dtype=float)
    return float(np.max(np.abs(fa - fb)))
