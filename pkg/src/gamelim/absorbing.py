"""Finite absorbing games and their discounted analysis.

An absorbing game has one live state.  Playing (i, j) there pays
``g[i, j]``, absorbs with probability ``p_star[i, j]`` (freezing the payoff
``g_star[i, j]`` forever), and otherwise repeats.  ``G_star`` denotes the
absorption-weighted payoff ``p_star * g_star``; the conditional absorbing
payoff ``G_star / p_star`` is only meaningful where ``p_star > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matgame
from .matgame import MatrixGameSolution, as_mixed_action, solve_matrix_game

__all__ = [
    "AbsorbingGame",
    "DiscountedSolution",
    "best_response_value",
    "bilinear",
    "check_lambda",
    "discounted_value",
    "epsilon_optimality",
    "shapley_operator",
    "stationary_payoff",
]


def check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"discount factor must lie in (0, 1], got {lam}")
    return lam


@dataclass(frozen=True)
class AbsorbingGame:
    """Stage payoff ``g``, absorbing payoff ``g_star``, absorption probability
    ``p_star``, all over the same action rectangle."""

    g: np.ndarray
    g_star: np.ndarray
    p_star: np.ndarray

    def __post_init__(self):
        g = matgame.as_matrix(self.g)
        g_star = matgame.as_matrix(self.g_star)
        p_star = matgame.as_matrix(self.p_star)
        if not (g.shape == g_star.shape == p_star.shape):
            raise ValueError("g, g_star and p_star must share dimensions")
        if np.any(p_star < 0.0) or np.any(p_star > 1.0):
            raise ValueError("absorption probabilities must lie in [0, 1]")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "g_star", g_star)
        object.__setattr__(self, "p_star", p_star)
        object.__setattr__(self, "G_star", p_star * g_star)

    @property
    def shape(self) -> tuple[int, int]:
        return self.g.shape

    @property
    def payoff_bound(self) -> float:
        """Bound on every feasible payoff; discounted values live in
        [-payoff_bound, payoff_bound]."""
        bound = float(np.max(np.abs(self.g)))
        if np.any(self.p_star > 0):
            bound = max(bound, float(np.max(np.abs(self.g_star[self.p_star > 0]))))
        return bound


_QUANTITY_ATTR = {"g": "g", "g_star_weighted": "G_star", "p_star": "p_star"}


def bilinear(game: AbsorbingGame, quantity: str, x, y) -> float:
    """Bilinear extension of one of the game's matrices to mixed actions.

    ``g_star_weighted`` evaluates the absorption-weighted payoff
    ``p_star * g_star``.
    """
    try:
        m = getattr(game, _QUANTITY_ATTR[quantity])
    except KeyError:
        raise ValueError(
            f"quantity must be one of {sorted(_QUANTITY_ATTR)}, got {quantity!r}"
        ) from None
    x = as_mixed_action(x, game.shape[0])
    y = as_mixed_action(y, game.shape[1])
    return float(x @ m @ y)


def stationary_payoff(game: AbsorbingGame, lam: float, x, y) -> float:
    """Discounted payoff of a stationary pair.

    Equals (lam*g + (1-lam)*G_star) / (lam + (1-lam)*p_star), all terms
    evaluated bilinearly; the denominator is at least lam, so the ratio is
    always finite.
    """
    lam = check_lambda(lam)
    gxy = bilinear(game, "g", x, y)
    weighted = bilinear(game, "g_star_weighted", x, y)
    absorb = bilinear(game, "p_star", x, y)
    return (lam * gxy + (1.0 - lam) * weighted) / (lam + (1.0 - lam) * absorb)


def shapley_operator(game: AbsorbingGame, lam: float, w: float) -> MatrixGameSolution:
    """Solve the one-shot game whose fixed point in w is the discounted value.

    Entry (i, j) is lam*g + (1-lam)*(G_star + (1-p_star)*w).  The value map
    is nondecreasing in w and contracts distances by at least (1-lam).
    """
    lam = check_lambda(lam)
    m = lam * game.g + (1.0 - lam) * (game.G_star + (1.0 - game.p_star) * w)
    return solve_matrix_game(m)


@dataclass(frozen=True)
class DiscountedSolution:
    """Discounted value with optimal stationary strategies.

    ``residual`` is |Phi(value) - value| for the one-shot operator Phi;
    ``error_bound`` is the a-posteriori certificate residual / lam, valid
    regardless of how the value was located.
    """

    lam: float
    value: float
    x_opt: np.ndarray
    y_opt: np.ndarray
    residual: float
    error_bound: float


def discounted_value(game: AbsorbingGame, lam: float, tol: float = 1e-12) -> DiscountedSolution:
    """Certified discounted value and optimal stationary strategies.

    f(w) = Phi(w) - w is strictly decreasing with slope in [-1, -lam], so
    the value is the unique root of f and bisection brackets it with a
    width guarantee that does not degrade as lam -> 0 (plain fixed-point
    iteration contracts only by (1-lam) per step and its residual target
    tol*lam underflows double precision for small lam).
    """
    lam = check_lambda(lam)
    if tol <= 0:
        raise ValueError("tol must be positive")
    bound = game.payoff_bound
    lo, hi = -bound, bound
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if shapley_operator(game, lam, mid).value - mid >= 0.0:
            lo = mid
        else:
            hi = mid
    value = 0.5 * (lo + hi)
    at_value = shapley_operator(game, lam, value)
    residual = abs(at_value.value - value)
    return DiscountedSolution(
        lam=lam,
        value=value,
        x_opt=at_value.row_strategy,
        y_opt=at_value.col_strategy,
        residual=residual,
        error_bound=residual / lam,
    )


def best_response_value(
    game: AbsorbingGame, lam: float, fixed, side: str
) -> tuple[float, int]:
    """Exact best reply against a fixed mixed action, with the replying action.

    The stationary payoff is a ratio of affine forms of the free player's
    mixed action, so its extremum over the simplex is attained at a vertex
    (mediant inequality); a scan of pure replies is therefore exact.
    ``side`` names the player whose strategy is fixed.  Ties break to the
    lowest action index.
    """
    lam = check_lambda(lam)
    if side == "p1":
        x = as_mixed_action(fixed, game.shape[0])
        numer = lam * (x @ game.g) + (1.0 - lam) * (x @ game.G_star)
        denom = lam + (1.0 - lam) * (x @ game.p_star)
        values = numer / denom
        j = int(np.argmin(values))
        return float(values[j]), j
    if side == "p2":
        y = as_mixed_action(fixed, game.shape[1])
        numer = lam * (game.g @ y) + (1.0 - lam) * (game.G_star @ y)
        denom = lam + (1.0 - lam) * (game.p_star @ y)
        values = numer / denom
        i = int(np.argmax(values))
        return float(values[i]), i
    raise ValueError("side must be 'p1' or 'p2'")


def epsilon_optimality(
    game: AbsorbingGame, lam: float, x, y, v_lambda: float
) -> tuple[float, float]:
    """How far each strategy of a stationary pair falls short of optimal.

    Returns (eps1, eps2): x is eps-optimal iff eps1 <= eps, and dually for y.
    ``v_lambda`` should come from ``discounted_value`` at high accuracy.
    """
    guarantee_x, _ = best_response_value(game, lam, x, side="p1")
    concede_y, _ = best_response_value(game, lam, y, side="p2")
    eps1 = max(0.0, v_lambda - guarantee_x)
    eps2 = max(0.0, concede_y - v_lambda)
    return eps1, eps2
