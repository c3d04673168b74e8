"""Exact solving of small zero-sum matrix games.

The row player maximizes, the column player minimizes.  Everything here is
built for the tiny games (a handful of actions per side) that the rest of
the library generates, where determinism and certified accuracy matter more
than speed: the solver is a dense primal simplex on the shifted minimax LP
with Bland's smallest-index pivoting, so repeated runs follow the identical
pivot path and return the identical optimal vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MatrixGameSolution",
    "as_matrix",
    "as_mixed_action",
    "best_pure_response",
    "mediant_bounds",
    "solve_matrix_game",
]

_PIVOT_EPS = 1e-12
_RATIO_TIE = 1e-9
_MAX_PIVOTS = 10_000


def as_matrix(matrix) -> np.ndarray:
    """Validate a payoff matrix: 2-D, nonempty, finite entries."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError("payoff matrix must be 2-D with positive dimensions")
    if not np.all(np.isfinite(m)):
        raise ValueError("payoff matrix entries must be finite")
    return m


def as_mixed_action(weights, size: int | None = None) -> np.ndarray:
    """Validate a mixed action: nonnegative weights summing to 1 (within 1e-12)."""
    w = np.asarray(weights, dtype=float).ravel()
    if w.size < 1 or not np.all(np.isfinite(w)):
        raise ValueError("mixed action must be a nonempty finite vector")
    if size is not None and w.size != size:
        raise ValueError(f"mixed action has {w.size} weights, expected {size}")
    if np.any(w < -1e-12) or np.any(w > 1 + 1e-12):
        raise ValueError("mixed action weights must lie in [0, 1]")
    if abs(float(w.sum()) - 1.0) > 1e-12:
        raise ValueError("mixed action weights must sum to 1 within 1e-12")
    # Negative roundoff dust is clipped; the sum already passed the check.
    return np.maximum(w, 0.0)


@dataclass(frozen=True)
class MatrixGameSolution:
    """Value plus one optimal mixed strategy per player.

    The row strategy guarantees at least ``value - tol`` against every pure
    column; the column strategy concedes at most ``value + tol`` against
    every pure row.  Ties among optimal vertices resolve to whichever vertex
    the simplex terminates at, which is deterministic but basis-dependent.
    """

    value: float
    row_strategy: np.ndarray
    col_strategy: np.ndarray


def _simplex_max(b_matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Maximize 1'w subject to B w <= 1, w >= 0 for an entrywise positive B.

    Returns the optimal w and the dual vector read off the slack columns.
    Bland's smallest-index rule is used for both the entering and the
    leaving variable, which precludes cycling and fixes the pivot path.
    """
    m, n = b_matrix.shape
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = b_matrix
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = 1.0
    tableau[m, :n] = -1.0
    basis = list(range(n, n + m))

    for _ in range(_MAX_PIVOTS):
        objective = tableau[m, : n + m]
        enter = -1
        for j in range(n + m):
            if objective[j] < -_PIVOT_EPS:
                enter = j
                break
        if enter < 0:
            break
        column = tableau[:m, enter]
        rhs = tableau[:m, -1]
        ratios = np.full(m, np.inf)
        positive = column > _PIVOT_EPS
        ratios[positive] = rhs[positive] / column[positive]
        best = float(ratios.min())
        if not np.isfinite(best):
            raise ArithmeticError("unbounded LP; matrix was not shifted positive")
        cutoff = best + _RATIO_TIE * (1.0 + abs(best))
        leave = min(
            (basis[i], i) for i in range(m) if positive[i] and ratios[i] <= cutoff
        )[1]
        pivot = tableau[leave, enter]
        tableau[leave] /= pivot
        for r in range(m + 1):
            if r != leave and tableau[r, enter] != 0.0:
                tableau[r] -= tableau[r, enter] * tableau[leave]
        basis[leave] = enter
    else:
        raise ArithmeticError("simplex did not terminate")

    w = np.zeros(n)
    for i, var in enumerate(basis):
        if var < n:
            w[var] = tableau[i, -1]
    duals = tableau[m, n : n + m].copy()
    return w, duals


def solve_matrix_game(matrix, tol: float = 1e-9) -> MatrixGameSolution:
    """Value and optimal mixed strategies of a finite zero-sum matrix game.

    The matrix is shifted entrywise positive, the column player's LP is
    solved by primal simplex, and the row player's strategy is recovered
    from the duals.  Both strategies are re-certified against every pure
    reply at tolerance ``tol`` before returning.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = as_matrix(matrix)
    shift = 1.0 - float(m.min())
    w, duals = _simplex_max(m + shift)
    total = float(w.sum())
    if total <= 0:
        raise ArithmeticError("simplex returned a nonpositive optimum")
    value = 1.0 / total - shift
    col = w / total
    dual_total = float(duals.sum())
    if dual_total <= 0:
        raise ArithmeticError("simplex returned degenerate duals")
    row = duals / dual_total
    worst_row = float((row @ m).min())
    worst_col = float((m @ col).max())
    if worst_row < value - tol or worst_col > value + tol:
        raise ArithmeticError(
            f"simplex certificate failed: row guarantees {worst_row}, "
            f"column concedes {worst_col}, value {value}"
        )
    return MatrixGameSolution(value=value, row_strategy=row, col_strategy=col)


def best_pure_response(matrix, strategy, side: str) -> tuple[int, float]:
    """Opponent's best pure reply to a mixed strategy, with its payoff.

    ``side="row"`` fixes the row player's strategy and returns the column
    minimizing the mixed-vs-pure payoff; ``side="col"`` is the dual.  Ties
    break to the lowest action index.
    """
    m = as_matrix(matrix)
    if side == "row":
        x = as_mixed_action(strategy, m.shape[0])
        payoffs = x @ m
        j = int(np.argmin(payoffs))
        return j, float(payoffs[j])
    if side == "col":
        y = as_mixed_action(strategy, m.shape[1])
        payoffs = m @ y
        i = int(np.argmax(payoffs))
        return i, float(payoffs[i])
    raise ValueError("side must be 'row' or 'col'")


def mediant_bounds(a: float, b: float, c: float, d: float) -> tuple[float, float, float]:
    """Bracket the mediant: min(a/c, b/d) <= (a+b)/(c+d) <= max(a/c, b/d).

    Requires c > 0 and d > 0; equality on both sides holds iff a/c == b/d.
    """
    if not (c > 0 and d > 0):
        raise ValueError("mediant denominators must be positive")
    first = a / c
    second = b / d
    return min(first, second), (a + b) / (c + d), max(first, second)
