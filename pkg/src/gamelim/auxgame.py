"""The one-shot limit game over perturbation triples.

A triple (base, perturb, intensity) plays the base mixed action, tilted
toward the perturbation with a weight that scales like intensity times the
discount factor.  The one-shot payoff of two triples captures the limiting
discounted payoff as the discount vanishes; its value is the limit of the
discounted values, exact guarantees reduce to vertex scans, and the triple
maps back to a stationary strategy of the discounted game via
``stationary_from_triple``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .absorbing import AbsorbingGame, bilinear, check_lambda
from .matgame import as_mixed_action

__all__ = [
    "AuxTriple",
    "BoundCheck",
    "DecompositionReport",
    "MedReport",
    "absorption_intensity",
    "aux_payoff",
    "decomposition_check",
    "guarantee_p1",
    "guarantee_p2",
    "med_objective",
    "stationary_from_triple",
]


@dataclass(frozen=True)
class AuxTriple:
    """Mixed action, perturbing mixed action, and nonnegative intensity
    (possibly infinite)."""

    base: np.ndarray
    perturb: np.ndarray
    intensity: float

    def __post_init__(self):
        base = as_mixed_action(self.base)
        perturb = as_mixed_action(self.perturb, base.size)
        a = float(self.intensity)
        if math.isnan(a) or a < 0.0:
            raise ValueError("intensity must be nonnegative (or infinite)")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "perturb", perturb)
        object.__setattr__(self, "intensity", a)


def _weight(intensity: float, probability: float) -> float:
    # inf * 0 = 0: a vanishing absorption probability silences its term.
    if math.isinf(intensity) and probability == 0.0:
        return 0.0
    return intensity * probability


def aux_payoff(game: AbsorbingGame, s: AuxTriple, t: AuxTriple) -> float:
    """Payoff of the one-shot limit game at triples s = (x, x', a), t = (y, y', b).

    Finite intensities give
    (g(x,y) + a G*(x',y) + b G*(x,y')) / (1 + a p*(x',y) + b p*(x,y')).
    An infinite intensity whose cross absorption probability is positive
    dominates the ratio, yielding the conditional absorbing payoff; with
    zero cross absorption its terms vanish (G* = 0 wherever p* = 0) and the
    ratio degenerates to the remaining finite part.  Both intensities
    infinite with positive absorption on both sides has no well-defined
    limit and is rejected.
    """
    x, xp, a = s.base, s.perturb, s.intensity
    y, yp, b = t.base, t.perturb, t.intensity
    p_a = bilinear(game, "p_star", xp, y)
    p_b = bilinear(game, "p_star", x, yp)
    a_dominates = math.isinf(a) and p_a > 0.0
    b_dominates = math.isinf(b) and p_b > 0.0
    if a_dominates and b_dominates:
        raise ValueError("both intensities infinite with positive absorption")
    if a_dominates:
        return bilinear(game, "g_star_weighted", xp, y) / p_a
    if b_dominates:
        return bilinear(game, "g_star_weighted", x, yp) / p_b
    wa = _weight(a, p_a)
    wb = _weight(b, p_b)
    numer = (
        bilinear(game, "g", x, y)
        + (0.0 if wa == 0.0 else a * bilinear(game, "g_star_weighted", xp, y))
        + (0.0 if wb == 0.0 else b * bilinear(game, "g_star_weighted", x, yp))
    )
    return numer / (1.0 + wa + wb)


def absorption_intensity(game: AbsorbingGame, s: AuxTriple, t: AuxTriple) -> float:
    """Limiting absorption-per-discount rate of the pair of triples:
    infinite when the base actions absorb outright, otherwise
    a p*(x',y) + b p*(x,y') with the inf * 0 = 0 convention."""
    if bilinear(game, "p_star", s.base, t.base) > 0.0:
        return math.inf
    wa = _weight(s.intensity, bilinear(game, "p_star", s.perturb, t.base))
    wb = _weight(t.intensity, bilinear(game, "p_star", s.base, t.perturb))
    return wa + wb


def stationary_from_triple(s: AuxTriple, lam: float) -> np.ndarray:
    """Stationary strategy (base + lam*a*perturb) / (1 + lam*a) induced by a
    finite-intensity triple in the lam-discounted game."""
    lam = check_lambda(lam)
    if math.isinf(s.intensity):
        raise ValueError("infinite intensity has no stationary embedding")
    blend = lam * s.intensity
    return (s.base + blend * s.perturb) / (1.0 + blend)


def guarantee_p1(game: AbsorbingGame, s: AuxTriple) -> float:
    """Exact amount player 1's triple secures in the limit game.

    The reply payoff is a ratio of affine forms in each of the opponent's
    mixed actions, so extrema sit at simplex vertices (mediant inequality),
    and it is monotone in the opponent intensity, pinning that to 0 or
    infinity.  The infimum therefore reduces to a pure-column scan of the
    tilted ratio plus the conditional absorbing payoffs of columns that
    absorb against the base action.
    """
    x, xp, a = s.base, s.perturb, s.intensity
    if math.isinf(a):
        raise ValueError("guarantee requires a finite intensity")
    as_mixed_action(x, game.shape[0])
    numer = x @ game.g + a * (xp @ game.G_star)
    denom = 1.0 + a * (xp @ game.p_star)
    best = float((numer / denom).min())
    p_x = x @ game.p_star
    mask = p_x > 0.0
    if np.any(mask):
        conditional = (x @ game.G_star)[mask] / p_x[mask]
        best = min(best, float(conditional.min()))
    return best


def guarantee_p2(game: AbsorbingGame, t: AuxTriple) -> float:
    """Exact amount player 2's triple concedes in the limit game (dual of
    ``guarantee_p1``)."""
    y, yp, b = t.base, t.perturb, t.intensity
    if math.isinf(b):
        raise ValueError("guarantee requires a finite intensity")
    as_mixed_action(y, game.shape[1])
    numer = game.g @ y + b * (game.G_star @ yp)
    denom = 1.0 + b * (game.p_star @ yp)
    worst = float((numer / denom).max())
    p_y = game.p_star @ y
    mask = p_y > 0.0
    if np.any(mask):
        conditional = (game.G_star @ y)[mask] / p_y[mask]
        worst = max(worst, float(conditional.max()))
    return worst


@dataclass(frozen=True)
class MedReport:
    """Median-of-three objective at a mixed pair.

    ``h_plus`` is the best conditional absorbing payoff player 1 can force
    against y (-inf when no row absorbs), ``h_minus`` the dual for player 2
    (+inf when no column absorbs against x); ``med`` is the median of the
    stage payoff and the two.
    """

    stage: float
    h_plus: float
    h_minus: float
    med: float


def med_objective(game: AbsorbingGame, x, y) -> MedReport:
    """Evaluate the median-of-three objective whose minimax value equals the
    limit value.  Vertex scans suffice for both conditional terms."""
    x = as_mixed_action(x, game.shape[0])
    y = as_mixed_action(y, game.shape[1])
    stage = bilinear(game, "g", x, y)
    p_rows = game.p_star @ y
    rows = p_rows > 0.0
    h_plus = float(((game.G_star @ y)[rows] / p_rows[rows]).max()) if np.any(rows) else -math.inf
    p_cols = x @ game.p_star
    cols = p_cols > 0.0
    h_minus = float(((x @ game.G_star)[cols] / p_cols[cols]).min()) if np.any(cols) else math.inf
    med = sorted((stage, h_plus, h_minus))[1]
    return MedReport(stage=stage, h_plus=h_plus, h_minus=h_minus, med=med)


@dataclass(frozen=True)
class BoundCheck:
    """One inequality of the payoff decomposition: vacuous unless applicable,
    else deviation <= bound."""

    applicable: bool
    deviation: float
    bound: float

    @property
    def passed(self) -> bool:
        return (not self.applicable) or self.deviation <= self.bound

    @property
    def slack(self) -> float:
        return self.bound - self.deviation if self.applicable else math.inf


@dataclass(frozen=True)
class DecompositionReport:
    """The three near-optimality bounds tying stage, absorbing, and weighted
    absorbing payoffs of eps-optimal triples to the limit value v."""

    absorbing: BoundCheck
    stage: BoundCheck
    weighted: BoundCheck

    @property
    def all_passed(self) -> bool:
        return self.absorbing.passed and self.stage.passed and self.weighted.passed


def decomposition_check(
    game: AbsorbingGame, s: AuxTriple, t: AuxTriple, eps: float, v: float
) -> DecompositionReport:
    """Evaluate the three payoff-decomposition inequalities for triples
    assumed eps-optimal in the limit game.

    1. If the base pair absorbs, its conditional absorbing payoff is within
       eps of v.
    2. The stage payoff is within 2*(1 + a p*(x',y) + b p*(x,y'))*eps of v.
    3. If the tilted absorption weight is positive, the weighted conditional
       absorbing payoff is within 3*(1 + weight)/weight * eps of v.
    """
    if eps < 0.0:
        raise ValueError("eps must be nonnegative")
    x, xp, a = s.base, s.perturb, s.intensity
    y, yp, b = t.base, t.perturb, t.intensity
    p_xy = bilinear(game, "p_star", x, y)
    if p_xy > 0.0:
        dev = abs(bilinear(game, "g_star_weighted", x, y) / p_xy - v)
        absorbing = BoundCheck(True, dev, eps)
    else:
        absorbing = BoundCheck(False, 0.0, eps)

    p_a = bilinear(game, "p_star", xp, y)
    p_b = bilinear(game, "p_star", x, yp)
    wa = _weight(a, p_a)
    wb = _weight(b, p_b)
    total = wa + wb
    stage = BoundCheck(
        True, abs(bilinear(game, "g", x, y) - v), 2.0 * (1.0 + total) * eps
    )

    if total > 0.0:
        if math.isinf(wa) and math.isinf(wb):
            raise ValueError("both tilted absorption weights infinite")
        if math.isinf(wa):
            ratio = bilinear(game, "g_star_weighted", xp, y) / p_a
        elif math.isinf(wb):
            ratio = bilinear(game, "g_star_weighted", x, yp) / p_b
        else:
            ratio = (
                a * bilinear(game, "g_star_weighted", xp, y)
                + b * bilinear(game, "g_star_weighted", x, yp)
            ) / total
        factor = 1.0 if math.isinf(total) else (1.0 + total) / total
        weighted = BoundCheck(True, abs(ratio - v), 3.0 * factor * eps)
    else:
        weighted = BoundCheck(False, 0.0, 0.0)
    return DecompositionReport(absorbing=absorbing, stage=stage, weighted=weighted)
