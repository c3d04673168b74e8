"""Named example games with runnable verification claims.

Each scenario packages a game together with the closed-form limit laws it
is known to satisfy; ``run`` measures every claim on a grid of discount
factors and gates the overall verdict on the smallest one, since the laws
are lam -> 0 limits and may legitimately miss at coarse discounting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import stochgame
from .absorbing import (
    AbsorbingGame,
    best_response_value,
    bilinear,
    check_lambda,
    discounted_value,
    epsilon_optimality,
)
from .auxgame import AuxTriple, decomposition_check, guarantee_p1, guarantee_p2
from .stochgame import StochasticGame, best_response_mdp, shapley_value
from .trajectory import (
    Trajectory,
    fit_gamma,
    occupation_limit,
    occupation_trajectory,
    payoff_trajectory,
    stage_horizon,
    stage_index,
    sup_distance,
)

__all__ = [
    "Claim",
    "ClaimResult",
    "ProbeReport",
    "Scenario",
    "ScenarioReport",
    "TruncatedCompactGame",
    "available",
    "build",
    "linear_payoff_probe",
    "run",
    "truncated_payoff_exhibit",
]

LAMBDA_GRID_DEFAULT = (1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class ClaimResult:
    claim: str
    lam: float | None
    measured: float
    target: str
    tol: float
    passed: bool
    gating: bool
    note: str = ""

    def line(self) -> str:
        lam_tag = "      --" if self.lam is None else f"{self.lam:8.0e}"
        verdict = "PASS" if self.passed else "FAIL"
        gate = "" if self.gating else "  [not gating: coarse lam]"
        return (
            f"  lam={lam_tag}  {self.claim:<34} measured={self.measured: .6e}  "
            f"target={self.target:<22} {verdict}{gate}"
            + (f"  ({self.note})" if self.note else "")
        )


@dataclass(frozen=True)
class Claim:
    """A named, deterministic check.  ``check(lam, grid)`` returns
    (measured, target description, tolerance, passed, note); lam is None for
    discount-independent claims."""

    name: str
    description: str
    reference: str
    per_lambda: bool
    check: Callable


@dataclass
class Scenario:
    name: str
    description: str
    game: object
    claims: list
    min_lambda: float = 0.0
    curves: Callable | None = None


@dataclass(frozen=True)
class ScenarioReport:
    name: str
    results: tuple
    passed: bool

    def lines(self) -> list:
        out = [f"scenario {self.name}: {'PASS' if self.passed else 'FAIL'}"]
        out.extend(r.line() for r in self.results)
        return out


def _result(claim, lam, payload, gating):
    measured, target, tol, passed, note = payload
    return ClaimResult(
        claim=claim.name,
        lam=lam,
        measured=float(measured),
        target=target,
        tol=tol,
        passed=bool(passed),
        gating=gating,
        note=note,
    )


def run(scenario: Scenario, lambdas=LAMBDA_GRID_DEFAULT, grid: int = 1001) -> ScenarioReport:
    """Evaluate every claim at every discount factor.

    Overall verdict requires every claim to pass at the smallest discount
    factor; larger ones are reported but marked non-gating.
    """
    lams = sorted({check_lambda(l) for l in lambdas}, reverse=True)
    if not lams:
        raise ValueError("lambda grid must be nonempty")
    if lams[-1] < scenario.min_lambda:
        raise ValueError(
            f"scenario {scenario.name} requires lam >= {scenario.min_lambda:g}"
        )
    gate = lams[-1]
    results = []
    for claim in scenario.claims:
        if claim.per_lambda:
            for lam in lams:
                results.append(_result(claim, lam, claim.check(lam, grid), lam == gate))
        else:
            results.append(_result(claim, None, claim.check(None, grid), True))
    passed = all(r.passed for r in results if r.gating)
    return ScenarioReport(name=scenario.name, results=tuple(results), passed=passed)


# ---------------------------------------------------------------------------
# Absorbing 2x2 examples


def _match_matrix(expected, got) -> float:
    return float(np.max(np.abs(np.asarray(expected) - np.asarray(got))))


def _example1_game() -> AbsorbingGame:
    # both diagonal entries absorb at 1
    return AbsorbingGame(
        g=[[1.0, 0.0], [0.0, 1.0]],
        g_star=[[1.0, 0.0], [0.0, 1.0]],
        p_star=[[1.0, 0.0], [0.0, 1.0]],
    )


def _example2_game() -> AbsorbingGame:
    # only the top-left entry absorbs
    return AbsorbingGame(
        g=[[1.0, 0.0], [0.0, 1.0]],
        g_star=[[1.0, 0.0], [0.0, 0.0]],
        p_star=[[1.0, 0.0], [0.0, 0.0]],
    )


def _big_match_game() -> AbsorbingGame:
    # the whole top row absorbs
    return AbsorbingGame(
        g=[[1.0, 0.0], [0.0, 1.0]],
        g_star=[[1.0, 0.0], [0.0, 0.0]],
        p_star=[[1.0, 1.0], [0.0, 0.0]],
    )


def _example1() -> Scenario:
    game = _example1_game()

    def value_closed_form(lam, grid):
        sol = discounted_value(game, lam)
        dev = abs(sol.value - 1.0 / (1.0 + lam))
        return dev, "v = 1/(1+lam) +- 1e-8", 1e-8, dev <= 1e-8, ""

    def occupation_vanishes(lam, grid):
        sol = discounted_value(game, lam)
        q = occupation_trajectory(game, lam, sol.x_opt, sol.y_opt)
        dev = sup_distance(q, lambda t: np.zeros_like(t), grid)
        return dev, "sup Q <= 0.02", 0.02, dev <= 0.02, "limit occupation is 0"

    claims = [
        Claim(
            "value-closed-form",
            "discounted value equals 1/(1+lam)",
            "diagonal absorption at payoff 1; symmetric fixed point",
            True,
            value_closed_form,
        ),
        Claim(
            "occupation-vanishes",
            "occupation curve under optimal play vanishes uniformly",
            "absorption probability 1/2 per stage swamps the discount",
            True,
            occupation_vanishes,
        ),
    ]
    return Scenario(
        name="example1",
        description="2x2 game absorbing on the diagonal at payoff 1",
        game=game,
        claims=claims,
        curves=_absorbing_curves(game, lambda lam: math.inf, value=lambda lam: 1.0 / (1.0 + lam)),
    )


def _example2_opt(lam: float) -> np.ndarray:
    r = math.sqrt(lam)
    return np.array([r / (1.0 + r), 1.0 / (1.0 + r)])


def _example2() -> Scenario:
    game = _example2_game()

    def strategy_closed_form(lam, grid):
        sol = discounted_value(game, lam)
        ref = _example2_opt(lam)
        rel = max(
            float(np.max(np.abs(sol.x_opt - ref) / ref)),
            float(np.max(np.abs(sol.y_opt - ref) / ref)),
        )
        return rel, "rel err <= 1e-3", 1e-3, rel <= 1e-3, "both players tilt by sqrt(lam)"

    def occupation_optimal(lam, grid):
        sol = discounted_value(game, lam)
        q = occupation_trajectory(game, lam, sol.x_opt, sol.y_opt)
        dev = sup_distance(q, lambda t: t - t * t / 2.0, grid)
        return dev, "sup |Q-(t-t^2/2)| <= 0.02", 0.02, dev <= 0.02, ""

    def tilted_eps_optimal(lam, grid):
        x = _example2_opt(lam)
        v = discounted_value(game, lam).value
        worst = 0.0
        for gamma in (0.0, 1.0, 2.0):
            z_l = gamma * math.sqrt(lam) / (1.0 + math.sqrt(lam))
            z = np.array([z_l, 1.0 - z_l])
            _, eps2 = epsilon_optimality(game, lam, x, z, v)
            worst = max(worst, eps2)
        return worst, "eps <= 0.02", 0.02, worst <= 0.02, "gamma in {0,1,2}"

    def tilted_occupation(lam, grid):
        x = _example2_opt(lam)
        worst = 0.0
        for gamma in (0.0, 1.0, 2.0):
            z_l = gamma * math.sqrt(lam) / (1.0 + math.sqrt(lam))
            z = np.array([z_l, 1.0 - z_l])
            q = occupation_trajectory(game, lam, x, z)
            worst = max(worst, sup_distance(q, lambda t: occupation_limit(gamma, t), grid))
        return worst, "sup dev <= 0.05", 0.05, worst <= 0.05, "gamma in {0,1,2}"

    claims = [
        Claim(
            "strategy-closed-form",
            "optimal strategies put weight sqrt(lam)/(1+sqrt(lam)) on the absorbing action",
            "unique completely-mixed local-game solution",
            True,
            strategy_closed_form,
        ),
        Claim(
            "occupation-optimal-pair",
            "occupation under optimal play approaches t - t^2/2",
            "absorption intensity 1 under optimal play",
            True,
            occupation_optimal,
        ),
        Claim(
            "tilted-family-eps-optimal",
            "column tilts with weight gamma*sqrt(lam) stay eps-optimal",
            "near-optimal family parametrized by intensity gamma",
            True,
            tilted_eps_optimal,
        ),
        Claim(
            "tilted-family-occupation",
            "tilted column play reaches every limit curve of intensity gamma",
            "one-parameter family of occupation limits",
            True,
            tilted_occupation,
        ),
    ]
    return Scenario(
        name="example2",
        description="2x2 game with a single absorbing entry; sqrt(lam)-tilted optima",
        game=game,
        claims=claims,
        curves=_absorbing_curves(game, lambda lam: 1.0),
    )


_BIG_MATCH_TRIPLES = (
    AuxTriple([0.0, 1.0], [1.0, 0.0], 1.0),
    AuxTriple([0.5, 0.5], [0.5, 0.5], 0.0),
)


def _big_match() -> Scenario:
    game = _big_match_game()
    s_opt, t_opt = _BIG_MATCH_TRIPLES

    def value_half(lam, grid):
        dev = abs(discounted_value(game, lam).value - 0.5)
        return dev, "v = 1/2 +- 1e-8", 1e-8, dev <= 1e-8, ""

    def strategies(lam, grid):
        sol = discounted_value(game, lam)
        x_ref = np.array([lam / (1.0 + lam), 1.0 / (1.0 + lam)])
        dev = max(
            float(np.max(np.abs(sol.x_opt - x_ref))),
            float(np.max(np.abs(sol.y_opt - 0.5))),
        )
        return dev, "abs err <= 1e-6", 1e-6, dev <= 1e-6, ""

    def occupation_curve(lam, grid):
        sol = discounted_value(game, lam)
        q = occupation_trajectory(game, lam, sol.x_opt, sol.y_opt)
        dev = sup_distance(q, lambda t: t - t * t / 2.0, grid)
        return dev, "sup |Q-(t-t^2/2)| <= 0.02", 0.02, dev <= 0.02, ""

    def payoff_line(lam, grid):
        sol = discounted_value(game, lam)
        curve = payoff_trajectory(game, lam, sol.x_opt, sol.y_opt)
        dev = sup_distance(curve, lambda t: t / 2.0, grid)
        return dev, "sup |l-t/2| <= 0.02", 0.02, dev <= 0.02, ""

    def gamma_fit(lam, grid):
        sol = discounted_value(game, lam)
        q = occupation_trajectory(game, lam, sol.x_opt, sol.y_opt)
        dev = abs(fit_gamma(q) - 1.0)
        return dev, "gamma = 1 +- 0.05", 0.05, dev <= 0.05, ""

    def aux_guarantees(lam, grid):
        g1 = guarantee_p1(game, s_opt)
        g2 = guarantee_p2(game, t_opt)
        dev = max(abs(g1 - 0.5), abs(g2 - 0.5))
        return dev, "both exactly 1/2", 0.0, dev == 0.0, "limit-game optimal triples"

    def aux_decomposition(lam, grid):
        rep = decomposition_check(game, s_opt, t_opt, eps=0.0, v=0.5)
        slack = max(
            abs(rep.stage.slack), abs(rep.weighted.slack) if rep.weighted.applicable else 0.0
        )
        ok = rep.all_passed and slack == 0.0 and not rep.absorbing.applicable
        return slack, "zero slack at eps=0", 0.0, ok, "base pair never absorbs"

    def hat_transfer(lam_unused, grid):
        lam = 1e-3
        v = discounted_value(game, lam).value
        from .auxgame import stationary_from_triple

        eps1, _ = epsilon_optimality(
            game, lam, stationary_from_triple(s_opt, lam), [0.5, 0.5], v
        )
        return eps1, "eps1 <= 0.01 at lam=1e-3", 0.01, eps1 <= 0.01, "2*eps + 0.01 with eps = 0"

    claims = [
        Claim("value-half", "discounted value is 1/2 at every lam", "guarantee of the tilted stationary strategy", True, value_half),
        Claim("optimal-strategies", "optimal pair is (lam/(1+lam), 1/(1+lam)) vs (1/2, 1/2)", "unique completely-mixed local-game solution", True, strategies),
        Claim("occupation-curve", "occupation approaches t - t^2/2", "absorption intensity 1", True, occupation_curve),
        Claim("payoff-line", "cumulated payoff approaches the line t/2", "linear limit payoff at the value", True, payoff_line),
        Claim("gamma-fit", "fitted absorption intensity is 1", "terminal occupation inverts to the intensity", True, gamma_fit),
        Claim("aux-guarantees-exact", "limit-game guarantees of both optimal triples equal 1/2", "vertex scan of the one-shot limit game", False, aux_guarantees),
        Claim("aux-decomposition-zero-slack", "payoff decomposition bounds hold with zero slack at eps=0", "exactly optimal triples", False, aux_decomposition),
        Claim("hat-strategy-transfer", "stationary embedding of the optimal triple is near-optimal", "triple-to-stationary transfer", False, hat_transfer),
    ]
    return Scenario(
        name="big_match",
        description="the Big Match: top row absorbs at (1, 0), value 1/2",
        game=game,
        claims=claims,
        curves=_absorbing_curves(game, lambda lam: 1.0, value=lambda lam: 0.5),
    )


def _absorbing_curves(game, gamma_of_lam, value=None):
    """Curve writer for 2x2 absorbing scenarios: optimal-pair payoff and
    occupation curves next to their closed-form limits."""

    def curves(lam, grid):
        sol = discounted_value(game, lam)
        q = occupation_trajectory(game, lam, sol.x_opt, sol.y_opt)
        l = payoff_trajectory(game, lam, sol.x_opt, sol.y_opt)
        ts = np.linspace(0.0, 1.0, grid)
        v = sol.value if value is None else value(lam)
        gamma = gamma_of_lam(lam)
        return {
            "t": ts,
            "payoff": l(ts),
            "payoff_limit": v * ts,
            "occupation": q(ts),
            "occupation_limit": occupation_limit(gamma, ts),
        }

    return curves


# ---------------------------------------------------------------------------
# Stochastic examples


def _sink_row(n_states: int, k: int) -> np.ndarray:
    row = np.zeros((1, 1, n_states))
    row[0, 0, k] = 1.0
    return row


def _rho_2x2(n_states: int, targets: dict) -> np.ndarray:
    rho = np.zeros((2, 2, n_states))
    for (i, j), dist in targets.items():
        for k, p in dist.items():
            rho[i, j, k] = p
    return rho


def _two_state_game() -> StochasticGame:
    # s1: top-left absorbs at 1, top-right moves to s2 at payoff 0
    # s2: top row absorbs at (1, -1)
    names = ("s1", "s2", "win", "loss")
    s1 = _rho_2x2(4, {(0, 0): {2: 1.0}, (0, 1): {1: 1.0}, (1, 0): {0: 1.0}, (1, 1): {0: 1.0}})
    s2 = _rho_2x2(4, {(0, 0): {2: 1.0}, (0, 1): {3: 1.0}, (1, 0): {1: 1.0}, (1, 1): {1: 1.0}})
    return StochasticGame(
        names=names,
        absorbing=np.array([False, False, True, True]),
        payoffs=(
            np.array([[1.0, 0.0], [0.0, 1.0]]),
            np.array([[1.0, -1.0], [-1.0, 1.0]]),
            np.array([[1.0]]),
            np.array([[-1.0]]),
        ),
        transitions=(s1, s2, _sink_row(4, 2), _sink_row(4, 3)),
    )


def _two_state_profile(game: StochasticGame, lam: float):
    x = [lam / (1.0 + lam), 1.0 / (1.0 + lam)]
    half = [0.5, 0.5]
    ones = [1.0]
    return ([x, x, ones, ones], [half, half, ones, ones])


def _s2_probability_target(t):
    return -(1.0 - t) * np.log1p(-t) / 2.0


def _absorption_target(t):
    return 1.0 - (1.0 - t) * (1.0 - np.log1p(-t) / 2.0)


def _two_state() -> Scenario:
    game = _two_state_game()

    def value_s2(lam, grid):
        dev = abs(shapley_value(game, lam).values[1])
        return dev, "v(s2) = 0 +- 1e-8", 1e-8, dev <= 1e-8, ""

    def value_s1(lam, grid):
        dev = abs(shapley_value(game, lam).values[0] - 0.5)
        return dev, "v(s1) = 1/2 +- 1e-6", 1e-6, dev <= 1e-6, "reduces to the Big Match"

    def s2_occupancy(lam, grid):
        profile = _two_state_profile(game, lam)
        horizon = stage_horizon(lam, 1e-9)
        dists = stochgame.state_distributions(game, profile, "s1", horizon)
        ts = np.linspace(0.0, 0.99, grid)
        idx = np.array([stage_index(lam, t, horizon) - 1 for t in ts])
        dev = float(np.max(np.abs(dists[idx, 1] - _s2_probability_target(ts))))
        return dev, "sup dev <= 0.05 on [0, 0.99]", 0.05, dev <= 0.05, "stage-step probability"

    def absorption_curve(lam, grid):
        profile = _two_state_profile(game, lam)
        cdf = stochgame.absorption_cdf(game, lam, profile, "s1")
        ts = np.linspace(0.0, 0.99, grid)
        dev = float(np.max(np.abs(cdf(ts) - _absorption_target(ts))))
        return dev, "sup dev <= 0.05 on [0, 0.99]", 0.05, dev <= 0.05, ""

    def non_algebraic(lam, grid):
        return (
            math.nan,
            "documented only",
            math.nan,
            True,
            "limit curves involve (1-t)ln(1-t); not machine-checked",
        )

    claims = [
        Claim("value-s2-zero", "second state is worth 0 at every lam", "antisymmetric absorbing continuation", True, value_s2),
        Claim("value-s1-half", "start state is worth 1/2", "continuation value 0 reproduces the Big Match", True, value_s1),
        Claim("s2-occupancy-curve", "probability of sitting in s2 follows -(1-t)ln(1-t)/2", "uniform transition time thinned by survival", True, s2_occupancy),
        Claim("absorption-cdf-curve", "absorption time cdf follows 1-(1-t)(1-ln(1-t)/2)", "complement of the two live-state masses", True, absorption_curve),
        Claim("non-algebraic-note", "the limit curves are not algebraic in t", "prose claim recorded for completeness", False, non_algebraic),
    ]

    def curves(lam, grid):
        profile = _two_state_profile(game, lam)
        horizon = stage_horizon(lam, 1e-9)
        dists = stochgame.state_distributions(game, profile, "s1", horizon)
        cdf = stochgame.absorption_cdf(game, lam, profile, "s1")
        ts = np.linspace(0.0, 0.99, grid)
        idx = np.array([stage_index(lam, t, horizon) - 1 for t in ts])
        return {
            "t": ts,
            "s2_probability": dists[idx, 1],
            "s2_probability_limit": _s2_probability_target(ts),
            "absorption_cdf": cdf(ts),
            "absorption_cdf_limit": _absorption_target(ts),
        }

    return Scenario(
        name="two_state",
        description="two live states; occupancy of the second follows a non-algebraic law",
        game=game,
        claims=claims,
        curves=curves,
    )


def _jcr_game() -> StochasticGame:
    # payoff +1 everywhere in state a, -1 in state b; (D, R) absorbs
    names = ("a", "b", "win", "loss")
    a = _rho_2x2(4, {(0, 0): {0: 1.0}, (0, 1): {1: 1.0}, (1, 0): {1: 1.0}, (1, 1): {2: 1.0}})
    b = _rho_2x2(4, {(0, 0): {1: 1.0}, (0, 1): {0: 1.0}, (1, 0): {0: 1.0}, (1, 1): {3: 1.0}})
    return StochasticGame(
        names=names,
        absorbing=np.array([False, False, True, True]),
        payoffs=(np.ones((2, 2)), -np.ones((2, 2)), np.array([[1.0]]), np.array([[-1.0]])),
        transitions=(a, b, _sink_row(4, 2), _sink_row(4, 3)),
    )


def _jcr_cases(lam: float):
    half = [0.5, 0.5]
    tilt = [1.0 - lam, lam]
    return {
        "both-live": (half, half),
        "first-tilted": (tilt, half),
        "second-tilted": (half, tilt),
        "both-tilted": (tilt, tilt),
    }


def _jcr() -> Scenario:
    game = _jcr_game()

    def value_near_zero(lam, grid):
        vals = shapley_value(game, lam).values[:2]
        dev = float(np.max(np.abs(vals)))
        bound = 2.0 * math.sqrt(lam)
        return dev, "|v| <= 2*sqrt(lam)", bound, dev <= bound, ""

    def sqrt_weights(lam, grid):
        sol = shapley_value(game, lam)
        root = math.sqrt(lam)
        ratios = [
            sol.x_profile[0][1] / root,
            sol.x_profile[1][1] / root,
            sol.y_profile[0][1] / root,
            sol.y_profile[1][1] / root,
        ]
        worst = max(ratios, key=lambda r: abs(math.log(r)))
        ok = all(0.5 <= r <= 2.0 for r in ratios)
        return worst, "weights within [1/2, 2]*sqrt(lam)", 2.0, ok, "weights on the absorbing actions"

    def falsification(lam, grid):
        worst = -math.inf
        ones = [1.0]
        for name, (xa, xb) in _jcr_cases(lam).items():
            vals, _ = best_response_mdp(game, lam, [xa, xb, ones, ones], side="p1")
            worst = max(worst, float(vals[0]))
        return worst, "every case <= -0.9", -0.9, worst <= -0.9, "four tilt patterns of the start profile"

    claims = [
        Claim("value-near-zero", "values of both live states vanish like sqrt(lam)", "jointly controlled absorption", True, value_near_zero),
        Claim("sqrt-lambda-weights", "optimal weights on the absorbing actions scale like sqrt(lam)", "balancing drift against absorption", True, sqrt_weights),
        Claim("four-case-falsification", "every lam-linear tilt of a live profile is exploited below -0.9", "best reply drives the play to the bad sink or state", True, falsification),
    ]
    return Scenario(
        name="jcr",
        description="two live states with jointly controlled absorption; no lam-linear tilt family is near-optimal",
        game=game,
        claims=claims,
    )


# ---------------------------------------------------------------------------
# Truncated compact-action family


@dataclass(frozen=True)
class TruncatedCompactGame:
    """Action set {0} plus {1/k : k <= n} for both players.

    Matched actions absorb at -1 with probability y; mismatched actions
    absorb at 0 with probability sqrt(y); the live payoff is 1.  The full
    matrices are quadratic in n and never materialized for large n: claims
    work through single-row and single-column restrictions, which carry all
    the information a fixed pure strategy needs.
    """

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least 2 reciprocal actions")
        object.__setattr__(
            self, "actions", np.concatenate([[0.0], 1.0 / np.arange(1, self.n + 1)])
        )

    @property
    def size(self) -> int:
        return self.n + 1

    def match_index(self, lam: float) -> int:
        """Index of the action 1/floor(1/lam); requires lam >= 1/n."""
        lam = check_lambda(lam)
        k = int(math.floor(1.0 / lam + 1e-9))  # dust guard: 1/lam sits at an integer
        if k > self.n:
            raise ValueError(f"lam={lam:g} needs action 1/{k}, beyond n={self.n}")
        return k

    def _entries_vs(self, j_actions: np.ndarray, own: float):
        p = np.sqrt(j_actions)
        g_star = np.zeros_like(j_actions)
        matched = j_actions == own
        p[matched] = own
        g_star[matched] = np.where(j_actions[matched] > 0.0, -1.0, 0.0)
        return g_star, p

    def row_game(self, i: int) -> AbsorbingGame:
        """The 1 x size restriction to player 1's pure action i."""
        g_star, p = self._entries_vs(self.actions, float(self.actions[i]))
        return AbsorbingGame(
            g=np.ones((1, self.size)), g_star=g_star[None, :], p_star=p[None, :]
        )

    def col_game(self, j: int) -> AbsorbingGame:
        """The size x 1 restriction to player 2's pure action j."""
        y = float(self.actions[j])
        p = np.full(self.size, math.sqrt(y))
        g_star = np.zeros(self.size)
        p[j] = y
        g_star[j] = -1.0 if y > 0.0 else 0.0
        return AbsorbingGame(
            g=np.ones((self.size, 1)), g_star=g_star[:, None], p_star=p[:, None]
        )

    def matched_pair_game(self, lam: float) -> AbsorbingGame:
        """1 x 1 restriction to both players playing 1/floor(1/lam)."""
        y = float(self.actions[self.match_index(lam)])
        return AbsorbingGame(g=[[1.0]], g_star=[[-1.0]], p_star=[[y]])

    def dense(self) -> AbsorbingGame:
        """Materialize the full matrices (small n only)."""
        if self.n > 2000:
            raise ValueError("dense materialization is limited to n <= 2000")
        g_star = np.zeros((self.size, self.size))
        p = np.tile(np.sqrt(self.actions), (self.size, 1))
        np.fill_diagonal(p, self.actions)
        diag = np.where(self.actions > 0.0, -1.0, 0.0)
        g_star[np.diag_indices(self.size)] = diag
        return AbsorbingGame(g=np.ones((self.size, self.size)), g_star=g_star, p_star=p)


def _pure(k: int = 1) -> np.ndarray:
    return np.ones(k)


def _truncated_value_guarantees(game: TruncatedCompactGame, lam: float):
    """Player 1's exact guarantee with action 0 and player 2's with action 1;
    both equal the value when they coincide."""
    low, _ = best_response_value(game.row_game(0), lam, _pure(), side="p1")
    high, _ = best_response_value(game.col_game(1), lam, _pure(), side="p2")
    return low, high


def _truncated_match_eps(game: TruncatedCompactGame, lam: float):
    k = game.match_index(lam)
    guarantee, _ = best_response_value(game.row_game(k), lam, _pure(), side="p1")
    concede, _ = best_response_value(game.col_game(k), lam, _pure(), side="p2")
    return max(0.0, lam - guarantee), max(0.0, concede - lam)


def truncated_payoff_exhibit(n: int, lam: float, grid: int = 1001) -> float:
    """Deviation of the matched-action payoff curve from the linear law
    t * v; large by design (the curve tends to t - t^2 while v = lam)."""
    game = TruncatedCompactGame(n)
    sub = game.matched_pair_game(lam)
    curve = payoff_trajectory(sub, lam, _pure(), _pure())
    return sup_distance(curve, lambda t: lam * t, grid)


def _truncated_compact(n: int = 10_000) -> Scenario:
    game = TruncatedCompactGame(n)

    def value_pins(lam, grid):
        low, high = _truncated_value_guarantees(game, lam)
        dev = max(abs(low - lam), abs(high - lam))
        return dev, "v = lam +- 1e-10", 1e-10, dev <= 1e-10, "guarantees of actions 0 and 1 coincide"

    def p1_matched(lam, grid):
        eps1, _ = _truncated_match_eps(game, lam)
        bound = lam + 1e-12
        return eps1, "eps1 <= lam", bound, eps1 <= bound, "matched reciprocal action"

    def p2_matched(lam, grid):
        _, eps2 = _truncated_match_eps(game, lam)
        bound = math.sqrt(lam) + 1e-12
        return eps2, "eps2 <= sqrt(lam)", bound, eps2 <= bound, "matched reciprocal action"

    def payoff_parabola(lam, grid):
        sub = game.matched_pair_game(lam)
        curve = payoff_trajectory(sub, lam, _pure(), _pure())
        dev = sup_distance(curve, lambda t: t - t * t, grid)
        return dev, "sup |l-(t-t^2)| <= 0.05", 0.05, dev <= 0.05, ""

    def occupation_parabola(lam, grid):
        sub = game.matched_pair_game(lam)
        q = occupation_trajectory(sub, lam, _pure(), _pure())
        dev = sup_distance(q, lambda t: t - t * t / 2.0, grid)
        return dev, "sup |Q-(t-t^2/2)| <= 0.05", 0.05, dev <= 0.05, ""

    def gamma_one(lam, grid):
        sub = game.matched_pair_game(lam)
        q = occupation_trajectory(sub, lam, _pure(), _pure())
        dev = abs(fit_gamma(q) - 1.0)
        return dev, "gamma = 1 +- 0.05", 0.05, dev <= 0.05, ""

    def divergence(lam, grid):
        dev = truncated_payoff_exhibit(game.n, lam, grid)
        return dev, "sup |l - t*v| >= 0.2", 0.2, dev >= 0.2, "designed contrast: nonlinear limit payoff"

    claims = [
        Claim("value-pins-to-lambda", "the value equals lam, with 0 and 1 optimal", "sandwich of exact pure-action guarantees", True, value_pins),
        Claim("matched-action-p1-guarantee", "the matched reciprocal action is lam-optimal for player 1", "no matched absorption at -1 against other columns", True, p1_matched),
        Claim("matched-action-p2-guarantee", "the matched reciprocal action is sqrt(lam)-optimal for player 2", "sqrt absorption against every other row", True, p2_matched),
        Claim("payoff-parabola", "matched play accumulates payoff t - t^2", "live payoff 1 against conditional absorbing payoff -1", True, payoff_parabola),
        Claim("occupation-parabola", "matched play occupies t - t^2/2", "absorption intensity 1", True, occupation_parabola),
        Claim("gamma-fit-one", "fitted absorption intensity of matched play is 1", "matched absorption probability tracks lam", True, gamma_one),
        Claim("payoff-line-divergence", "matched play strays at least 0.2 from the linear law", "near-optimal pair with a nonlinear payoff curve", True, divergence),
    ]

    def curves(lam, grid):
        sub = game.matched_pair_game(lam)
        q = occupation_trajectory(sub, lam, _pure(), _pure())
        l = payoff_trajectory(sub, lam, _pure(), _pure())
        ts = np.linspace(0.0, 1.0, grid)
        return {
            "t": ts,
            "payoff": l(ts),
            "payoff_limit": ts - ts * ts,
            "occupation": q(ts),
            "occupation_limit": ts - ts * ts / 2.0,
        }

    return Scenario(
        name="truncated_compact",
        description=f"reciprocal-action family truncated at n={n}; value lam but a nonlinear near-optimal payoff curve",
        game=game,
        claims=claims,
        min_lambda=1.0 / n,
        curves=curves,
    )


# ---------------------------------------------------------------------------
# Registry and probe

_BUILDERS = {
    "example1": _example1,
    "example2": _example2,
    "big_match": _big_match,
    "two_state": _two_state,
    "jcr": _jcr,
    "truncated_compact": _truncated_compact,
}


def available() -> list:
    return sorted(_BUILDERS)


def build(name: str, **kwargs) -> Scenario:
    """Construct a named scenario; ``truncated_compact`` accepts n=."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(
            f"unknown scenario {name!r}; available: {', '.join(available())}"
        ) from None
    return builder(**kwargs)


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of sampling near-optimal stationary pairs and measuring how
    far their payoff curves stray from the linear law t * v."""

    lam: float
    eps: float
    trials: int
    accepted: int
    max_deviation: float

    @property
    def insufficient(self) -> bool:
        return self.accepted < 3


def linear_payoff_probe(
    game: AbsorbingGame,
    lam: float,
    eps: float,
    trials: int = 20,
    seed: int = 0,
    grid: int = 1001,
) -> ProbeReport:
    """Sample eps-optimal stationary pairs and report the worst sup-distance
    of their payoff curves from t * v.

    Pairs are drawn by blending the solver's optimal pair toward a random
    simplex point with a radius that halves until certification passes, so
    every seed is reproducible and acceptance is near-certain; the report
    flags runs with fewer than 3 accepted pairs as insufficient.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    lam = check_lambda(lam)
    sol = discounted_value(game, lam)
    rng = np.random.default_rng(seed)
    rows, cols = game.shape
    accepted = 0
    worst = 0.0
    for _ in range(trials):
        dx = rng.dirichlet(np.ones(rows))
        dy = rng.dirichlet(np.ones(cols))
        radius = 1.0
        pair = None
        for _ in range(80):
            x = (1.0 - radius) * sol.x_opt + radius * dx
            y = (1.0 - radius) * sol.y_opt + radius * dy
            e1, e2 = epsilon_optimality(game, lam, x, y, sol.value)
            if e1 <= eps and e2 <= eps:
                pair = (x, y)
                break
            radius *= 0.5
        if pair is None:
            continue
        accepted += 1
        curve = payoff_trajectory(game, lam, *pair)
        worst = max(worst, sup_distance(curve, lambda t: sol.value * t, grid))
    return ProbeReport(
        lam=lam, eps=eps, trials=trials, accepted=accepted, max_deviation=worst
    )
