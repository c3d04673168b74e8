"""General finite zero-sum stochastic games under discounting.

States may have different action rectangles; absorbing states self-loop
with probability 1 and a constant payoff.  The per-state value vector is
the fixed point of the one-shot operator; it is located by a damped Newton
iteration (plain fixed-point iteration contracts only by (1-lam), hopeless
for the discount factors of interest) and independently certified by
freezing each returned profile and solving the induced Markov decision
process exactly, which brackets every state value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .absorbing import AbsorbingGame, check_lambda
from .matgame import as_mixed_action, solve_matrix_game
from .trajectory import Trajectory, _assemble, _geometric, stage_horizon

__all__ = [
    "OccupationProfile",
    "ShapleySolution",
    "StochasticGame",
    "absorption_cdf",
    "best_response_mdp",
    "from_absorbing",
    "occupation_profile",
    "payoff_trajectory_multi",
    "shapley_operator",
    "shapley_value",
    "state_distributions",
]

_LD = np.longdouble
_MASS_TOL = 1e-12


@dataclass(frozen=True)
class StochasticGame:
    """Per-state payoff matrices and transition kernels over a finite state set.

    ``transitions[k][i, j]`` is the distribution of the next state after
    playing (i, j) in state k.  ``absorbing[k]`` flags sink states, which
    must self-loop with probability 1 under every action pair and pay a
    constant.
    """

    names: tuple
    absorbing: np.ndarray
    payoffs: tuple
    transitions: tuple

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        n_states = len(names)
        if n_states == 0:
            raise ValueError("state set must be nonempty")
        if len(set(names)) != n_states:
            raise ValueError("state names must be distinct")
        flags = np.asarray(self.absorbing, dtype=bool)
        if flags.shape != (n_states,):
            raise ValueError("absorbing flags must match the state count")
        payoffs = []
        kernels = []
        if len(self.payoffs) != n_states or len(self.transitions) != n_states:
            raise ValueError("payoffs and transitions must cover every state")
        for k in range(n_states):
            g = np.asarray(self.payoffs[k], dtype=float)
            rho = np.asarray(self.transitions[k], dtype=float)
            if g.ndim != 2 or g.size == 0 or not np.all(np.isfinite(g)):
                raise ValueError(f"state {names[k]}: payoff must be a finite matrix")
            if rho.shape != g.shape + (n_states,):
                raise ValueError(
                    f"state {names[k]}: transitions must have shape {g.shape + (n_states,)}"
                )
            if np.any(rho < 0.0) or not np.all(np.isfinite(rho)):
                raise ValueError(f"state {names[k]}: transition weights must be in [0, 1]")
            sums = rho.sum(axis=2)
            if np.max(np.abs(sums - 1.0)) > _MASS_TOL:
                raise ValueError(f"state {names[k]}: transition rows must sum to 1")
            if flags[k]:
                if np.ptp(g) != 0.0:
                    raise ValueError(f"absorbing state {names[k]} needs a constant payoff")
                if np.any(rho[..., k] != 1.0):
                    raise ValueError(f"absorbing state {names[k]} must self-loop surely")
            payoffs.append(g)
            kernels.append(rho)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "absorbing", flags)
        object.__setattr__(self, "payoffs", tuple(payoffs))
        object.__setattr__(self, "transitions", tuple(kernels))

    @property
    def n_states(self) -> int:
        return len(self.names)

    def state_index(self, state) -> int:
        if isinstance(state, str):
            return self.names.index(state)
        k = int(state)
        if not 0 <= k < self.n_states:
            raise ValueError(f"state index {k} out of range")
        return k

    @property
    def payoff_bound(self) -> float:
        return max(float(np.max(np.abs(g))) for g in self.payoffs)

    def validate_profile(self, profile, side: str) -> list:
        axis = 0 if side == "p1" else 1
        if len(profile) != self.n_states:
            raise ValueError("profile must give one mixed action per state")
        return [
            as_mixed_action(profile[k], self.payoffs[k].shape[axis])
            for k in range(self.n_states)
        ]


def _local_matrix(game: StochasticGame, lam: float, w: np.ndarray, k: int) -> np.ndarray:
    return lam * game.payoffs[k] + (1.0 - lam) * (game.transitions[k] @ w)


def shapley_operator(game: StochasticGame, lam: float, w):
    """Apply the one-shot operator at a value vector: solve each state's
    local matrix game.  Returns the image vector and the per-state solutions."""
    lam = check_lambda(lam)
    w = np.asarray(w, dtype=float)
    if w.shape != (game.n_states,):
        raise ValueError("value vector must have one entry per state")
    sols = [solve_matrix_game(_local_matrix(game, lam, w, k)) for k in range(game.n_states)]
    return np.array([s.value for s in sols]), sols


def best_response_mdp(
    game: StochasticGame, lam: float, fixed, side: str, tol: float = 1e-10
) -> tuple[np.ndarray, list]:
    """Exact discounted best reply against a frozen stationary opponent.

    ``side`` names the player whose profile is frozen; the other player
    optimizes the induced Markov decision process by Howard policy
    iteration, each pure policy evaluated by a direct linear solve, so the
    result does not degrade as lam -> 0.  A pure stationary policy is
    optimal here and is returned alongside the per-state values.
    """
    lam = check_lambda(lam)
    if side not in ("p1", "p2"):
        raise ValueError("side must be 'p1' or 'p2'")
    frozen = game.validate_profile(fixed, side)
    n = game.n_states
    rewards = []
    kernels = []
    for k in range(n):
        if side == "p1":
            rewards.append(frozen[k] @ game.payoffs[k])
            kernels.append(np.einsum("i,ijs->js", frozen[k], game.transitions[k]))
        else:
            rewards.append(game.payoffs[k] @ frozen[k])
            kernels.append(np.einsum("ijs,j->is", game.transitions[k], frozen[k]))
    maximize = side == "p2"  # the free player is the other one
    sign = 1.0 if maximize else -1.0
    policy = [int(np.argmax(sign * r)) for r in rewards]
    eye = np.eye(n)
    margin = tol * lam
    for _ in range(10_000):
        p_pi = np.array([kernels[k][policy[k]] for k in range(n)])
        r_pi = np.array([rewards[k][policy[k]] for k in range(n)])
        values = np.linalg.solve(eye - (1.0 - lam) * p_pi, lam * r_pi)
        improved = False
        for k in range(n):
            q = lam * rewards[k] + (1.0 - lam) * (kernels[k] @ values)
            best = int(np.argmax(sign * q))
            if sign * q[best] > sign * q[policy[k]] + margin:
                policy[k] = best
                improved = True
        if not improved:
            return values, policy
    raise ArithmeticError("policy iteration failed to terminate")


@dataclass(frozen=True)
class ShapleySolution:
    """Per-state discounted values with optimal stationary profiles.

    ``gap`` is the certified width of the exact best-reply sandwich around
    the true values; ``residual`` the one-shot operator residual at the
    returned vector."""

    lam: float
    values: np.ndarray
    x_profile: list
    y_profile: list
    residual: float
    gap: float
    error_bound: float


def shapley_value(
    game: StochasticGame, lam: float, tol: float = 1e-9, max_rounds: int = 40
) -> ShapleySolution:
    """Certified per-state values and optimal stationary profiles.

    Damped Newton steps on F(w) = Psi(w) - w (finite-difference Jacobian;
    the operator is piecewise smooth and F's Jacobian is uniformly
    invertible) interleaved with contraction sweeps whenever a step fails
    to reduce the residual.  On exit the profiles read from the local games
    are certified by two exact MDP solves: freezing y bounds the values
    from above, freezing x from below, and the midpoint is returned with
    the bracket width as ``gap``.
    """
    lam = check_lambda(lam)
    n = game.n_states
    w = np.zeros(n)

    def residual_vec(v):
        return shapley_operator(game, lam, v)[0] - v

    f = residual_vec(w)
    target = max(1e-15, np.finfo(float).eps * 8.0 * max(1.0, game.payoff_bound))
    for _ in range(max_rounds):
        norm = float(np.max(np.abs(f)))
        if norm <= target:
            break
        # Central-difference Jacobian of F; columns perturb one state value.
        jac = np.empty((n, n))
        h = 1e-7 * max(1.0, float(np.max(np.abs(w))))
        for k in range(n):
            bump = np.zeros(n)
            bump[k] = h
            jac[:, k] = (residual_vec(w + bump) - residual_vec(w - bump)) / (2.0 * h)
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            step = f  # degenerate Jacobian: fall back to a plain sweep
        accepted = False
        scale = 1.0
        for _ in range(40):
            cand = w + scale * step
            f_cand = residual_vec(cand)
            if float(np.max(np.abs(f_cand))) < norm:
                w, f = cand, f_cand
                accepted = True
                break
            scale *= 0.5
        if not accepted:
            # Contraction sweep always shrinks the residual by >= (1-lam).
            for _ in range(50):
                w = w + f
                f = residual_vec(w)

    values, sols = shapley_operator(game, lam, w)
    xs = [s.row_strategy for s in sols]
    ys = [s.col_strategy for s in sols]
    upper, _ = best_response_mdp(game, lam, ys, side="p2")
    lower, _ = best_response_mdp(game, lam, xs, side="p1")
    gap = float(np.max(upper - lower))
    if gap > max(tol, 64.0 * np.finfo(float).eps / lam):
        raise ArithmeticError(
            f"certification gap {gap:.3e} exceeds tolerance {tol:.3e} at lam={lam}"
        )
    certified = 0.5 * (upper + lower)
    residual = float(np.max(np.abs(values - w)))
    return ShapleySolution(
        lam=lam,
        values=certified,
        x_profile=xs,
        y_profile=ys,
        residual=residual,
        gap=gap,
        error_bound=max(gap / 2.0, 0.0),
    )


def _transition_matrix(game: StochasticGame, xs, ys, dtype=float) -> np.ndarray:
    n = game.n_states
    p = np.zeros((n, n), dtype=dtype)
    for k in range(n):
        p[k] = np.einsum(
            "i,ijs,j->s",
            xs[k].astype(dtype),
            game.transitions[k].astype(dtype),
            ys[k].astype(dtype),
        )
    return p


def _distribution_walk(game, profile_x, profile_y, start: int, horizon: int) -> np.ndarray:
    """State distributions q_1..q_horizon in extended precision."""
    p = _transition_matrix(game, profile_x, profile_y, dtype=_LD)
    out = np.zeros((horizon, game.n_states), dtype=_LD)
    q = np.zeros(game.n_states, dtype=_LD)
    q[start] = 1.0
    for i in range(horizon):
        out[i] = q
        if i + 1 < horizon:
            q = q @ p
    return out


def state_distributions(game: StochasticGame, profile, start, horizon: int) -> np.ndarray:
    """Distribution of the state at stages 1..horizon under a stationary
    profile, starting from a point mass."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    xs = game.validate_profile(profile[0], "p1")
    ys = game.validate_profile(profile[1], "p2")
    k = game.state_index(start)
    return _distribution_walk(game, xs, ys, k, horizon).astype(float)


@dataclass(frozen=True)
class OccupationProfile:
    """Cumulated discounted occupation measure over states at the stage dates.

    Row n of ``measures`` is the measure at breakpoint t_n (row 0 is the
    zero measure at t_0 = 0); total mass at t_n equals t_n to 1e-12.
    """

    lam: float
    start: int
    names: tuple
    breakpoints: np.ndarray
    measures: np.ndarray
    tail_bound: float

    def component(self, state) -> Trajectory:
        """Per-state cumulated mass as a trajectory (flat-closed to t = 1)."""
        k = self.names.index(state) if isinstance(state, str) else int(state)
        bp = self.breakpoints
        vals = self.measures[:, k]
        if bp[-1] < 1.0:
            bp = np.append(bp, 1.0)
            vals = np.append(vals, vals[-1])
        return Trajectory(lam=self.lam, breakpoints=bp, values=vals, tail_bound=self.tail_bound)

    def totals(self) -> np.ndarray:
        return self.measures.sum(axis=1)


def occupation_profile(
    game: StochasticGame, lam: float, profile, start, mass_tol: float = 1e-9
) -> OccupationProfile:
    """Expected cumulated discounted occupation measure from a start state."""
    lam = check_lambda(lam)
    xs = game.validate_profile(profile[0], "p1")
    ys = game.validate_profile(profile[1], "p2")
    k0 = game.state_index(start)
    n = stage_horizon(lam, mass_tol)
    dists = _distribution_walk(game, xs, ys, k0, n)
    weights = _LD(lam) * _geometric(_LD(1.0) - _LD(lam), n)
    cum = np.cumsum(weights[:, None] * dists, axis=0)
    keep = _LD(1.0) - _LD(lam)
    dates = np.asarray(_LD(1.0) - _geometric(keep, n) * keep, dtype=float)
    measures = np.vstack([np.zeros(game.n_states), cum.astype(float)])
    breakpoints = np.concatenate([[0.0], dates])
    drift = float(np.max(np.abs(measures.sum(axis=1) - breakpoints)))
    if drift > _MASS_TOL:
        raise ArithmeticError(f"occupation mass drifted {drift:.3e} from the stage dates")
    return OccupationProfile(
        lam=lam,
        start=k0,
        names=game.names,
        breakpoints=breakpoints,
        measures=measures,
        tail_bound=mass_tol,
    )


def payoff_trajectory_multi(
    game: StochasticGame, lam: float, profile, start, mass_tol: float = 1e-9
) -> Trajectory:
    """Expected cumulated discounted payoff from a start state under a
    stationary profile."""
    lam = check_lambda(lam)
    xs = game.validate_profile(profile[0], "p1")
    ys = game.validate_profile(profile[1], "p2")
    k0 = game.state_index(start)
    n = stage_horizon(lam, mass_tol)
    dists = _distribution_walk(game, xs, ys, k0, n)
    stage_payoffs = np.array(
        [xs[k] @ game.payoffs[k] @ ys[k] for k in range(game.n_states)], dtype=_LD
    )
    stage = dists @ stage_payoffs
    keep = _LD(1.0) - _LD(lam)
    discounts = _geometric(keep, n)
    values = _LD(lam) * np.cumsum(discounts * stage)
    tail = float(discounts[-1] * keep) * game.payoff_bound
    return _assemble(lam, discounts, values, tail)


def absorption_cdf(
    game: StochasticGame, lam: float, profile, start, mass_tol: float = 1e-9
) -> Trajectory:
    """Probability that the chain has entered an absorbing state within the
    first n stages, indexed by the stage date t_n."""
    lam = check_lambda(lam)
    xs = game.validate_profile(profile[0], "p1")
    ys = game.validate_profile(profile[1], "p2")
    k0 = game.state_index(start)
    n = stage_horizon(lam, mass_tol)
    dists = _distribution_walk(game, xs, ys, k0, n + 1)
    absorbed = dists[1:, game.absorbing].sum(axis=1)
    keep = _LD(1.0) - _LD(lam)
    discounts = _geometric(keep, n)
    return _assemble(lam, discounts, absorbed, mass_tol)


def from_absorbing(game: AbsorbingGame) -> StochasticGame:
    """Embed an absorbing game: one live state plus a sink per absorbing
    entry, reproducing values and trajectories exactly."""
    rows, cols = game.shape
    names = ["live"]
    flags = [False]
    sink_payoffs = []
    sink_of = {}
    for i in range(rows):
        for j in range(cols):
            if game.p_star[i, j] > 0.0:
                sink_of[(i, j)] = len(names)
                names.append(f"sink_{i}_{j}")
                flags.append(True)
                sink_payoffs.append(game.g_star[i, j])
    n_states = len(names)
    live_rho = np.zeros((rows, cols, n_states))
    for i in range(rows):
        for j in range(cols):
            p = game.p_star[i, j]
            live_rho[i, j, 0] = 1.0 - p
            if p > 0.0:
                live_rho[i, j, sink_of[(i, j)]] = p
    payoffs = [game.g]
    transitions = [live_rho]
    for idx, c in enumerate(sink_payoffs):
        payoffs.append(np.array([[c]]))
        rho = np.zeros((1, 1, n_states))
        rho[0, 0, 1 + idx] = 1.0
        transitions.append(rho)
    return StochasticGame(
        names=tuple(names),
        absorbing=np.array(flags),
        payoffs=tuple(payoffs),
        transitions=tuple(transitions),
    )
