"""Discounted values, optimal stationary strategies, and limit trajectories
for zero-sum absorbing and finite stochastic games."""

__version__ = "0.1.0"
