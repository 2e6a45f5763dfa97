"""Solver for quadratic multi-leader-follower games."""

from ._core import (
    Game,
    GameError,
    best_response_exact,
    best_response_oracle,
    best_response_smoothed,
    certify,
    jacobian,
    kkt_residual,
    leader_objective,
    merit,
    newton_solve,
    phi_tilde,
    phi_tilde_d1,
    potential,
    pseudo_gradient,
    solve,
    taylor_direction,
)

__all__ = [
    "Game",
    "GameError",
    "best_response_exact",
    "best_response_oracle",
    "best_response_smoothed",
    "certify",
    "jacobian",
    "kkt_residual",
    "leader_objective",
    "merit",
    "newton_solve",
    "phi_tilde",
    "phi_tilde_d1",
    "potential",
    "pseudo_gradient",
    "solve",
    "taylor_direction",
]
