"""Numerical laboratory for nonlocal games, quantum strategies and tracial states."""
from .errors import *  # noqa: F401,F403
from .game_model import Game, is_imitation, validate_game, CANONICAL
from .correlations import Correlation, is_nonsignalling, is_perfect, epsilon_violation
from .strategies import (TensorStrategy, CommutingStrategy, DeterministicStrategy,
                         correlation_from_tensor, correlation_from_commuting,
                         correlation_from_deterministic)

__version__ = "0.1.0"
