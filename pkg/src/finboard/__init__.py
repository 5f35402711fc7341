"""finboard: deterministic financial board-game simulations for agent benchmarking."""

__version__ = "0.1.0"
