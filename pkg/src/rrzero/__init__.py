"""Real-rank-zero obstruction certificates for group C*-algebras of describable discrete groups."""

__version__ = "0.1.0"
