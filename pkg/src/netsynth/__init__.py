"""Network synthesis by bi-objective degree optimisation."""

__version__ = "0.1.0"
