"""Global random walk solvers for variably saturated flow and transport."""

__version__ = "0.1.0"
