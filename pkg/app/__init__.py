"""
Multiobjective Barrier Method Solver

Interior barrier method for constrained multiobjective optimization:
a decreasing sequence of barrier-penalized scalar subproblems Phi(f + tau B),
warm-started from the previous iterate, with grid oracles and the
weighting-method baseline for verification.
"""

__version__ = "1.0.0"
__author__ = "Optimization Engineering"
__description__ = "Multiobjective barrier method with Pareto oracles and a command-line runner"
