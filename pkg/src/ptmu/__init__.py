"""Model checking and satisfiability for the modal mu-calculus on P-transitive graphs."""

__version__ = "0.1.0"
