"""
rprf-sim

Query-model simulation of distinguishing random functions from random
permutations: collision profiles, hybrid reductions, exact Grover search and
the table-plus-search collision distinguisher.
"""

__version__ = "1.0.0"
