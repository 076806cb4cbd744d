"""
Reductions between domination problems, hitting set, node Steiner tree and CNF-SAT.
"""
