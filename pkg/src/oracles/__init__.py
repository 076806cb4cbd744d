"""
Oracle layer: exact and greedy solvers behind size-capped handles.
"""
