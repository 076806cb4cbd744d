"""
Graph representation and domination problem definitions.
"""
