"""
File formats and seeded instance generators.
"""
