"""
Utility modules: logging setup and the exception hierarchy.
"""
