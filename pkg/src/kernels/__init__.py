"""
Approximate Turing kernelizations and the lemmas that combine their partial solutions.
"""
