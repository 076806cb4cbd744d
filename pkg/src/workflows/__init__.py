"""
Experiment orchestration: single runs, parallel batches and verification suites.
"""
