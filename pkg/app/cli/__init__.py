"""Command-line surface: run, sweep, oracle and weighting"""
