"""Validators, the solver exception hierarchy and numeric helpers"""
