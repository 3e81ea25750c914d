"""Verification checks.

Check modules import the algebra layer only; the registry is imported
explicitly from ``rdlab.checks.registry``.
"""
