"""Polynomial-chaos UQ and Sobol sensitivity analysis for epidemic ODE models."""

__version__ = "0.1.0"
