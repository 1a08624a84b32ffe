"""Computational toolkit for amoebas, monodromy graphs and local special Lagrangian fibrations."""

__version__ = "0.1.0"
