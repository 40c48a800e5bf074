"""Weyl groups of class-C sandwich algebras, built and checked in exact arithmetic."""

__version__ = "0.1.0"
