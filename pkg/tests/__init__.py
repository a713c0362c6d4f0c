"""
Test suite for the affine TL engine.

Unit and property tests cover the package modules; integration tests drive
the command line end to end.
"""

__version__ = "0.1.0"
