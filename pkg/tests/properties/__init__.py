"""Hypothesis laws of the monomial and diagram algebras."""
