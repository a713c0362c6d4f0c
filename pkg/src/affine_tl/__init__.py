"""
Affine Temperley-Lieb algebra of type C and its decorated diagram calculus.

This package provides exact arithmetic in the monomial basis indexed by
fully commutative elements, the LR-decorated diagram algebra, the
homomorphism between them, and a suite runner that checks they agree.
"""

__version__ = "0.1.0"
__author__ = "Affine TL Team"
