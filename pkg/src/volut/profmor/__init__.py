"""
Profunctors between finite categories and bimodules over finite F2-algebras.
"""

from volut.profmor import morita, prof

__all__ = ["morita", "prof"]
