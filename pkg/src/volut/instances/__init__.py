"""
Builders for the bundled example categories.

Each builder self-checks its output before returning it.
"""

from volut.instances import fdvect, finmod, finset, quantale

__all__ = ["fdvect", "finmod", "finset", "quantale"]
