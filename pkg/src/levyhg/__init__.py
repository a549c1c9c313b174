"""
Levy processes of the extended hypergeometric class and the stable-process laws built
on them.
"""

__version__ = "0.1.0"
