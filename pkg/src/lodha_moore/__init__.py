"""Exact computations in the Lodha-Moore group G0.

Two models are provided: piecewise projective maps of the real line
(``ppsl2``, ``words``) and prefix rewriting on binary sequences (``cantor``,
``prefix``, ``thompson``).  ``bs12`` studies the copy of BS(1,2) generated by
g1 and g2.
"""

from .ppsl2 import IDENTITY, PiecewiseMap, ProjMat, compose, invert, make_map
from .words import GroupWord, complexity, eval_R, parse_word

__all__ = [
    "IDENTITY",
    "GroupWord",
    "PiecewiseMap",
    "ProjMat",
    "complexity",
    "compose",
    "eval_R",
    "invert",
    "make_map",
    "parse_word",
]
