"""Mechanical verification of a local-global principle for prime-degree
isogenies: exhaustive group-theoretic checks inside GL_2(F_ell) for small
ell, plus an end-to-end arithmetic reproduction of the degree-7
counterexample curve.
"""

__version__ = "0.1.0"
