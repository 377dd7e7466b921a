"""Explicit matrix models of simple supermodules for cyclotomic
Hecke-Clifford superalgebras and their degenerate (Sergeev) cousins.

The package builds the modules generator by generator, checks every
defining relation numerically at high precision, and carries an
independent brute-force regular-representation oracle for small ranks.
"""

__version__ = "0.1.0"
