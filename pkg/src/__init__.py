"""
dynlab - numerical laboratory for topological dynamics

Finite-precision experiments on dynamical balls, pseudo-orbit shadowing,
horseshoe certificates, entropy and chain recurrence for the cat map, its
sphere quotient, the Example 1 system and symbolic shifts.
"""

__version__ = "0.1.0"
