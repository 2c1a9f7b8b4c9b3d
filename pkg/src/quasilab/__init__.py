"""quasilab: a finite-model laboratory for indistinguishability.

Quasi-sets of unlabelled m-objects, automorphism-based indiscernibility of
finite structures, a logic DSL with identity/PII checkers, a finite
realization of the quantum-structure apparatus, and Fock-space statistics
derived by direct occupancy counting.
"""

__version__ = "0.1.0"
