"""homct: exact homological algebra over finite-dimensional F_p-algebras.

Computes Tor, Ext, satellites, complete homology (inverse-limit completion
of Tor), stable homology, and Tate homology for finitely generated modules,
and cross-checks the comparison theorems between the three theories at desk
scale.
"""

__version__ = "0.1.0"
