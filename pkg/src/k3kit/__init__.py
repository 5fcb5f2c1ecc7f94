"""Exact arithmetic for K3 surfaces: Picard lattices, elliptic fibrations, monodromy and multisections.

Submodules:

- ``lattice``: even integral lattices, vector search, local solubility.
- ``modular``: finite monodromy images in SL2(Z/m), orbits, multisection genera.
- ``fibers``: Kodaira fiber table and singular-fiber configuration enumeration.
- ``weierstrass``: discriminants, j-maps and per-place fiber types of y^2 = x^3 + p x + q.
- ``torsor``: degree/order bookkeeping for genus-one fibrations and their multisections.
- ``density``: Picard-lattice rules deciding potential density.
"""

from .errors import InvalidInput

__version__ = "0.1.0"

__all__ = ["InvalidInput", "__version__"]
