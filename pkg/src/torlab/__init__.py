"""torlab: exact-arithmetic toroidal Lie algebra laboratory.

Everything is computed over cyclotomic extensions of the rationals; there is
no floating point anywhere in the verification paths.
"""

from .scalar import Cyc

__version__ = "0.1.0"

__all__ = ["Cyc", "__version__"]
