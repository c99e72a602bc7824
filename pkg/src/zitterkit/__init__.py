"""zitterkit: Zitterbewegung of free relativistic particles in momentum space.

Operators are dense complex matrices at a fixed momentum. Representations
covered: Dirac, Feshbach-Villars (FV), generalized FV (GFV) for any spin,
the Dirac-like photon and Foldy-Wouthuysen (FW).
"""

__version__ = "0.1.0"

from .operator_core import DefectiveMatrixError, DimensionError, NumericalError, ZitterError  # noqa: E402
from .representations import EnergyBranch, Kind, RepresentationError, RepSpec  # noqa: E402

__all__ = [
    "DefectiveMatrixError",
    "DimensionError",
    "EnergyBranch",
    "Kind",
    "NumericalError",
    "RepSpec",
    "RepresentationError",
    "ZitterError",
    "__version__",
]
