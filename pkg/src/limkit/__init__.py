"""limkit: exact computation of higher limits of diagrams of abelian groups over graded posets."""

from .errors import LimkitError
from .exactalg import FgAbGroup, IntMatrix, PresentedGroup, cokernel, homology_at, smith_normal_form, solve_in_lattice

__all__ = [
    "FgAbGroup",
    "IntMatrix",
    "LimkitError",
    "PresentedGroup",
    "cokernel",
    "homology_at",
    "smith_normal_form",
    "solve_in_lattice",
]
__version__ = "0.1.0"
