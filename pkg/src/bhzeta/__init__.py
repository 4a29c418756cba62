"""Orbifold zeta functions of invertible Calabi-Yau hypersurfaces over F_p."""

__version__ = "0.1.0"

from .matrixcore import BHMatrix, enumerate_group, span, transpose_group, validate  # noqa: F401
