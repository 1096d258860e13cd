"""Lie-Trotter-Suzuki splitting schemes and their error analysis.

The package is organized around a small stack of exact algebra:

- ``free_algebra``: truncated power series in non-commuting generators
  (exact rational, float, or polynomial coefficients),
- ``hall``: Hall bases of free Lie algebras over graded alphabets and
  extraction of Hall coordinates from word series,
- ``schemes``: splitting-scheme templates, their logarithms via BCH,
  order verification, and the scaled error measure epsilon,
- ``catalog``: named coefficient sets from the splitting literature,
- ``constraints``: order conditions as polynomial systems and small-scale
  Groebner-basis analysis,
- ``optimizer``: constrained minimization of epsilon over free scheme
  parameters,
- ``lattice``: interaction-graph coarse graining and partitioning into
  mutually commuting groups,
- ``validate``: dense-matrix convergence checks of assembled schemes.
"""

from .free_algebra import Generator, NCSeries, exp, log, make_alphabet, mul, series_from_generator
from .hall import HallBasis, LieSeries, build_hall_basis, expand_hall, hall_str, lie_coordinates, witt_dimension

__all__ = [
    "Generator", "NCSeries", "make_alphabet", "series_from_generator", "mul", "exp", "log",
]

__version__ = "0.1.0"
