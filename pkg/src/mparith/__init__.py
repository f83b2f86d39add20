"""Multiple-precision floating point with instrumented cost accounting."""

from . import bigfrac, costs, elemfun, mulkernel, newton, zerofind
from ._kernels import BACKEND, HAVE_NUMBA
from .bigfrac import BigFloat, Precision
from .errors import MPError

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "HAVE_NUMBA", "BigFloat", "MPError", "Precision",
    "bigfrac", "costs", "elemfun", "mulkernel", "newton", "zerofind",
]
