"""Static figures from orbitcount CSV results.

This package is a pure view layer: it reads the CSV files written by the
``orbitcount`` command line tool and renders them as images.  It never
recomputes estimates and has no dependency on the estimation code.
"""

from .plots import FigureSpec, KINDS, SchemaError, plot

__all__ = ["FigureSpec", "KINDS", "SchemaError", "plot"]

__version__ = "0.1.0"
