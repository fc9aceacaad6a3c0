"""Dynkin diagram cohomology of finite Coxeter groups, computed exactly."""

from .diagram import (CoxeterDiagram, DiagramError, Subdiagram, named_diagram,
                      parse_diagram)

__version__ = "0.1.0"

__all__ = ["CoxeterDiagram", "DiagramError", "Subdiagram", "named_diagram",
           "parse_diagram", "__version__"]
