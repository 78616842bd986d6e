"""EPDDL compiler and dynamic epistemic logic engine."""

__version__ = "0.1.0"

# load the front end before expand to settle the import order
from . import frontend  # noqa: E402

__all__ = ["frontend", "__version__"]
