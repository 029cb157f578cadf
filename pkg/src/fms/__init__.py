"""Finite topological spaces as posets: homology, homotopy, covers, splittings, enumeration."""

from .errors import FMSError
from .poset import Poset, build_poset, poset_from_json, poset_to_json

__version__ = "0.1.0"
