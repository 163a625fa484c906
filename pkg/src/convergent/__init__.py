"""Executable machinery for convergent infinite computations over terms."""

from .terms import (
    App,
    Atom,
    Distance,
    Substitution,
    Var,
    ZERO,
    apply_substitution,
    atom_distance,
    depth,
    distance,
    least_var_depth,
    same_to_depth,
)
from .syntax import ParseError, parse_atom, parse_term

__version__ = "0.1.0"
