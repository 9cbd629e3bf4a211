"""Exact arithmetic for rank-3 hyperbolic integral lattices: discriminant
forms, m-duality, root systems and Vinberg's algorithm."""
from .lattice import Lattice, parse_lattice_symbol
from .discforms import invariant_triple, m_dual
from .vinberg import Budget, classify_reflective, vinberg_run

__version__ = '0.1.0'
__all__ = ['Lattice', 'parse_lattice_symbol', 'invariant_triple', 'm_dual',
           'Budget', 'classify_reflective', 'vinberg_run']
