"""Finite fields, elliptic curves over them, and torsion lattices."""
from .curve import EllipticCurve, PointCount, curve_create, group_structure, point_count, point_op
from .field import FiniteField, field_create, parse_element
from .torsion import TorsionLattice, torsion_basis, torsion_degree

__all__ = [
    "EllipticCurve", "FiniteField", "PointCount", "TorsionLattice", "curve_create", "field_create",
    "group_structure", "parse_element", "point_count", "point_op", "torsion_basis", "torsion_degree",
]
