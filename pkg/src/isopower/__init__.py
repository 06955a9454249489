"""Abelian varieties isogenous to a power of an elliptic curve over a finite field."""
from .arith import (EllipticCurve, FiniteField, TorsionLattice, curve_create, field_create,
                    group_structure, point_count, point_op, torsion_basis)
from .config import Config
from .decide import (EquivalenceVerdict, decide_equivalence, describe_image, end_conductor,
                     maximal_scan)
from .errors import IsoPowerError
from .functor import (VarietyModel, duality_check, hom_point_count, hom_torsion, is_saturated,
                      kernel_of_ideal)
from .kernels import (Commutant, SubgroupData, brute_force_kernels, commutant, galois_image_test,
                      is_kernel_subgroup)
from .modules import (ModuleNF, RModule, dual_module, enumerate_modules, is_isomorphic,
                      module_from_ideals, module_from_presentation, normal_form)
from .orders import (ClassGroup, QuadIdeal, QuadOrder, class_group, ideal_arith, ideal_from_form,
                     order_from_disc, reduce_form)

__version__ = "0.1.0"

__all__ = [
    "ClassGroup", "Commutant", "Config", "EllipticCurve", "EquivalenceVerdict", "FiniteField",
    "IsoPowerError", "ModuleNF", "QuadIdeal", "QuadOrder", "RModule", "SubgroupData",
    "TorsionLattice", "VarietyModel", "brute_force_kernels", "class_group", "commutant",
    "curve_create", "decide_equivalence", "describe_image", "dual_module", "duality_check",
    "end_conductor", "enumerate_modules", "field_create", "galois_image_test", "group_structure",
    "hom_point_count", "hom_torsion", "ideal_arith", "ideal_from_form", "is_isomorphic",
    "is_kernel_subgroup", "is_saturated", "kernel_of_ideal", "maximal_scan", "module_from_ideals",
    "module_from_presentation", "normal_form", "order_from_disc", "point_count", "point_op",
    "reduce_form", "torsion_basis",
]
