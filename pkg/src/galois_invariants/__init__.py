"""Arithmetic invariants of algebraic tori and reductive groups from Galois lattices."""

from .abelian import AbelianHom, FiniteAbelianGroup
from .arithmetic import PlacesSpec, TorusReport, restriction_system, torus_report
from .cohomology import dimension_shift, restriction, tate
from .flasque import FlasqueResolutionData, certify_flasque, coflasque_cover, flasque_resolution
from .groups import FiniteGroup, Subgroup, build_group, cyclic_subgroup_classes, subgroup_classes
from .lattice import GaloisLattice, LatticeMap, dual, fixed_sublattice, norm_one_torus_lattice, permutation_lattice
from .reductive import ReductiveDescriptor, group_report, wa_criteria

__all__ = [
    "AbelianHom",
    "FiniteAbelianGroup",
    "FiniteGroup",
    "FlasqueResolutionData",
    "GaloisLattice",
    "LatticeMap",
    "PlacesSpec",
    "ReductiveDescriptor",
    "Subgroup",
    "TorusReport",
    "build_group",
    "certify_flasque",
    "coflasque_cover",
    "cyclic_subgroup_classes",
    "dimension_shift",
    "dual",
    "fixed_sublattice",
    "flasque_resolution",
    "group_report",
    "norm_one_torus_lattice",
    "permutation_lattice",
    "restriction",
    "restriction_system",
    "subgroup_classes",
    "tate",
    "torus_report",
    "wa_criteria",
]
