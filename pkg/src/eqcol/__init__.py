"""Exact-arithmetic workbench for equivariant exceptional collections."""

from .cohomology import (EqLineBundle, KClass, ext_dim_equivariant,
                         euler_pairing, koszul_reduce, line_bundle_class,
                         twist_kclass)
from .complexes import (EqComplex, cohomology_basis, compose_chain_maps,
                        ext_dims, from_line_bundle, hom_complex,
                        pair_ext_dims, right_mutation)
from .cyclotomic import CycNum, Rat, cyclotomic_polynomial, parse_cyc
from .excol import (ExcCollection, Quiver, VeroneseBlocks,
                    beilinson_collection, cascade_mutation, check_exceptional,
                    check_strong, dsing_collection, is_unitriangular, quiver,
                    replay_gram, tensor_twist, veronese_blocks)
from .groups import FiniteMatrixGroup, generate_group
from .linalg import CycMatrix
from .reps import (CharacterVec, Irrep, Setup, binary_dihedral,
                   cyclic_diagonal, irrep_from_images, molien_dimension,
                   verify_irreps)
from .scenario import Scenario, load_scenario, parse_scenario, run_scenario

__all__ = [
    "CharacterVec",
    "CycMatrix",
    "CycNum",
    "EqComplex",
    "EqLineBundle",
    "ExcCollection",
    "FiniteMatrixGroup",
    "Irrep",
    "KClass",
    "Quiver",
    "Rat",
    "Scenario",
    "Setup",
    "VeroneseBlocks",
    "beilinson_collection",
    "binary_dihedral",
    "cascade_mutation",
    "check_exceptional",
    "check_strong",
    "cohomology_basis",
    "compose_chain_maps",
    "cyclic_diagonal",
    "cyclotomic_polynomial",
    "dsing_collection",
    "euler_pairing",
    "ext_dim_equivariant",
    "ext_dims",
    "from_line_bundle",
    "generate_group",
    "hom_complex",
    "irrep_from_images",
    "is_unitriangular",
    "koszul_reduce",
    "line_bundle_class",
    "load_scenario",
    "molien_dimension",
    "pair_ext_dims",
    "parse_cyc",
    "parse_scenario",
    "quiver",
    "replay_gram",
    "right_mutation",
    "run_scenario",
    "tensor_twist",
    "twist_kclass",
    "verify_irreps",
    "veronese_blocks",
]
