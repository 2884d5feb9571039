"""Nielsen and weak Nielsen classes of generating vectors of finite groups."""

from .atlas import (
    ClassCount,
    GenusRecord,
    action_class_counts,
    claims_report,
    genus_for_n,
    genus_record,
    n_for_genus,
    psi,
    stabilization_map,
)
from .catalog import GroupSpec, bgroup_normal_form, build_group, build_psl2, parse_group_spec
from .engine import (
    GenVector,
    MoveTrace,
    NielsenMove,
    OrbitPartition,
    Variant,
    all_moves,
    apply_move,
    are_equivalent,
    classify,
    is_generating,
    is_redundant,
    neighbors,
    orbit,
    pack,
    stabilize,
    unpack,
    weak_classify,
)
from .errors import (
    ArgumentError,
    CacheError,
    CapacityError,
    DomainError,
    NielsenError,
    NoActionError,
    ParseError,
    UnsupportedError,
)
from .fields import FieldElement, GaloisField, galois_field
from .group import Automorphism, FiniteGroup, Subgroup
from .invariants import (
    AbelianQuotient,
    abelianized_matrix,
    det_invariant,
    euler_phi,
    higman_pair,
    invariant_lower_bound,
    weak_det_orbit,
)
from .persistence import load_partition, save_partition, write_report
from .solvable import (
    CyclicTower,
    cyclic_tower,
    derived_series,
    is_solvable,
    stabilization_equivalence,
    supraminimal_reduce,
    tower_reduce,
)

__version__ = "0.1.0"
