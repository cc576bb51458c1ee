"""Describable discrete groups and their structural calculus."""

from rrzero.groups.abelian import (
    AbelianElement,
    DimensionError,
    FGAbelianGroup,
    abelian_arithmetic,
    free_projection,
    invariant_factors,
    is_torsion,
    torsion_subgroup_and_free_quotient,
)
from rrzero.groups.description import (
    AB,
    INF,
    LF,
    AbelianAtom,
    DeclaredAtom,
    DescriptionError,
    Extension,
    FiniteAtom,
    GroupDescription,
    IncreasingUnion,
    Semidirect,
    UnsupportedDescription,
    describe,
    hirsch_length,
    normalize_normal_series,
    walk,
)
from rrzero.groups.finite import FiniteGroupTable, GroupTableError
from rrzero.groups.semidirect import (
    ActionError,
    SemidirectElement,
    SemidirectProductGroup,
    Sublattice,
    semidirect_arithmetic,
    translation_center,
)
