"""Construction trees for describable discrete groups.

Atoms are finitely generated abelian groups, finite tables, semidirect
products Z^r x| H and opaque groups known only through declared tags.
Combinators are extensions and increasing unions given by a finite prefix
of stages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import groupby
from typing import Iterator, Literal, Mapping, Sequence, Union

from rrzero.groups import lattice
from rrzero.groups.abelian import FGAbelianGroup
from rrzero.groups.finite import FiniteGroupTable
from rrzero.groups.semidirect import SemidirectProductGroup

INF = math.inf

TAG_NAMES = (
    "locally-finite",
    "periodic",
    "torsion-free",
    "abelian",
    "nilpotent",
    "locally-nilpotent",
    "solvable",
    "virtually-solvable",
    "elementary-amenable",
    "amenable",
    "finite-hirsch",
    "nontrivial",
    "strongly-not-FS",
    "torsion-free-finite-index-subgroup",
)


class UnsupportedDescription(ValueError):
    """The description uses a shape the requested operation cannot handle."""


class DescriptionError(ValueError):
    """The description is malformed."""


def _check_tags(tags: Mapping[str, bool]) -> dict[str, bool]:
    for name, value in tags.items():
        if name not in TAG_NAMES:
            raise DescriptionError(f"unknown tag {name!r}")
        if not isinstance(value, bool):
            raise DescriptionError(f"tag {name!r} must be true or false")
    return dict(tags)


@dataclass(frozen=True)
class _Node:
    def __post_init__(self) -> None:
        object.__setattr__(self, "tags", _check_tags(self.tags))


@dataclass(frozen=True, eq=False)
class AbelianAtom(_Node):
    group: FGAbelianGroup
    tags: Mapping[str, bool] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class FiniteAtom(_Node):
    table: FiniteGroupTable
    tags: Mapping[str, bool] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class Semidirect(_Node):
    group: SemidirectProductGroup
    tags: Mapping[str, bool] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class DeclaredAtom(_Node):
    """A group known only by name, declared tags and optionally its Hirsch length."""

    name: str
    tags: Mapping[str, bool] = field(default_factory=dict)
    hirsch: int | float | None = None


@dataclass(frozen=True, eq=False)
class Extension(_Node):
    """1 -> normal -> G -> quotient -> 1."""

    normal: GroupDescription
    quotient: GroupDescription
    realization: SemidirectProductGroup | None = None
    tags: Mapping[str, bool] = field(default_factory=dict)

    def __post_init__(self) -> None:
        super().__post_init__()
        real = self.realization
        if real is None:
            return
        n, q = self.normal, self.quotient
        if not (isinstance(n, AbelianAtom) and n.group == FGAbelianGroup(real.rank)):
            raise DescriptionError(f"realization {real} does not have normal subgroup matching the declared one")
        if not (isinstance(q, FiniteAtom) and q.table == real.acting):
            raise DescriptionError(f"realization {real} does not have quotient matching the declared one")


@dataclass(frozen=True, eq=False)
class IncreasingUnion(_Node):
    """Union of a declared nested sequence of stages.

    Only a finite prefix is stored.  ``extrapolate`` says how the Hirsch
    lengths of later stages behave: ``"stable"`` (the prefix supremum is the
    limit) or ``"unbounded"`` (a strictly growing prefix keeps growing).
    ``stage_tags`` are declared for every stage, including unlisted ones.
    """

    stages: tuple[GroupDescription, ...]
    connecting: tuple[lattice.IntMatrix, ...] | None = None
    extrapolate: Literal["stable", "unbounded"] = "stable"
    stage_tags: Mapping[str, bool] = field(default_factory=dict)
    tags: Mapping[str, bool] = field(default_factory=dict)

    def __post_init__(self) -> None:
        super().__post_init__()
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "stage_tags", _check_tags(self.stage_tags))
        if not self.stages:
            raise DescriptionError("increasing union needs at least one stage")
        if self.extrapolate not in ("stable", "unbounded"):
            raise DescriptionError(f"unknown extrapolation {self.extrapolate!r}")
        if self.connecting is not None:
            maps = tuple(lattice.as_int_matrix(m) for m in self.connecting)
            object.__setattr__(self, "connecting", maps)
            self._check_abelian_nesting(maps)
        self._check_semidirect_nesting()

    def _check_abelian_nesting(self, maps) -> None:
        if len(maps) != len(self.stages) - 1:
            raise DescriptionError("need one connecting map between consecutive stages")
        for i, m in enumerate(maps):
            src, dst = self.stages[i], self.stages[i + 1]
            if not (isinstance(src, AbelianAtom) and isinstance(dst, AbelianAtom)):
                raise DescriptionError("connecting matrices are only supported between abelian stages")
            r0, r1 = src.group.free_rank, dst.group.free_rank
            if len(m) != r1 or any(len(row) != r0 for row in m):
                raise DescriptionError(f"connecting map {i} must be {r1}x{r0}")
            # injective on the free part: full column rank
            if r0 and len(lattice.integer_kernel(m, r0)) != 0:
                raise DescriptionError(f"connecting map {i} is not injective")

    def _check_semidirect_nesting(self) -> None:
        semis = [s for s in self.stages if isinstance(s, Semidirect)]
        if len(semis) != len(self.stages) or len(semis) < 2:
            return
        for a, b in zip(semis, semis[1:]):
            ga, gb = a.group, b.group
            if ga.rank != gb.rank or not gb.acting.restricts_to(ga.acting):
                raise DescriptionError(f"stage {ga} is not an initial segment of {gb}")
            if any(gb.action[h] != ga.action[h] for h in range(ga.acting.order)):
                raise DescriptionError(f"actions of {ga} and {gb} disagree on the common acting subgroup")


GroupDescription = Union[AbelianAtom, FiniteAtom, Semidirect, DeclaredAtom, Extension, IncreasingUnion]


def children(d: GroupDescription) -> list[tuple[str, GroupDescription]]:
    if isinstance(d, Extension):
        return [("normal", d.normal), ("quotient", d.quotient)]
    if isinstance(d, IncreasingUnion):
        return [(f"stages[{i}]", s) for i, s in enumerate(d.stages)]
    return []


def walk(d: GroupDescription, path: str = "root") -> Iterator[tuple[str, GroupDescription]]:
    """Post-order traversal yielding (path, node)."""
    for name, child in children(d):
        yield from walk(child, f"{path}.{name}")
    yield path, d


def describe(d: GroupDescription) -> str:
    if isinstance(d, (AbelianAtom, Semidirect)):
        return str(d.group)
    if isinstance(d, FiniteAtom):
        return str(d.table)
    if isinstance(d, DeclaredAtom):
        return d.name
    if isinstance(d, Extension):
        return f"({describe(d.normal)}).({describe(d.quotient)})"
    return f"union[{', '.join(describe(s) for s in d.stages)}, ...]"


# -- Hirsch length ----------------------------------------------------------


def hirsch_length(d: GroupDescription) -> int | float:
    """Hirsch length: h(Z) = 1, h(finite) = 0, additive on extensions, sup on unions.

    Returns ``math.inf`` for infinite Hirsch length.
    """
    if isinstance(d, AbelianAtom):
        return d.group.free_rank
    if isinstance(d, FiniteAtom):
        return 0
    if isinstance(d, Semidirect):
        return d.group.rank
    if isinstance(d, DeclaredAtom):
        if d.hirsch is not None:
            return d.hirsch
        if d.tags.get("locally-finite"):
            return 0
        if d.tags.get("elementary-amenable") is False:
            raise UnsupportedDescription(f"{d.name} is declared not elementary amenable; Hirsch length undefined")
        raise UnsupportedDescription(f"{d.name}: tags are insufficient to determine the Hirsch length")
    if isinstance(d, Extension):
        return hirsch_length(d.normal) + hirsch_length(d.quotient)
    if isinstance(d, IncreasingUnion):
        values = [hirsch_length(s) for s in d.stages]
        if any(b < a for a, b in zip(values, values[1:])):
            raise DescriptionError(f"stage Hirsch lengths {values} decrease; stages are not nested")
        if d.extrapolate == "unbounded" and values[-1] > values[0]:
            return INF
        return max(values)
    raise UnsupportedDescription(f"unsupported description node {type(d).__name__}")


# -- normal series ------------------------------------------------------------

LF = "LF"
AB = "Ab"


def normalize_normal_series(labels: Sequence[str]) -> list[str]:
    """Merge adjacent locally finite factors until no two are adjacent.

    Labels are ``"LF"`` (locally finite factor) and ``"Ab"`` (abelian factor);
    locally finite groups are closed under extensions, so each run of ``LF``
    collapses to one factor.
    """
    for x in labels:
        if x not in (LF, AB):
            raise ValueError(f"unknown series label {x!r}")
    out: list[str] = []
    for label, run in groupby(labels):
        out.extend([LF] if label == LF else list(run))
    return out
