"""Z^r x| H for a finite group H acting through integer matrices."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from rrzero.groups import lattice
from rrzero.groups.abelian import AbelianElement, DimensionError, FGAbelianGroup
from rrzero.groups.finite import FiniteGroupTable


class ActionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SemidirectElement:
    v: tuple[int, ...]
    h: int

    def __str__(self) -> str:
        return f"({','.join(map(str, self.v))}; h{self.h})"


@dataclass(frozen=True)
class SemidirectProductGroup:
    """G = Z^rank x| acting, with (v1, h1)(v2, h2) = (v1 + A(h1) v2, h1 h2)."""

    rank: int
    acting: FiniteGroupTable
    action: tuple[lattice.IntMatrix, ...]

    def __post_init__(self) -> None:
        action = tuple(lattice.as_int_matrix(m) if m else () for m in self.action)
        object.__setattr__(self, "action", action)
        r = self.rank
        if len(action) != self.acting.order:
            raise ActionError(f"need one matrix per acting element ({self.acting.order}), got {len(action)}")
        for h, m in enumerate(action):
            if r and (len(m) != r or any(len(row) != r for row in m)):
                raise ActionError(f"action matrix for h{h} is not {r}x{r}")
            if r and abs(lattice.det(m)) != 1:
                raise ActionError(f"action matrix for h{h} is not invertible over Z")
        if r and action[0] != lattice.identity(r):
            raise ActionError("identity of the acting group must act trivially")
        if r:
            t = self.acting.mul_table
            for a in range(self.acting.order):
                for b in range(self.acting.order):
                    if lattice.matmul(action[a], action[b]) != action[t[a][b]]:
                        raise ActionError(f"action is not a homomorphism at (h{a}, h{b})")

    @classmethod
    def from_generator_action(
        cls, rank: int, orders: Sequence[int], generator_matrices: Sequence[Sequence[Sequence[int]]]
    ) -> SemidirectProductGroup:
        """Acting group Z/n_1 x ... x Z/n_k, with the j-th generator acting by the j-th matrix."""
        acting = FiniteGroupTable.abelian(orders)
        gens = [lattice.as_int_matrix(m) for m in generator_matrices]
        if len(gens) != len(orders):
            raise ActionError("need one matrix per cyclic factor")
        mats = []
        coords = _mixed_radix(orders)
        for c in coords:
            m = lattice.identity(rank)
            for g, e in zip(gens, c):
                for _ in range(e):
                    m = lattice.matmul(m, g)
            mats.append(m)
        return cls(rank, acting, tuple(mats))

    @property
    def base(self) -> FGAbelianGroup:
        return FGAbelianGroup(self.rank)

    def matrix(self, h: int) -> lattice.IntMatrix:
        return self.action[h] if self.rank else ()

    def _act(self, h: int, v: Sequence[int]) -> tuple[int, ...]:
        return lattice.matvec(self.matrix(h), v) if self.rank else ()

    @property
    def identity(self) -> SemidirectElement:
        return SemidirectElement((0,) * self.rank, 0)

    def element(self, v: Sequence[int] = (), h: int = 0) -> SemidirectElement:
        v = tuple(int(x) for x in v) if v else (0,) * self.rank
        if len(v) != self.rank or not self.acting.contains(h):
            raise DimensionError(f"({v}, {h}) is not an element of {self}")
        return SemidirectElement(v, int(h))

    def contains(self, x: object) -> bool:
        return isinstance(x, SemidirectElement) and len(x.v) == self.rank and self.acting.contains(x.h)

    def _check(self, x: SemidirectElement) -> None:
        if not self.contains(x):
            raise DimensionError(f"{x} is not an element of {self}")

    def mul(self, x: SemidirectElement, y: SemidirectElement) -> SemidirectElement:
        self._check(x)
        self._check(y)
        w = self._act(x.h, y.v)
        return SemidirectElement(tuple(a + b for a, b in zip(x.v, w)), self.acting.mul(x.h, y.h))

    def inv(self, x: SemidirectElement) -> SemidirectElement:
        self._check(x)
        hinv = self.acting.inv(x.h)
        return SemidirectElement(tuple(-a for a in self._act(hinv, x.v)), hinv)

    def conjugate(self, g: SemidirectElement, x: SemidirectElement) -> SemidirectElement:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def key(self, x: SemidirectElement) -> tuple:
        return (x.h, x.v)

    def in_base(self, x: SemidirectElement) -> bool:
        return x.h == 0

    def to_base(self, x: SemidirectElement) -> AbelianElement:
        if x.h != 0:
            raise ValueError(f"{x} is not in the normal lattice")
        return AbelianElement(x.v, ())

    def from_base(self, a: AbelianElement) -> SemidirectElement:
        return self.element(a.free, 0)

    def random_element(self, rng: np.random.Generator, bound: int = 2) -> SemidirectElement:
        v = tuple(int(x) for x in rng.integers(-bound, bound + 1, size=self.rank))
        return SemidirectElement(v, self.acting.random_element(rng))

    def element_to_json(self, x: SemidirectElement) -> dict:
        return {"v": list(x.v), "h": x.h}

    def element_from_json(self, obj) -> SemidirectElement:
        return self.element(obj.get("v", ()), obj.get("h", 0))

    @property
    def is_abelian(self) -> bool:
        return self.acting.is_abelian and all(m == lattice.identity(self.rank) for m in self.action)

    def __str__(self) -> str:
        return f"Z^{self.rank} x| {self.acting}"


def semidirect_arithmetic(x: SemidirectElement, y: SemidirectElement, group: SemidirectProductGroup) -> SemidirectElement:
    return group.mul(x, y)


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^ambient_rank given by a Hermite basis."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def group(self) -> FGAbelianGroup:
        return FGAbelianGroup(len(self.basis))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        return lattice.hermite_rows(list(self.basis) + [tuple(v)]) == list(self.basis)


def translation_center(group: SemidirectProductGroup) -> Sublattice:
    """The lattice {v : A(h) v = v for all h}.

    Every (v, e) with v in this lattice is central in the group.
    """
    r = group.rank
    ident = lattice.identity(r)
    stacked = [
        tuple(m[i][j] - ident[i][j] for j in range(r))
        for m in group.action
        for i in range(r)
    ]
    return Sublattice(r, tuple(lattice.integer_kernel(stacked, r)))


def _mixed_radix(orders: Sequence[int]) -> list[tuple[int, ...]]:
    return [tuple(reversed(c)) for c in product(*(range(n) for n in reversed(orders)))]
