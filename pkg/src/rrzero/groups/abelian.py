"""Finitely generated abelian groups Z^r + Z/n_1 + ... + Z/n_k in invariant-factor form."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint


class DimensionError(ValueError):
    """Element shape does not match its group."""


@dataclass(frozen=True, order=True)
class AbelianElement:
    free: tuple[int, ...]
    torsion: tuple[int, ...] = ()

    def is_torsion(self) -> bool:
        return not any(self.free)

    def __str__(self) -> str:
        body = ",".join(map(str, self.free))
        if self.torsion:
            body += "|" + ",".join(map(str, self.torsion))
        return f"({body})"


def is_torsion(x: AbelianElement) -> bool:
    return x.is_torsion()


def invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors n_1 | n_2 | ... of a direct sum of cyclic groups of the given orders.

    >>> invariant_factors([2, 3])
    (6,)
    >>> invariant_factors([4, 6])
    (2, 12)
    """
    powers: dict[int, list[int]] = defaultdict(list)
    for n in orders:
        n = int(n)
        if n < 1:
            raise ValueError(f"cyclic order must be positive, got {n}")
        for p, e in factorint(n).items():
            powers[p].append(p**e)
    if not powers:
        return ()
    length = max(len(v) for v in powers.values())
    factors = [1] * length
    for p, pp in powers.items():
        pp.sort(reverse=True)
        for i, q in enumerate(pp):
            factors[length - 1 - i] *= q
    return tuple(f for f in factors if f > 1)


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank + sum of Z/n_i with n_1 | n_2 | ... and each n_i >= 2.

    Use :meth:`from_cyclic` to normalize an arbitrary direct sum; the plain
    constructor only accepts invariant-factor input.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "torsion", tuple(int(n) for n in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        for n in self.torsion:
            if n < 2:
                raise ValueError(f"torsion factor {n} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion factors {self.torsion} break the divisibility chain at {a} | {b}")

    @classmethod
    def from_cyclic(cls, free_rank: int, orders: Iterable[int] = ()) -> FGAbelianGroup:
        return cls(free_rank, invariant_factors(orders))

    # -- structure -------------------------------------------------------

    @property
    def is_locally_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        return prod(self.torsion) if self.free_rank == 0 else None

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{n}" for n in self.torsion]
        if not parts:
            return "1"
        if self.free_rank > 1 and not self.torsion:
            return f"Z^{self.free_rank}"
        return " + ".join(parts)

    # -- elements --------------------------------------------------------

    def element(self, free: Sequence[int] = (), torsion: Sequence[int] = ()) -> AbelianElement:
        free = tuple(int(x) for x in free) if free else (0,) * self.free_rank
        torsion = tuple(int(x) for x in torsion) if torsion else (0,) * len(self.torsion)
        self._check_shape(free, torsion)
        return AbelianElement(free, tuple(c % n for c, n in zip(torsion, self.torsion)))

    def _check_shape(self, free: Sequence[int], torsion: Sequence[int]) -> None:
        if len(free) != self.free_rank or len(torsion) != len(self.torsion):
            raise DimensionError(
                f"element with {len(free)} free / {len(torsion)} torsion coordinates "
                f"does not fit {self}"
            )

    def contains(self, x: object) -> bool:
        return (
            isinstance(x, AbelianElement)
            and len(x.free) == self.free_rank
            and len(x.torsion) == len(self.torsion)
            and all(0 <= c < n for c, n in zip(x.torsion, self.torsion))
        )

    @property
    def identity(self) -> AbelianElement:
        return AbelianElement((0,) * self.free_rank, (0,) * len(self.torsion))

    def mul(self, x: AbelianElement, y: AbelianElement) -> AbelianElement:
        self._check_shape(x.free, x.torsion)
        self._check_shape(y.free, y.torsion)
        return AbelianElement(
            tuple(a + b for a, b in zip(x.free, y.free)),
            tuple((a + b) % n for a, b, n in zip(x.torsion, y.torsion, self.torsion)),
        )

    def inv(self, x: AbelianElement) -> AbelianElement:
        self._check_shape(x.free, x.torsion)
        return AbelianElement(
            tuple(-a for a in x.free),
            tuple((-a) % n for a, n in zip(x.torsion, self.torsion)),
        )

    def power(self, x: AbelianElement, k: int) -> AbelianElement:
        return AbelianElement(
            tuple(k * a for a in x.free),
            tuple((k * a) % n for a, n in zip(x.torsion, self.torsion)),
        )

    def key(self, x: AbelianElement) -> tuple:
        return (x.free, x.torsion)

    def generators(self) -> list[AbelianElement]:
        gens = []
        for i in range(self.free_rank):
            free = [0] * self.free_rank
            free[i] = 1
            gens.append(self.element(free))
        for j in range(len(self.torsion)):
            tors = [0] * len(self.torsion)
            tors[j] = 1
            gens.append(self.element((), tors))
        return gens

    def random_element(self, rng: np.random.Generator, bound: int = 3) -> AbelianElement:
        free = tuple(int(v) for v in rng.integers(-bound, bound + 1, size=self.free_rank))
        torsion = tuple(int(rng.integers(0, n)) for n in self.torsion)
        return AbelianElement(free, torsion)

    def element_to_json(self, x: AbelianElement) -> dict:
        return {"free": list(x.free), "torsion": list(x.torsion)}

    def element_from_json(self, obj) -> AbelianElement:
        if isinstance(obj, dict):
            return self.element(obj.get("free", ()), obj.get("torsion", ()))
        # bare list: free coordinates only
        return self.element(obj)


def abelian_arithmetic(x: AbelianElement, y: AbelianElement, group: FGAbelianGroup) -> AbelianElement:
    return group.mul(x, y)


def torsion_subgroup_and_free_quotient(group: FGAbelianGroup) -> tuple[FGAbelianGroup, FGAbelianGroup]:
    """Split off T(G) and G/T(G) = Z^r."""
    return FGAbelianGroup(0, group.torsion), FGAbelianGroup(group.free_rank)


def free_projection(x: AbelianElement) -> AbelianElement:
    """Image of ``x`` under G -> G/T(G)."""
    return AbelianElement(x.free, ())
