"""Finite groups given by a multiplication table over indices 0..n-1 (0 is the identity)."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np


class GroupTableError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroupTable:
    mul_table: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)
    inverse_table: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self) -> None:
        table = tuple(tuple(int(x) for x in row) for row in self.mul_table)
        object.__setattr__(self, "mul_table", table)
        n = len(table)
        if n == 0:
            raise GroupTableError("empty group table")
        full = set(range(n))
        for i, row in enumerate(table):
            if len(row) != n or set(row) != full:
                raise GroupTableError(f"row {i} is not a permutation of 0..{n - 1}")
        for j in range(n):
            if {table[i][j] for i in range(n)} != full:
                raise GroupTableError(f"column {j} is not a permutation of 0..{n - 1}")
        if table[0] != tuple(range(n)) or any(table[i][0] != i for i in range(n)):
            raise GroupTableError("index 0 is not a two-sided identity")
        for a, b, c in product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise GroupTableError(f"associativity fails at ({a}, {b}, {c})")
        object.__setattr__(self, "inverse_table", tuple(table[i].index(0) for i in range(n)))

    @classmethod
    def cyclic(cls, n: int) -> FiniteGroupTable:
        return cls(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), name=f"Z/{n}")

    @classmethod
    def abelian(cls, orders: Sequence[int]) -> FiniteGroupTable:
        """Direct product of cyclic groups, enumerated with the first coordinate varying fastest.

        With this enumeration the first ``orders[0]`` elements form the first
        factor, the first ``orders[0]*orders[1]`` the first two factors, and so
        on, so towers of such products have nested enumerations.
        """
        orders = [int(n) for n in orders]
        coords = [tuple(reversed(c)) for c in product(*(range(n) for n in reversed(orders)))]
        index = {c: i for i, c in enumerate(coords)}
        table = tuple(
            tuple(index[tuple((a + b) % n for a, b, n in zip(x, y, orders))] for y in coords)
            for x in coords
        )
        name = " x ".join(f"Z/{n}" for n in orders) or "1"
        return cls(table, name=name)

    @classmethod
    def trivial(cls) -> FiniteGroupTable:
        return cls(((0,),), name="1")

    @property
    def order(self) -> int:
        return len(self.mul_table)

    @property
    def identity(self) -> int:
        return 0

    def mul(self, x: int, y: int) -> int:
        return self.mul_table[x][y]

    def inv(self, x: int) -> int:
        return self.inverse_table[x]

    def key(self, x: int) -> int:
        return x

    def contains(self, x: object) -> bool:
        return isinstance(x, (int, np.integer)) and 0 <= x < self.order

    def elements(self) -> range:
        return range(self.order)

    @property
    def is_abelian(self) -> bool:
        t = self.mul_table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        return k

    def random_element(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, self.order))

    def restricts_to(self, sub: FiniteGroupTable) -> bool:
        """True if indices 0..|sub|-1 of this table form a subgroup with ``sub``'s table."""
        m = sub.order
        if m > self.order:
            return False
        return all(self.mul_table[a][b] == sub.mul_table[a][b] for a in range(m) for b in range(m))

    def element_to_json(self, x: int) -> int:
        return int(x)

    def element_from_json(self, obj) -> int:
        x = int(obj)
        if not self.contains(x):
            raise GroupTableError(f"{x} is not an element index of a group of order {self.order}")
        return x

    def __str__(self) -> str:
        return self.name or f"finite group of order {self.order}"
