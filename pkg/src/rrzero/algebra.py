"""Exact arithmetic in the group algebra C[G] and in matrices over it.

Coefficients are complex rationals; floating point only enters when an
element is evaluated at a character (see :mod:`rrzero.oscillation`).
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Mapping, Protocol, Sequence

import numpy as np


class Group(Protocol):
    @property
    def identity(self) -> Hashable: ...

    def mul(self, x, y): ...

    def inv(self, x): ...

    def key(self, x) -> Any: ...

    def contains(self, x) -> bool: ...


class MixedGroupError(ValueError):
    pass


# -- complex rationals ----------------------------------------------------------


@dataclass(frozen=True)
class ComplexRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, value) -> ComplexRational:
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, (numbers.Rational, int, str)):
            return cls(Fraction(value))
        if isinstance(value, float):
            return cls(Fraction(value))
        if isinstance(value, (tuple, list)) and len(value) == 2:
            return cls(Fraction(value[0]), Fraction(value[1]))
        raise TypeError(f"cannot interpret {value!r} as a complex rational")

    def __add__(self, other) -> ComplexRational:
        o = ComplexRational.of(other)
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> ComplexRational:
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other) -> ComplexRational:
        return self + (-ComplexRational.of(other))

    def __rsub__(self, other) -> ComplexRational:
        return ComplexRational.of(other) - self

    def __mul__(self, other) -> ComplexRational:
        o = ComplexRational.of(other)
        return ComplexRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other) -> ComplexRational:
        o = ComplexRational.of(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("complex rational division by zero")
        return self * ComplexRational(o.re / d, -o.im / d)

    def __eq__(self, other) -> bool:
        try:
            o = ComplexRational.of(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> ComplexRational:
        return ComplexRational(self.re, -self.im)

    def abs_upper(self) -> Fraction:
        """A rational upper bound for |z| (|re| + |im|)."""
        return abs(self.re) + abs(self.im)

    def to_json(self) -> str | list[str]:
        if self.im == 0:
            return str(self.re)
        return [str(self.re), str(self.im)]

    def __repr__(self) -> str:
        if self.im == 0:
            return f"{self.re}"
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


ZERO = ComplexRational(Fraction(0))
ONE = ComplexRational(Fraction(1))


# -- C[G] -------------------------------------------------------------------------


class GroupAlgebraElement:
    """A finite formal sum sum_g lambda_g g with complex rational coefficients."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: Group, coeffs: Mapping[Hashable, Any] | Iterable[tuple[Hashable, Any]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Hashable, ComplexRational] = {}
        for g, c in items:
            if not group.contains(g):
                raise MixedGroupError(f"{g} is not an element of {group}")
            acc[g] = acc.get(g, ZERO) + ComplexRational.of(c)
        self.group = group
        self.coeffs = {g: acc[g] for g in sorted(acc, key=group.key) if acc[g]}

    # constructors

    @classmethod
    def zero(cls, group: Group) -> GroupAlgebraElement:
        return cls(group)

    @classmethod
    def unit(cls, group: Group) -> GroupAlgebraElement:
        return cls(group, {group.identity: ONE})

    @classmethod
    def basis(cls, group: Group, g, coeff=1) -> GroupAlgebraElement:
        return cls(group, {g: coeff})

    # arithmetic

    def _same(self, other: GroupAlgebraElement) -> None:
        if other.group != self.group:
            raise MixedGroupError("operands live in different group algebras")

    def __add__(self, other: GroupAlgebraElement) -> GroupAlgebraElement:
        self._same(other)
        return GroupAlgebraElement(self.group, list(self.coeffs.items()) + list(other.coeffs.items()))

    def __neg__(self) -> GroupAlgebraElement:
        return GroupAlgebraElement(self.group, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other: GroupAlgebraElement) -> GroupAlgebraElement:
        return self + (-other)

    def scale(self, c) -> GroupAlgebraElement:
        c = ComplexRational.of(c)
        return GroupAlgebraElement(self.group, {g: c * a for g, a in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return self.scale(other)
        self._same(other)
        mul = self.group.mul
        terms = [
            (mul(g, h), a * b)
            for g, a in self.coeffs.items()
            for h, b in other.coeffs.items()
        ]
        return GroupAlgebraElement(self.group, terms)

    def __rmul__(self, c) -> GroupAlgebraElement:
        return self.scale(c)

    def adjoint(self) -> GroupAlgebraElement:
        inv = self.group.inv
        return GroupAlgebraElement(self.group, {inv(g): c.conjugate() for g, c in self.coeffs.items()})

    def is_self_adjoint(self) -> bool:
        return self == self.adjoint()

    def map_support(self, f: Callable, target: Group) -> GroupAlgebraElement:
        """Push the element forward along a map of supports into ``target``."""
        return GroupAlgebraElement(target, [(f(g), c) for g, c in self.coeffs.items()])

    # comparison and inspection

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.group == other.group and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, g) -> ComplexRational:
        return self.coeffs.get(g, ZERO)

    @property
    def support(self) -> list:
        return list(self.coeffs)

    def l1_bound(self) -> Fraction:
        """Rational upper bound for the sum of |coefficients| (bounds every C*-norm)."""
        return sum((c.abs_upper() for c in self.coeffs.values()), Fraction(0))

    def to_json(self) -> list:
        to = getattr(self.group, "element_to_json", lambda g: str(g))
        return [[to(g), c.to_json()] for g, c in self.coeffs.items()]

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c!r}*{g}" for g, c in self.coeffs.items())


def algebra_arithmetic(x: GroupAlgebraElement, y: GroupAlgebraElement) -> GroupAlgebraElement:
    return x * y


def beta(group: Group, g) -> GroupAlgebraElement:
    """1 - (g + g^-1)/2.  For g of order 2 this merges to e - g."""
    half = Fraction(-1, 2)
    return GroupAlgebraElement(group, [(group.identity, 1), (g, half), (group.inv(g), half)])


def real_part(group: Group, g) -> GroupAlgebraElement:
    """(g + g^-1)/2."""
    return GroupAlgebraElement(group, [(g, Fraction(1, 2)), (group.inv(g), Fraction(1, 2))])


def canonical_trace(x: GroupAlgebraElement) -> ComplexRational:
    return x[x.group.identity]


def conditional_expectation(x: GroupAlgebraElement, member: Callable[[Any], bool]) -> GroupAlgebraElement:
    """Keep only the part of ``x`` supported on the subgroup ``{g : member(g)}``."""
    return GroupAlgebraElement(x.group, {g: c for g, c in x.coeffs.items() if member(g)})


def random_element(
    group, rng: np.random.Generator, max_terms: int = 4, max_den: int = 4, complex_coeffs: bool = True
) -> GroupAlgebraElement:
    """Seeded random element with small support and small rational coefficients."""
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        g = group.random_element(rng)
        re = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, max_den + 1)))
        im = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, max_den + 1))) if complex_coeffs else 0
        terms.append((g, ComplexRational(re, im)))
    return GroupAlgebraElement(group, terms)


# -- M_k(C[N]) ---------------------------------------------------------------------


class MatrixOverGroupAlgebra:
    """Square matrix with group-algebra entries over one group."""

    __slots__ = ("group", "entries")

    def __init__(self, group: Group, entries: Sequence[Sequence[GroupAlgebraElement]]):
        rows = tuple(tuple(row) for row in entries)
        k = len(rows)
        if k == 0 or any(len(row) != k for row in rows):
            raise ValueError("matrix over a group algebra must be square and non-empty")
        for row in rows:
            for x in row:
                if x.group != group:
                    raise MixedGroupError("matrix entry from a different group algebra")
        self.group = group
        self.entries = rows

    @classmethod
    def diagonal(cls, group: Group, diag: Sequence[GroupAlgebraElement]) -> MatrixOverGroupAlgebra:
        k = len(diag)
        zero = GroupAlgebraElement.zero(group)
        return cls(group, [[diag[i] if i == j else zero for j in range(k)] for i in range(k)])

    @classmethod
    def identity(cls, group: Group, k: int) -> MatrixOverGroupAlgebra:
        return cls.diagonal(group, [GroupAlgebraElement.unit(group)] * k)

    @classmethod
    def scalar(cls, x: GroupAlgebraElement) -> MatrixOverGroupAlgebra:
        return cls(x.group, [[x]])

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> GroupAlgebraElement:
        i, j = ij
        return self.entries[i][j]

    def _same(self, other: MatrixOverGroupAlgebra) -> None:
        if other.group != self.group or other.size != self.size:
            raise MixedGroupError("matrix operands differ in group or size")

    def __add__(self, other: MatrixOverGroupAlgebra) -> MatrixOverGroupAlgebra:
        self._same(other)
        k = self.size
        return MatrixOverGroupAlgebra(self.group, [[self.entries[i][j] + other.entries[i][j] for j in range(k)] for i in range(k)])

    def __sub__(self, other: MatrixOverGroupAlgebra) -> MatrixOverGroupAlgebra:
        return self + other.scale(-1)

    def scale(self, c) -> MatrixOverGroupAlgebra:
        return MatrixOverGroupAlgebra(self.group, [[x.scale(c) for x in row] for row in self.entries])

    def __matmul__(self, other: MatrixOverGroupAlgebra) -> MatrixOverGroupAlgebra:
        self._same(other)
        k = self.size
        out = []
        for i in range(k):
            row = []
            for j in range(k):
                acc = GroupAlgebraElement.zero(self.group)
                for t in range(k):
                    acc = acc + self.entries[i][t] * other.entries[t][j]
                row.append(acc)
            out.append(row)
        return MatrixOverGroupAlgebra(self.group, out)

    __mul__ = __matmul__

    def adjoint(self) -> MatrixOverGroupAlgebra:
        k = self.size
        return MatrixOverGroupAlgebra(self.group, [[self.entries[j][i].adjoint() for j in range(k)] for i in range(k)])

    def is_self_adjoint(self) -> bool:
        return self == self.adjoint()

    def is_diagonal(self) -> bool:
        return all(not self.entries[i][j] for i in range(self.size) for j in range(self.size) if i != j)

    def diagonal_entries(self) -> list[GroupAlgebraElement]:
        return [self.entries[i][i] for i in range(self.size)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixOverGroupAlgebra):
            return NotImplemented
        return self.group == other.group and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def support(self) -> list:
        """All group elements appearing in some entry, in canonical order."""
        seen = {g for row in self.entries for x in row for g in x.coeffs}
        return sorted(seen, key=self.group.key)

    def norm_upper_bound(self) -> Fraction:
        """sqrt(max row sum * max column sum) of entrywise l1 bounds, rounded up to a rational.

        Bounds the norm of every fiber, hence the norm of the element.
        """
        k = self.size
        b = [[self.entries[i][j].l1_bound() for j in range(k)] for i in range(k)]
        rows = max(sum(row) for row in b)
        cols = max(sum(b[i][j] for i in range(k)) for j in range(k))
        return _sqrt_upper(rows * cols)

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.entries]

    def __repr__(self) -> str:
        return "[" + "; ".join(", ".join(repr(x) for x in row) for row in self.entries) + "]"


def _sqrt_upper(q: Fraction) -> Fraction:
    """Smallest-denominator-friendly rational >= sqrt(q); exact when q is a rational square."""
    from math import isqrt

    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    scale = 10**12
    return Fraction(isqrt(n * scale * scale // d) + 1, scale)


def matrix_trace(m: MatrixOverGroupAlgebra) -> ComplexRational:
    """Normalized trace tensored with the canonical trace: (1/k) sum_i tau(m_ii)."""
    total = ZERO
    for x in m.diagonal_entries():
        total = total + canonical_trace(x)
    return total / m.size
