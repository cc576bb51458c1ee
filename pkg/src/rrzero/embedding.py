"""The matrix embedding C[G] -> M_n(C[N]) for an extension of N by a finite group H.

Rows and columns are indexed by H in its table enumeration, identity
first, and entry (h', h) of Phi(x) is E(g_h' x g_h^-1) where g_h are coset
lifts and E restricts to N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rrzero.algebra import (
    GroupAlgebraElement,
    MatrixOverGroupAlgebra,
    canonical_trace,
    conditional_expectation,
    matrix_trace,
    random_element,
)
from rrzero.groups.abelian import FGAbelianGroup
from rrzero.groups.description import Extension, GroupDescription, Semidirect, UnsupportedDescription
from rrzero.groups.semidirect import SemidirectElement, SemidirectProductGroup


@dataclass(frozen=True)
class LiftTable:
    group: SemidirectProductGroup
    lifts: tuple[SemidirectElement, ...]

    def __post_init__(self) -> None:
        g = self.group
        if len(self.lifts) != g.acting.order:
            raise ValueError("need exactly one lift per element of the quotient")
        if self.lifts[0] != g.identity:
            raise ValueError("the first lift must be the identity")
        for h, lift in enumerate(self.lifts):
            if lift.h != h:
                raise ValueError(f"lift {lift} does not map to h{h}")

    @property
    def index(self) -> int:
        return len(self.lifts)

    @property
    def normal(self) -> FGAbelianGroup:
        return self.group.base


def build_lift_table(ext: SemidirectProductGroup | Semidirect | Extension | GroupDescription) -> LiftTable:
    """Canonical section h -> (0, h) of a split extension."""
    if isinstance(ext, Semidirect):
        ext = ext.group
    elif isinstance(ext, Extension):
        if ext.realization is None:
            raise UnsupportedDescription("no canonical section: extension has no semidirect realization")
        ext = ext.realization
    if not isinstance(ext, SemidirectProductGroup):
        raise UnsupportedDescription("no canonical section for this description")
    return LiftTable(ext, tuple(ext.element((), h) for h in range(ext.acting.order)))


def phi_embed(x: GroupAlgebraElement, lt: LiftTable) -> MatrixOverGroupAlgebra:
    G = lt.group
    if x.group != G:
        raise ValueError("element does not live in the extension's group algebra")
    n = lt.index
    lifts = [GroupAlgebraElement.basis(G, g) for g in lt.lifts]
    lift_invs = [GroupAlgebraElement.basis(G, G.inv(g)) for g in lt.lifts]
    N = lt.normal
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            y = conditional_expectation(lifts[i] * x * lift_invs[j], G.in_base)
            row.append(y.map_support(G.to_base, N))
        rows.append(row)
    return MatrixOverGroupAlgebra(N, rows)


@dataclass
class AuditReport:
    name: str
    trials: int
    failures: list[dict]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"audit": self.name, "trials": self.trials, "failures": self.failures, "passed": self.passed}


def verify_homomorphism(lt: LiftTable, trials: int = 100, seed: int = 0) -> AuditReport:
    """Check Phi(xy) = Phi(x)Phi(y), Phi(x*) = Phi(x)* and Phi(1) = 1 exactly on seeded random elements."""
    G = lt.group
    rng = np.random.default_rng(seed)
    failures = []
    one = GroupAlgebraElement.unit(G)
    if phi_embed(one, lt) != MatrixOverGroupAlgebra.identity(lt.normal, lt.index):
        failures.append({"check": "unital"})
    for t in range(trials):
        x = random_element(G, rng)
        y = random_element(G, rng)
        px, py = phi_embed(x, lt), phi_embed(y, lt)
        if phi_embed(x * y, lt) != px @ py:
            failures.append({"trial": t, "check": "multiplicative", "x": x.to_json(), "y": y.to_json()})
        if phi_embed(x.adjoint(), lt) != px.adjoint():
            failures.append({"trial": t, "check": "adjoint", "x": x.to_json()})
    return AuditReport("homomorphism", trials, failures)


def verify_trace_identity(lt: LiftTable, trials: int = 100, seed: int = 0) -> AuditReport:
    """Check (tr_n x tau_N)(Phi(x)) = tau_G(x) exactly on seeded random elements."""
    G = lt.group
    rng = np.random.default_rng(seed)
    failures = []
    for t in range(trials):
        x = random_element(G, rng)
        lhs, rhs = matrix_trace(phi_embed(x, lt)), canonical_trace(x)
        if lhs != rhs:
            failures.append({"trial": t, "x": x.to_json(), "lhs": lhs.to_json(), "rhs": rhs.to_json()})
    return AuditReport("trace-identity", trials, failures)
