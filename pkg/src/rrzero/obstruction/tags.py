"""Three-valued property tags on description nodes, derived to a fixed point with provenance.

Every fact is ``(node path, flag) -> bool``.  A fact enters the tag set
through exactly one :class:`Step`, which records the rule that produced it
and the facts it relied on; :meth:`PropertyTagSet.explain` recovers the
derivation of any fact from those steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from rrzero.groups.description import (
    INF,
    AbelianAtom,
    DescriptionError,
    Extension,
    FiniteAtom,
    GroupDescription,
    IncreasingUnion,
    Semidirect,
    UnsupportedDescription,
    hirsch_length,
    walk,
)

LF = "locally-finite"
PER = "periodic"
TF = "torsion-free"
AB = "abelian"
NIL = "nilpotent"
LNIL = "locally-nilpotent"
SOL = "solvable"
VSOL = "virtually-solvable"
EA = "elementary-amenable"
AMEN = "amenable"
FH = "finite-hirsch"
NONTRIV = "nontrivial"
SNFS = "strongly-not-FS"
TFFI = "torsion-free-finite-index-subgroup"

SUBGROUP_CLOSED = (LF, PER, TF, AB, NIL, LNIL, SOL, EA, AMEN)
QUOTIENT_CLOSED = (LF, PER, AB, NIL, LNIL, SOL, EA, AMEN)
EXTENSION_CLOSED = (LF, PER, TF, SOL, EA, AMEN)
UNION_CLOSED = (LF, PER, TF, AB, LNIL, EA, AMEN)


class InconsistentTags(ValueError):
    def __init__(self, fact: Fact, existing: str, incoming: str):
        self.fact, self.existing, self.incoming = fact, existing, incoming
        super().__init__(
            f"inconsistent tags at {fact.node}: {fact.flag} is {not fact.value} ({existing}) "
            f"but {fact.value} ({incoming})"
        )


@dataclass(frozen=True)
class Fact:
    node: str
    flag: str
    value: bool

    def __str__(self) -> str:
        return f"{self.node}:{self.flag}={'true' if self.value else 'false'}"


@dataclass(frozen=True)
class Step:
    rule_id: str
    anchor: str
    premises: tuple[str, ...]
    conclusion: str

    def to_json(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "paper_anchor": self.anchor,
            "premises": list(self.premises),
            "conclusion": self.conclusion,
        }


@dataclass(frozen=True)
class Rule:
    rule_id: str
    anchor: str
    premises: tuple[Fact, ...]
    conclusion: Fact


ANCHORS = {
    "declared": "declared in the description",
    "declared-stage": "declared for every stage of the union",
    "S-atom": "read off the atom's concrete data",
    "S-hirsch": "Hirsch length: h(Z)=1, h(finite)=0, additive on extensions, sup on unions",
    "C-lf-periodic": "locally finite groups are periodic",
    "C-nil-sol": "nilpotent groups are solvable",
    "C-sol-vsol": "solvable groups are virtually solvable",
    "C-vsol-ea": "virtually solvable groups are elementary amenable",
    "C-ea-amen": "elementary amenable groups are amenable",
    "C-ab-nil": "abelian groups are nilpotent",
    "C-nil-lnil": "nilpotent groups are locally nilpotent",
    "C-periodic-ea-lf": "an elementary amenable, periodic group is locally finite",
    "C-tf-nontrivial": "a nontrivial torsion-free group has elements of infinite order",
    "C-lf-fh": "locally finite groups have Hirsch length 0",
    "C-snfs-not-periodic": "strongly not (FS) groups are not periodic by definition",
    "C-trivial-lf": "the trivial group is finite",
    "E-ext": "closed under extensions",
    "E-sub": "closed under subgroups",
    "E-quot": "closed under quotients",
    "E-nontrivial": "an extension with a nontrivial piece is nontrivial",
    "U-all": "union of a nested family with the property at every stage",
    "U-sub": "stages are subgroups of the union",
    "U-nil-lnil": "an increasing union of nilpotent groups is locally nilpotent",
    "R1": "countable abelian and not locally finite implies strongly not (FS): beta-oscillation is 2 and oscillation is 2-Lipschitz",
    "R2": "periodic-by-(nontrivial torsion-free amenable) is strongly not (FS): the quotient algebra has no nontrivial projections",
    "R3": "strongly not (FS) passes to increasing unions",
    "R4": "nilpotent groups are periodic-by-torsion-free, then the periodic-by-torsion-free rule applies",
    "R5": "locally nilpotent and not locally finite implies strongly not (FS)",
}


def _rule(rid: str, premises: Iterable[Fact], conclusion: Fact) -> Rule:
    return Rule(rid, ANCHORS[rid.split(":")[0]], tuple(premises), conclusion)


class PropertyTagSet:
    def __init__(self, description: GroupDescription):
        self.description = description
        self.nodes: dict[str, GroupDescription] = dict(walk(description))
        self.values: dict[tuple[str, str], bool] = {}
        self.provenance: dict[tuple[str, str], str] = {}
        self.steps: list[Step] = []
        self._origin: dict[Fact, Step] = {}

    def get(self, node: str, flag: str) -> bool | None:
        return self.values.get((node, flag))

    def holds(self, fact: Fact) -> bool:
        return self.values.get((fact.node, fact.flag)) == fact.value

    def add(self, rule: Rule) -> bool:
        """Record ``rule``'s conclusion; False if already known."""
        f = rule.conclusion
        key = (f.node, f.flag)
        prov = "declared" if rule.rule_id.startswith("declared") else f"derived:{rule.rule_id}"
        if key in self.values:
            if self.values[key] != f.value:
                raise InconsistentTags(f, self.provenance[key], prov)
            return False
        self.values[key] = f.value
        self.provenance[key] = prov
        step = Step(rule.rule_id, rule.anchor, tuple(str(p) for p in rule.premises), str(f))
        self.steps.append(step)
        self._origin[f] = step
        return True

    def step_for(self, fact: Fact) -> Step | None:
        return self._origin.get(fact)

    def explain(self, fact: Fact) -> list[Step]:
        """The steps that ``fact`` depends on, in derivation order."""
        by_conclusion = {s.conclusion: s for s in self.steps}
        needed: set[str] = set()
        stack = [str(fact)]
        while stack:
            c = stack.pop()
            if c in needed or c not in by_conclusion:
                continue
            needed.add(c)
            stack.extend(by_conclusion[c].premises)
        return [s for s in self.steps if s.conclusion in needed]

    def node_tags(self, node: str = "root") -> dict[str, bool]:
        return {flag: v for (n, flag), v in sorted(self.values.items()) if n == node}

    def to_json(self) -> dict:
        out: dict[str, dict] = {}
        for (n, flag), v in sorted(self.values.items()):
            out.setdefault(n, {})[flag] = {"value": v, "provenance": self.provenance[(n, flag)]}
        return out


# -- rule generators ---------------------------------------------------------------

T, F = True, False


def _closure_rules(path: str) -> Iterator[Rule]:
    def fx(flag, value):
        return Fact(path, flag, value)

    chains = [
        ("C-lf-periodic", LF, PER),
        ("C-nil-sol", NIL, SOL),
        ("C-sol-vsol", SOL, VSOL),
        ("C-vsol-ea", VSOL, EA),
        ("C-ea-amen", EA, AMEN),
        ("C-ab-nil", AB, NIL),
        ("C-nil-lnil", NIL, LNIL),
        ("C-lf-fh", LF, FH),
    ]
    for rid, a, b in chains:
        yield _rule(rid, [fx(a, T)], fx(b, T))
        yield _rule(rid + ":contrapositive", [fx(b, F)], fx(a, F))
    yield _rule("C-periodic-ea-lf", [fx(PER, T), fx(EA, T)], fx(LF, T))
    yield _rule("C-periodic-ea-lf:contrapositive", [fx(LF, F), fx(EA, T)], fx(PER, F))
    yield _rule("C-tf-nontrivial", [fx(TF, T), fx(NONTRIV, T)], fx(PER, F))
    yield _rule("C-snfs-not-periodic", [fx(SNFS, T)], fx(PER, F))
    yield _rule("C-snfs-not-periodic:contrapositive", [fx(PER, T)], fx(SNFS, F))
    yield _rule("C-trivial-lf", [fx(NONTRIV, F)], fx(LF, T))


def _structural_facts(path: str, node: GroupDescription) -> Iterator[Rule]:
    def s(flag, value):
        return _rule("S-atom", [], Fact(path, flag, bool(value)))

    if isinstance(node, AbelianAtom):
        g = node.group
        yield from (s(AB, T), s(NONTRIV, not g.is_trivial), s(LF, g.free_rank == 0))
        yield from (s(TF, not g.torsion), s(EA, T))
    elif isinstance(node, FiniteAtom):
        t = node.table
        yield from (s(LF, T), s(AB, t.is_abelian), s(NONTRIV, t.order > 1), s(TF, t.order == 1))
    elif isinstance(node, Semidirect):
        g = node.group
        yield from (s(NONTRIV, g.rank > 0 or g.acting.order > 1), s(LF, g.rank == 0), s(AB, g.is_abelian))
        yield from (s(VSOL, T), s(EA, T))
        if g.rank > 0:
            yield from (s(TF, g.acting.order == 1), s(TFFI, T))
    try:
        h = hirsch_length(node)
    except (UnsupportedDescription, DescriptionError):
        return
    yield _rule("S-hirsch", [], Fact(path, FH, h != INF))
    if h != 0:
        yield _rule("S-hirsch", [], Fact(path, LF, False))


def _combinator_rules(path: str, node: GroupDescription) -> Iterator[Rule]:
    if isinstance(node, Extension):
        n, q = f"{path}.normal", f"{path}.quotient"
        for flag in EXTENSION_CLOSED:
            yield _rule(f"E-ext:{flag}", [Fact(n, flag, T), Fact(q, flag, T)], Fact(path, flag, T))
        yield _rule(f"E-ext:{FH}", [Fact(n, FH, T), Fact(q, FH, T)], Fact(path, FH, T))
        for flag in SUBGROUP_CLOSED:
            yield _rule(f"E-sub:{flag}", [Fact(n, flag, F)], Fact(path, flag, F))
        for flag in QUOTIENT_CLOSED:
            yield _rule(f"E-quot:{flag}", [Fact(q, flag, F)], Fact(path, flag, F))
        yield _rule(f"E-sub:{FH}", [Fact(n, FH, F)], Fact(path, FH, F))
        yield _rule(f"E-quot:{FH}", [Fact(q, FH, F)], Fact(path, FH, F))
        yield _rule("E-nontrivial", [Fact(n, NONTRIV, T)], Fact(path, NONTRIV, T))
        yield _rule("E-nontrivial", [Fact(q, NONTRIV, T)], Fact(path, NONTRIV, T))
    elif isinstance(node, IncreasingUnion):
        stages = [f"{path}.stages[{i}]" for i in range(len(node.stages))]
        for flag in UNION_CLOSED:
            yield _rule(f"U-all:{flag}", [Fact(s, flag, T) for s in stages], Fact(path, flag, T))
        yield _rule("U-nil-lnil", [Fact(s, NIL, T) for s in stages], Fact(path, LNIL, T))
        for s in stages:
            for flag in SUBGROUP_CLOSED:
                yield _rule(f"U-sub:{flag}", [Fact(s, flag, F)], Fact(path, flag, F))
            yield _rule(f"U-sub:{NONTRIV}", [Fact(s, NONTRIV, T)], Fact(path, NONTRIV, T))


def _snfs_rules(path: str, node: GroupDescription) -> Iterator[Rule]:
    yield _rule("R1", [Fact(path, AB, T), Fact(path, LF, F)], Fact(path, SNFS, T))
    if isinstance(node, Extension):
        n, q = f"{path}.normal", f"{path}.quotient"
        yield _rule(
            "R2",
            [Fact(n, PER, T), Fact(q, TF, T), Fact(q, AMEN, T), Fact(q, NONTRIV, T)],
            Fact(path, SNFS, T),
        )
    if isinstance(node, IncreasingUnion):
        stages = [f"{path}.stages[{i}]" for i in range(len(node.stages))]
        yield _rule("R3", [Fact(s, SNFS, T) for s in stages], Fact(path, SNFS, T))
    yield _rule("R4", [Fact(path, NIL, T), Fact(path, PER, F)], Fact(path, SNFS, T))
    yield _rule("R5", [Fact(path, LNIL, T), Fact(path, LF, F)], Fact(path, SNFS, T))


RuleSource = Callable[[str, GroupDescription], Iterator[Rule]]


def _run(description: GroupDescription, extra: tuple[RuleSource, ...] = ()) -> PropertyTagSet:
    ts = PropertyTagSet(description)
    nodes = list(walk(description))
    for path, node in nodes:
        for flag, value in node.tags.items():
            ts.add(_rule("declared", [], Fact(path, flag, value)))
        if isinstance(node, IncreasingUnion):
            for i in range(len(node.stages)):
                for flag, value in node.stage_tags.items():
                    ts.add(_rule("declared-stage", [], Fact(f"{path}.stages[{i}]", flag, value)))
    for path, node in nodes:
        for r in _structural_facts(path, node):
            ts.add(r)
    rules: list[Rule] = []
    for path, node in nodes:
        rules.extend(_closure_rules(path))
        rules.extend(_combinator_rules(path, node))
        for src in extra:
            rules.extend(src(path, node))
    # bounded by the number of (node, flag) facts
    changed = True
    while changed:
        changed = False
        for r in rules:
            if all(ts.holds(p) for p in r.premises):
                if ts.get(r.conclusion.node, r.conclusion.flag) is None:
                    changed |= ts.add(r)
                elif not ts.holds(r.conclusion):
                    ts.add(r)  # raises InconsistentTags
    return ts


def derive_tags(description: GroupDescription) -> PropertyTagSet:
    """Close declared and structural tags under the implication and combinator rules."""
    return _run(description)


def derive_all(description: GroupDescription) -> PropertyTagSet:
    """As :func:`derive_tags`, plus the strongly-not-(FS) rules R1-R5."""
    return _run(description, (_snfs_rules,))


def replay(steps: Iterable[Step], description: GroupDescription) -> bool:
    """Check a trace against a fresh derivation.

    Every step must occur in the fresh derivation, and every premise must be
    the conclusion of an earlier step of the trace.
    """
    fresh = {s for s in derive_all(description).steps}
    seen: set[str] = set()
    for s in steps:
        if s not in fresh:
            return False
        if any(p not in seen for p in s.premises):
            return False
        seen.add(s.conclusion)
    return True
