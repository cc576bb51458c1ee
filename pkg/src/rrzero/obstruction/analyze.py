"""Real-rank-zero obstruction verdicts with certificates."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any

from rrzero.algebra import MatrixOverGroupAlgebra, beta
from rrzero.embedding import build_lift_table, phi_embed
from rrzero.groups.abelian import AbelianElement, FGAbelianGroup, torsion_subgroup_and_free_quotient
from rrzero.groups.description import (
    AbelianAtom,
    Extension,
    GroupDescription,
    IncreasingUnion,
    Semidirect,
    UnsupportedDescription,
    describe,
)
from rrzero.groups.semidirect import SemidirectProductGroup, translation_center
from rrzero.obstruction.tags import (
    AB,
    AMEN,
    EA,
    FH,
    LF,
    SNFS,
    TF,
    TFFI,
    Fact,
    PropertyTagSet,
    Step,
    derive_all,
)
from rrzero.oscillation import (
    DEFAULT_COMPONENTS_CAP,
    DEFAULT_GRID,
    DEFAULT_REFINE,
    DualDescription,
    beta_diagonal_entries,
    oscillation_exact_beta_diagonal,
    oscillation_sampled,
)

NOT_RR0 = "NotRealRankZero"
STRONGLY_NOT_FS = "StronglyNotFS"
NO_OBSTRUCTION = "NoObstructionFound"
LOCALLY_FINITE_AF = "LocallyFinite-AF"


@dataclass
class AnalysisConfig:
    grid: int = DEFAULT_GRID
    refine: int = DEFAULT_REFINE
    components_cap: int = DEFAULT_COMPONENTS_CAP
    components: str = "auto"
    tol: float = 1e-6
    agreement_tol: float = 1e-3
    seed: int = 0
    sampled_check: bool = True

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class AbelianizationWitness:
    """A declared surjection from the normal subgroup onto ``target`` hitting ``image``."""

    target: FGAbelianGroup
    image: AbelianElement


@dataclass
class Verdict:
    kind: str
    confidence: str
    trace: list[Step]
    implications: list[str] = field(default_factory=list)
    witness: dict | None = None
    omega: dict | None = None
    narrative: list[str] = field(default_factory=list)
    tags: PropertyTagSet | None = field(default=None, repr=False)

    def certificate(self) -> dict:
        out: dict[str, Any] = {
            "verdict": self.kind,
            "confidence": self.confidence,
            "implications": self.implications,
            "rule_trace": [s.to_json() for s in self.trace],
            "witness": self.witness,
            "omega": self.omega,
        }
        if self.narrative:
            out["reduction_narrative"] = self.narrative
        return out


def _step(rule_id: str, anchor: str, premises, conclusion: str) -> Step:
    return Step(rule_id, anchor, tuple(str(p) for p in premises), conclusion)


def strongly_not_fs_derive(d: GroupDescription, tags: PropertyTagSet | None = None) -> Verdict:
    """Run the strongly-not-(FS) rules to a fixed point and read off the root."""
    ts = tags if tags is not None else derive_all(d)
    root_snfs = Fact("root", SNFS, True)
    if ts.holds(root_snfs):
        trace = ts.explain(root_snfs)
        trace.append(_step("SNFS-not-RR0", "strongly not (FS) rules out real rank zero", [root_snfs], "root:not-real-rank-zero"))
        return Verdict(STRONGLY_NOT_FS, "symbolic-exact", trace, [STRONGLY_NOT_FS, NOT_RR0], tags=ts)
    root_lf = Fact("root", LF, True)
    if ts.holds(root_lf):
        trace = ts.explain(root_lf)
        trace.append(_step("LF-AF", "locally finite groups have AF group C*-algebras", [root_lf], "root:AF"))
        return Verdict(LOCALLY_FINITE_AF, "symbolic-exact", trace, [LOCALLY_FINITE_AF], tags=ts)
    return Verdict(NO_OBSTRUCTION, "symbolic-exact", [], [], tags=ts)


# -- numeric certificate --------------------------------------------------------------


def _numeric_stages(d: GroupDescription) -> list[SemidirectProductGroup] | None:
    if isinstance(d, Semidirect):
        return [d.group]
    if isinstance(d, Extension) and d.realization is not None:
        return [d.realization]
    if isinstance(d, IncreasingUnion) and all(isinstance(s, Semidirect) for s in d.stages):
        return [s.group for s in d.stages]
    return None


def _choose_witness(stages: list[SemidirectProductGroup]) -> tuple[tuple[int, ...], str]:
    """Deterministic non-torsion witness in the normal lattice.

    Central translations first (their embedding is a scalar diagonal), then
    the first standard basis vector of the lattice, which is central in the
    abelian normal subgroup itself.
    """
    center = translation_center(stages[-1])
    if center.rank:
        return center.basis[0], "translation-center"
    r = stages[0].rank
    return tuple(int(i == 0) for i in range(r)), "normal-lattice"


def _omega_for(m: MatrixOverGroupAlgebra, config: AnalysisConfig) -> dict:
    dual = DualDescription(m.group)
    exact = oscillation_exact_beta_diagonal(m, dual)
    out = {"exact": exact.omega_lower, "size": m.size}
    if config.sampled_check:
        est = oscillation_sampled(
            m, dual, config.grid, config.refine, config.components_cap, config.components, config.seed
        )
        out["sampled"] = [est.omega_lower, est.omega_upper]
        # sampled values bracket the oscillation; only the closed form is a certificate
        out["sampled_flags"] = sorted({"bracket", *est.flags})
        out["agree"] = abs(est.omega_lower - exact.omega_lower) <= config.agreement_tol
    return out


def _numeric_certificate(d: GroupDescription, ts: PropertyTagSet, config: AnalysisConfig):
    """Oscillation of Phi_n(beta(a)) over every declared finite stage, or None if not applicable."""
    if isinstance(d, AbelianAtom):
        g = d.group
        if g.free_rank == 0:
            return None
        a = g.element(tuple(int(i == 0) for i in range(g.free_rank)))
        m = MatrixOverGroupAlgebra.diagonal(g, [beta(g, a)])
        om = _omega_for(m, config)
        steps = [
            _step("N-witness", "non-torsion element of a countable abelian group", [], f"witness a={a}"),
            _step("N-exact", "beta-diagonal oscillation over the dual: 2 iff some entry has infinite order", [f"witness a={a}"], f"omega(beta(a))={om['exact']}"),
        ]
        return steps, {"element": g.element_to_json(a), "group": str(g), "source": "free-generator"}, [om]

    stages = _numeric_stages(d)
    if not stages or stages[0].rank == 0:
        return None
    v, source = _choose_witness(stages)
    N = stages[0].base
    a_n = N.element(v)
    steps = [
        _step(
            "N-witness",
            "non-torsion element of the center of the normal subgroup L (here L = Z^r)",
            [],
            f"witness a={a_n} ({source})",
        )
    ]
    per_stage = []
    for i, G in enumerate(stages):
        lt = build_lift_table(G)
        m = phi_embed(beta(G, G.element(v, 0)), lt)
        ds = beta_diagonal_entries(m)
        if ds is None:
            raise AssertionError("embedding of beta(a) for a in the normal subgroup must be beta-diagonal")
        om = _omega_for(m, config)
        om["stage"] = i
        om["index"] = lt.index
        a_g = G.element(v, 0)
        conj = [G.to_base(G.conjugate(g, a_g)) for g in lt.lifts]
        if m != MatrixOverGroupAlgebra.diagonal(N, [beta(N, c) for c in conj]):
            raise AssertionError("Phi(beta(a)) differs from diag(beta(g_h a g_h^-1))")
        om["diagonal"] = [N.element_to_json(x) for x in conj]
        per_stage.append(om)
        steps.append(
            _step(
                "N-embed",
                "Phi(a) = diag(g_h a g_h^-1) for a in the normal subgroup",
                [f"witness a={a_n}"],
                f"stage {i}: Phi(beta(a)) = diag(beta(d_h)), {lt.index} cosets",
            )
        )
        steps.append(
            _step(
                "N-exact",
                "beta-diagonal oscillation over the dual: 2 iff some entry has infinite order",
                [f"stage {i}: Phi(beta(a)) = diag(beta(d_h)), {lt.index} cosets"],
                f"stage {i}: omega={om['exact']}",
            )
        )
    return steps, {"element": N.element_to_json(a_n), "group": str(N), "source": source}, per_stage


def _abelianization_certificate(d, ts: PropertyTagSet, wit: AbelianizationWitness, config: AnalysisConfig):
    target, b = wit.target, wit.image
    if not target.contains(b) or b.is_torsion():
        raise UnsupportedDescription("abelianization witness must be a non-torsion element of the target group")
    m = MatrixOverGroupAlgebra.diagonal(target, [beta(target, b)])
    om = _omega_for(m, config)
    premises = [Fact("root", AMEN, True)]
    if isinstance(d, Extension):
        premises.append(Fact("root.quotient", LF, True))
    if not all(ts.holds(p) for p in premises):
        return None
    steps = [
        _step(
            "N-abelianization",
            "declared surjection of L onto a non-locally-finite abelian group; image entries beyond the first do not matter",
            premises,
            f"witness b={b} in {target}",
        ),
        _step(
            "N-exact",
            "beta-diagonal oscillation over the dual: 2 iff some entry has infinite order",
            [f"witness b={b} in {target}"],
            f"omega(beta(b))={om['exact']}",
        ),
    ]
    return steps, {"element": target.element_to_json(b), "group": str(target), "source": "declared-abelianization"}, [om]


# -- symbolic obstruction rules ----------------------------------------------------------


def _symbolic_obstructions(d: GroupDescription, ts: PropertyTagSet) -> list[Step]:
    fired = []

    def fire(rule_id, anchor, premises):
        if all(ts.holds(p) for p in premises):
            fired.append(_step(rule_id, anchor, premises, "root:not-real-rank-zero"))

    fire(
        "O-torsion-free-finite-index",
        "infinite amenable group with a torsion-free finite-index subgroup: traces of projections are bounded below",
        [Fact("root", TFFI, True), Fact("root", AMEN, True), Fact("root", LF, False)],
    )
    if isinstance(d, Extension):
        n = "root.normal"
        if isinstance(d.normal, AbelianAtom) and d.normal.group.free_rank > 0 and not d.normal.group.torsion:
            fire("O-normal-Zn", "amenable group with a normal subgroup Z^n", [Fact(n, AB, True), Fact(n, TF, True), Fact("root", AMEN, True)])
        fire(
            "O-linear-aut",
            "abelian, not locally finite normal subgroup with linear automorphism group (torsion-free of finite Hirsch length) in an amenable group",
            [Fact(n, AB, True), Fact(n, LF, False), Fact(n, TF, True), Fact(n, FH, True), Fact("root", AMEN, True)],
        )
        fire(
            "O-finite-hirsch-normal",
            "amenable group with an elementary amenable normal subgroup of finite Hirsch length that is not locally finite",
            [Fact(n, EA, True), Fact(n, FH, True), Fact(n, LF, False), Fact("root", AMEN, True)],
        )
    if isinstance(d, Semidirect) and d.group.rank > 0:
        fire("O-normal-Zn", "amenable group with a normal subgroup Z^n", [Fact("root", AMEN, True)])
    return fired


REDUCTION_STEPS = (
    ("lambda", "pass to H / Lambda(H): quotient by the maximal normal locally finite subgroup {}"),
    ("solvable_finite_index", "pass to the characteristic solvable finite-index subgroup {}"),
    ("last_derived", "pass to the last nontrivial term {} of the derived series: abelian, characteristic, torsion-free"),
    ("linear", "torsion-free abelian of finite Hirsch length {} has linear automorphism group; apply the extension rule"),
)


def reduction_narrative(declared: dict[str, str]) -> list[str]:
    """Narrative of the normal-subgroup reduction chain for the declared subgroups."""
    return [text.format(declared[key]) for key, text in REDUCTION_STEPS if key in declared]


# -- main entry point --------------------------------------------------------------------


def rr0_obstruction_analyze(
    d: GroupDescription,
    config: AnalysisConfig | None = None,
    abelianization: AbelianizationWitness | None = None,
    reduction: dict[str, str] | None = None,
) -> Verdict:
    """Decide what can be certified about real rank zero of C*(G).

    NoObstructionFound means only that no implemented rule applies; it is
    never a claim that the algebra has real rank zero.
    """
    config = config or AnalysisConfig()
    ts = derive_all(d)
    symbolic = strongly_not_fs_derive(d, ts)
    narrative = reduction_narrative(reduction or {})

    if symbolic.kind == LOCALLY_FINITE_AF:
        symbolic.narrative = narrative
        return symbolic

    numeric = _numeric_certificate(d, ts, config)
    if numeric is None and abelianization is not None:
        numeric = _abelianization_certificate(d, ts, abelianization, config)

    omega = witness = None
    numeric_trace: list[Step] = []
    numeric_ok = False
    if numeric is not None:
        steps, witness, per_stage = numeric
        omega = {
            "exact": min(s["exact"] for s in per_stage),
            "sampled": per_stage[-1].get("sampled"),
            "stages": per_stage,
            "grid": config.grid,
            "refine": config.refine,
        }
        numeric_ok = all(s["exact"] == 2.0 for s in per_stage)
        numeric_trace = steps
        if numeric_ok:
            numeric_trace.append(
                _step(
                    "N-limit",
                    "real rank zero of the limit would force the oscillation of the stage images below any eps",
                    [steps[-1].conclusion],
                    "root:not-real-rank-zero",
                )
            )
    sym_steps = _symbolic_obstructions(d, ts)

    if symbolic.kind == STRONGLY_NOT_FS:
        symbolic.trace = symbolic.trace + (numeric_trace if numeric_ok else []) + sym_steps
        symbolic.witness, symbolic.omega, symbolic.narrative = witness, omega, narrative
        return symbolic
    if numeric_ok:
        agree = all(s.get("agree", True) for s in omega["stages"])
        return Verdict(
            NOT_RR0,
            "numeric-certified" if agree else "numeric-sampled",
            numeric_trace + sym_steps,
            [NOT_RR0],
            witness,
            omega,
            narrative,
            ts,
        )
    if sym_steps:
        support: list[Step] = []
        for s in sym_steps:
            for p in s.premises:
                node, rest = p.split(":", 1)
                flag, value = rest.rsplit("=", 1)
                for st in ts.explain(Fact(node, flag, value == "true")):
                    if st not in support:
                        support.append(st)
        return Verdict(NOT_RR0, "symbolic-exact", support + sym_steps, [NOT_RR0], witness, omega, narrative, ts)
    return Verdict(NO_OBSTRUCTION, "symbolic-exact", [], [], witness, omega, narrative, ts)


# -- maximal normal locally finite subgroup ------------------------------------------------


@dataclass
class MaxLocallyFiniteNormal:
    subgroup: AbelianAtom
    quotient: AbelianAtom

    def to_json(self) -> dict:
        return {"lambda": describe(self.subgroup), "quotient": describe(self.quotient)}


def lambda_max_locally_finite(d: GroupDescription) -> MaxLocallyFiniteNormal:
    """Lambda(G) for an abelian atom: its torsion subgroup, with free quotient."""
    if not isinstance(d, AbelianAtom):
        raise UnsupportedDescription("the maximal normal locally finite subgroup is only computed for abelian atoms")
    t, q = torsion_subgroup_and_free_quotient(d.group)
    return MaxLocallyFiniteNormal(AbelianAtom(t), AbelianAtom(q))
