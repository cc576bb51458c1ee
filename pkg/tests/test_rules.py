import pytest

from rrzero.groups import (
    AbelianAtom,
    DeclaredAtom,
    Extension,
    FGAbelianGroup,
    FiniteAtom,
    FiniteGroupTable,
    IncreasingUnion,
    Semidirect,
    SemidirectProductGroup,
)
from rrzero.obstruction import (
    LOCALLY_FINITE_AF,
    NO_OBSTRUCTION,
    NOT_RR0,
    STRONGLY_NOT_FS,
    AbelianizationWitness,
    AnalysisConfig,
    Fact,
    InconsistentTags,
    derive_all,
    derive_tags,
    lambda_max_locally_finite,
    reduction_narrative,
    replay,
    rr0_obstruction_analyze,
    strongly_not_fs_derive,
)


def Z(n, torsion=()):
    return AbelianAtom(FGAbelianGroup(n, tuple(torsion)))


def rationals():
    return IncreasingUnion([Z(1)] * 4, connecting=[[[2]], [[3]], [[4]]])


def lamplighter():
    lamps = IncreasingUnion([Z(0, (2,) * k) for k in (1, 2, 3)])
    return Extension(lamps, Z(1))


def unitriangular():
    stages = [DeclaredAtom(f"UT({n},Z)", hirsch=n * (n - 1) // 2) for n in (2, 3, 4)]
    return IncreasingUnion(stages, extrapolate="unbounded", stage_tags={"nilpotent": True, "torsion-free": True, "nontrivial": True})


def direct_sum_z2():
    return IncreasingUnion([Z(0, (2,) * k) for k in (1, 2, 3, 4)])


def rule_ids(verdict):
    return [s.rule_id for s in verdict.trace]


def test_rationals_via_abelian_rule():
    v = strongly_not_fs_derive(rationals())
    assert v.kind == STRONGLY_NOT_FS
    assert {"R1", "R3"} & set(rule_ids(v))


def test_lamplighter_via_periodic_by_torsion_free():
    v = strongly_not_fs_derive(lamplighter())
    assert v.kind == STRONGLY_NOT_FS and "R2" in rule_ids(v)


def test_unitriangular_union_via_nilpotent_and_union_rules():
    ids = rule_ids(strongly_not_fs_derive(unitriangular()))
    assert "R4" in ids and "R3" in ids
    assert ids.index("R3") > max(i for i, r in enumerate(ids) if r == "R4")


def test_direct_sum_is_locally_finite():
    assert strongly_not_fs_derive(direct_sum_z2()).kind == LOCALLY_FINITE_AF


@pytest.mark.parametrize("make", [rationals, lamplighter, unitriangular, direct_sum_z2])
def test_traces_replay_deterministically(make):
    a, b = derive_all(make()), derive_all(make())
    assert a.steps == b.steps
    for fact in (Fact("root", "strongly-not-FS", True), Fact("root", "locally-finite", True)):
        if a.holds(fact):
            trace = a.explain(fact)
            assert trace == b.explain(fact)
            assert replay(trace, make())


def test_replay_rejects_forged_steps():
    ts = derive_all(rationals())
    trace = ts.explain(Fact("root", "strongly-not-FS", True))
    assert not replay(trace[::-1], rationals())
    assert not replay(trace, direct_sum_z2())


def test_fixed_point_bound():
    d = unitriangular()
    ts = derive_all(d)
    assert len(ts.steps) <= 14 * len(ts.nodes)


def test_contradictory_declarations_raise():
    with pytest.raises(InconsistentTags):
        derive_tags(AbelianAtom(FGAbelianGroup(1), {"locally-finite": True}))


def test_unknown_stays_unknown():
    ts = derive_tags(DeclaredAtom("H"))
    assert ts.get("root", "amenable") is None
    assert strongly_not_fs_derive(DeclaredAtom("H")).kind == NO_OBSTRUCTION


def test_provenance_labels():
    ts = derive_tags(AbelianAtom(FGAbelianGroup(1), {"amenable": True}))
    j = ts.to_json()
    assert j["root"]["amenable"]["provenance"] == "declared"
    assert j["root"]["abelian"]["provenance"].startswith("derived:")


def test_dinf_numeric_certificate(dinf):
    v = rr0_obstruction_analyze(Semidirect(dinf))
    assert v.kind == NOT_RR0 and v.confidence == "numeric-certified"
    stage = v.omega["stages"][0]
    assert stage["exact"] == 2.0 and stage["agree"]
    assert stage["diagonal"] == [{"free": [1], "torsion": []}, {"free": [-1], "torsion": []}]


def test_dinf_tower_uses_every_stage(dinf):
    bigger = SemidirectProductGroup.from_generator_action(1, (2, 2), [[[-1]], [[1]]])
    v = rr0_obstruction_analyze(IncreasingUnion([Semidirect(dinf), Semidirect(bigger)]))
    assert v.kind == NOT_RR0 and [s["index"] for s in v.omega["stages"]] == [2, 4]


def test_locally_finite_short_circuits():
    v = rr0_obstruction_analyze(direct_sum_z2())
    assert v.kind == LOCALLY_FINITE_AF and v.omega is None


def test_abelianization_input_is_used():
    g = DeclaredAtom("poly-Z group", {"amenable": True, "locally-finite": False})
    witness = AbelianizationWitness(FGAbelianGroup(1), FGAbelianGroup(1).element((1,)))
    v = rr0_obstruction_analyze(g, AnalysisConfig(sampled_check=False), abelianization=witness)
    assert v.kind == NOT_RR0 and v.witness["source"] == "declared-abelianization"
    assert rr0_obstruction_analyze(g).kind == NO_OBSTRUCTION


def test_symbolic_normal_subgroup_rule():
    g = Extension(Z(3), DeclaredAtom("H", {"amenable": True, "nontrivial": True}))
    v = rr0_obstruction_analyze(g)
    assert v.kind in (NOT_RR0, STRONGLY_NOT_FS)
    assert any(s.rule_id.startswith("O-") for s in v.trace)


def test_lambda_and_narrative():
    lam = lambda_max_locally_finite(Z(2, (2, 4)))
    assert lam.subgroup.group == FGAbelianGroup(0, (2, 4)) and lam.quotient.group == FGAbelianGroup(2)
    text = reduction_narrative({"lambda": "Z/2", "linear": "2"})
    assert len(text) == 2 and "Z/2" in text[0]
    with pytest.raises(Exception):
        lambda_max_locally_finite(FiniteAtom(FiniteGroupTable.cyclic(2)))
