# %% [markdown]
# Deriving properties from a construction tree
# ============================================
#
# Groups enter as trees of atoms and combinators.  Tags such as
# "locally-finite" or "strongly-not-FS" are three-valued and every derived
# value remembers the rule that produced it.

# %%
from rrzero.groups import AbelianAtom, DeclaredAtom, Extension, FGAbelianGroup, IncreasingUnion, hirsch_length
from rrzero.obstruction import Fact, derive_all, strongly_not_fs_derive

Z1 = AbelianAtom(FGAbelianGroup(1))
Q = IncreasingUnion([Z1] * 4, connecting=[[[2]], [[3]], [[4]]])
lamps = IncreasingUnion([AbelianAtom(FGAbelianGroup(0, (2,) * k)) for k in (1, 2, 3)])
lamplighter = Extension(lamps, Z1)
UT = IncreasingUnion(
    [DeclaredAtom(f"UT({n},Z)", hirsch=n * (n - 1) // 2) for n in (2, 3, 4)],
    extrapolate="unbounded",
    stage_tags={"nilpotent": True, "torsion-free": True, "nontrivial": True},
)

# %%
for name, d in (("Q", Q), ("lamplighter", lamplighter), ("UT(inf,Z)", UT), ("sum of Z/2", lamps)):
    v = strongly_not_fs_derive(d)
    print(f"{name:<12} h={hirsch_length(d)!s:<4} {v.kind:<18} {[s.rule_id for s in v.trace if s.rule_id.startswith('R')]}")

# %%
# the full explanation of one fact, in derivation order
ts = derive_all(lamplighter)
for step in ts.explain(Fact("root", "strongly-not-FS", True)):
    print(f"{step.rule_id:<34} {', '.join(step.premises) or '-':<70} => {step.conclusion}")

# %%
# unknown stays unknown: nothing is assumed about a bare declared group
print(derive_all(DeclaredAtom("H")).node_tags("root"))
