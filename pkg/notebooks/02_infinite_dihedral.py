# %% [markdown]
# The infinite dihedral group as 2x2 matrices over C[Z]
# ====================================================
#
# D_inf = Z x| Z/2 with the reflection acting by -1.  Choosing the lifts
# (0, 0) and (0, 1) of the two cosets turns every element of C[D_inf] into a
# 2x2 matrix over C[Z].

# %%
from rrzero.algebra import GroupAlgebraElement, beta
from rrzero.embedding import build_lift_table, phi_embed, verify_homomorphism, verify_trace_identity
from rrzero.groups import Semidirect, SemidirectProductGroup
from rrzero.obstruction import rr0_obstruction_analyze

D = SemidirectProductGroup.from_generator_action(1, (2,), [[[-1]]])
lt = build_lift_table(D)

a = D.element((1,), 0)
s = D.element((0,), 1)
print(phi_embed(GroupAlgebraElement.basis(D, a), lt))
print(phi_embed(GroupAlgebraElement.basis(D, s), lt))

# %%
# beta(a) lands on the diagonal, with a and its conjugate a^-1
print(phi_embed(beta(D, a), lt))

# %%
# the map is an exact *-homomorphism and carries the trace to the normalized matrix trace
print(verify_homomorphism(lt, trials=50, seed=1).to_json()["passed"])
print(verify_trace_identity(lt, trials=50, seed=1).to_json()["passed"])

# %% [markdown]
# Feeding the group to the analyzer gives a certificate: the witness, the
# embedded diagonal, the exact oscillation and a sampled cross-check.

# %%
v = rr0_obstruction_analyze(Semidirect(D))
print(v.kind, v.confidence)
for step in v.trace:
    print(f"  {step.rule_id:<30} {step.conclusion}")
print(v.omega["stages"][0])
