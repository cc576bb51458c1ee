# %% [markdown]
# Fiber norms on the circle
# =========================
#
# The group algebra of Z is a ring of trigonometric polynomials: a character
# of Z is a point theta of the circle, and z^n evaluates to exp(2 pi i n theta).
# Here we look at beta(z^n) = 1 - (z^n + z^-n)/2, whose fiber at theta is
# 1 - cos(2 pi n theta).

# %%
import numpy as np

from rrzero.algebra import MatrixOverGroupAlgebra, beta
from rrzero.groups import FGAbelianGroup
from rrzero.oscillation import DualDescription, FiberField, oscillation_exact_beta_diagonal, oscillation_sampled

Z = FGAbelianGroup(1)
dual = DualDescription(Z)

# %%
# fiber norms of beta(z^3) on a handful of points
b3 = beta(Z, Z.element((3,)))
field = FiberField(b3)
thetas = np.linspace(0, 1, 9)[:-1]
print(np.round(field.norms(thetas), 4))
print(np.round(1 - np.cos(2 * np.pi * 3 * thetas), 4))  # same thing by hand

# %% [markdown]
# The trivial character sends beta(z^n) to 0 and theta = 1/(2n) sends it to 2,
# so the spread of the fiber norm over the (connected) circle is 2.  The
# sampled estimator only ever sees a lower bound; the closed form knows the
# answer.

# %%
for lam in (1, 2, 5):
    m = MatrixOverGroupAlgebra.scalar(beta(Z, Z.element((lam,))))
    est = oscillation_sampled(m, dual, grid=256)
    exact = oscillation_exact_beta_diagonal(m, dual)
    print(lam, est.omega_lower, exact.omega_lower, exact.components[0].argmax)

# %%
# grids of odd size never hit theta = 1/6 exactly, so the raw grid underestimates;
# zooming around the best point recovers almost all of it
m = MatrixOverGroupAlgebra.scalar(beta(Z, Z.element((3,))))
for grid in (5, 7, 9):
    print(grid, oscillation_sampled(m, dual, grid=grid, refine=0).omega_lower, oscillation_sampled(m, dual, grid=grid, refine=3).omega_lower)

# %% [markdown]
# Torsion changes the picture: the dual of Z + Z/4 is four circles, and
# the oscillation is taken circle by circle.  An element of finite order
# gives a fiber norm that is constant on every circle.

# %%
G = FGAbelianGroup(1, (4,))
t = G.element((0,), (1,))
mt = MatrixOverGroupAlgebra.scalar(beta(G, t))
est = oscillation_sampled(mt)
print([(c.torsion, round(c.max_norm, 6), round(c.min_norm, 6)) for c in est.components])
print("omega", est.omega_lower)
