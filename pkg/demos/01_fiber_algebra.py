"""Pointwise algebra of 2-forms on R^4."""

# %%
import numpy as np

from ac4x.fiber import (
    ASD_BASIS,
    BETA,
    JBETA,
    OMEGA,
    SD_BASIS,
    split_g,
    split_j,
    star,
    to_matrix,
    wedge,
)

# Components are ordered (e12, e13, e14, e23, e24, e34). The standard
# fundamental form and the two other self-dual forms all have |.|^2 = 2.
print("omega  ", OMEGA)
print("beta   ", BETA)
print("J beta ", JBETA)
print("norms  ", [float(v @ v) for v in (OMEGA, BETA, JBETA)])

# %%
# The Hodge star swaps e12 and e34; self-dual forms are fixed by it.
print(np.allclose(star(SD_BASIS.T).T, SD_BASIS), np.allclose(star(ASD_BASIS.T).T, -ASD_BASIS))

# %%
# A unit self-dual form determines an almost complex structure J. J squares to -1.
J = -to_matrix(OMEGA)
print(J)
print("J^2 = -1:", np.allclose(J @ J, -np.eye(4)))

# %%
# Any 2-form splits into self-dual and anti-self-dual parts, and separately
# into J-invariant and J-anti-invariant parts. For the standard J the
# anti-invariant part lies in span{beta, J beta}.
a = np.random.default_rng(0).normal(size=6)
g = split_g(a)
j = split_j(a, J)
print("sd + asd == a:", np.allclose(g.sd + g.asd, a))
print("anti-invariant part:", j.anti)
print("its projections on beta, J beta:", j.anti @ BETA / 2, j.anti @ JBETA / 2)

# %%
# Wedge square: omega ^ omega is twice the volume form.
print("omega ^ omega =", wedge(OMEGA, OMEGA))
