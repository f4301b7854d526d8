"""Building almost complex structures and testing integrability."""

# %%
import numpy as np

from ac4x import (
    anti_preserving,
    from_fls,
    lee_jalpha,
    nijenhuis_sup,
    standard,
    tilde_jalpha,
)
from ac4x.acs import tame_split, tame_to_compatible_candidate
from ac4x.corpus import anti_form
from ac4x.fiber import OMEGA
from ac4x.models import FormField, TorusGrid, closedness

n = 16
x1, x2, _, _ = TorusGrid(n).coords()

# %%
# Structures are stored through their unit self-dual fundamental form w.
# from_fls builds w = f omega + l beta + s J(beta) with f^2 + l^2 + s^2 = 1.
J = from_fls(0.2 * np.cos(2 * np.pi * x1), 0.1 * np.sin(2 * np.pi * x2), n=n)
print(J)

# %%
# An anti-invariant form alpha for the standard structure generates three families.
alpha = anti_form(0.6, 0.3 * np.sin(2 * np.pi * x1), n)
for name, Jt in [
    ("lee", lee_jalpha(alpha)),
    ("tilde", tilde_jalpha(alpha)),
    ("anti_preserving", anti_preserving(alpha, 0.5 + 0.2 * np.cos(2 * np.pi * x2))),
]:
    print(f"{name:16s} Nijenhuis sup = {nijenhuis_sup(Jt):.3e}")

# %%
# Constant structures are integrable; the x1-dependent fls structure is not.
print("standard:", nijenhuis_sup(standard(n)))
print("fls witness:", nijenhuis_sup(J))

# %%
# The constant symplectic form omega tames every structure close enough to the standard one.
split = tame_split(FormField.constant(2, OMEGA, n), J)
print("anti-invariant part of omega w.r.t. J:", split.omega_dprime.sup())

# %%
# A non-closed alpha still yields a closed candidate compatible with tilde J_alpha.
cand, margin = tame_to_compatible_candidate(alpha)
print("candidate |d| =", closedness(cand), " min margin =", float(margin.coeffs.min()))
