"""Solving for a compatible symplectic form with prescribed volume."""

# %%
import numpy as np

from ac4x import CyProblem, continuation, from_fls, normalize_F, solve_cy
from ac4x.errors import BreakdownAt
from ac4x.models import FormField, TorusGrid

n = 16
x1, x2, _, _ = TorusGrid(n).coords()

# %%
# Prescribe omega~^2 = e^F omega^2; F is first shifted so e^F has mean one.
F = normalize_F(FormField.scalar(0.3 * np.sin(2 * np.pi * x1)))
sol = solve_cy(CyProblem(F))
print(sol.summary())

# %%
# Residual history of the fixed-point iteration.
for k, r in enumerate(sol.history):
    print(k, f"{r:.2e}")

# %%
# Continuation along a family of target structures stops cleanly once the
# target leaves the admissible neighbourhood.
def path(t):
    return from_fls(t * 0.6 * np.cos(2 * np.pi * x1), t * 0.6 * np.sin(2 * np.pi * x2), n=n)


try:
    sols = continuation(path, 5, CyProblem(F))
    print("solved at every step:", [s.iterations for s in sols])
except BreakdownAt as exc:
    print(exc)
    print("solutions before breakdown:", len(exc.solutions))
