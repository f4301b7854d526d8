"""Pointwise linear algebra on 2-forms of R^4 with the flat metric.

A 2-form is an array whose first axis holds the six coefficients on
(e12, e13, e14, e23, e24, e34); any trailing axes are treated as a batch,
so every function here works equally on one fiber or on a whole grid.
The coframe is orthonormal, so |e^{ij}|^2 = 1 and |e12 + e34|^2 = 2.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NotAntiInvariant, NotUnitSelfDual
from .exterior import STAR, basis

STRUCT_TOL = 1e-12
INPUT_TOL = 1e-10

_PAIRS = basis(2)


def e(i, j):
    """Basis 2-form e^{ij} (one-based indices, i < j)."""
    out = np.zeros(6)
    out[_PAIRS.index((i - 1, j - 1))] = 1.0
    return out


OMEGA = e(1, 2) + e(3, 4)
BETA = e(1, 3) - e(2, 4)
JBETA = e(1, 4) + e(2, 3)
# orthonormal basis of the self-dual fiber, ordered (omega, beta, J beta)
SD_BASIS = np.stack([OMEGA, BETA, JBETA]) / np.sqrt(2.0)
ASD_BASIS = np.stack([e(1, 2) - e(3, 4), e(1, 3) + e(2, 4), e(1, 4) - e(2, 3)]) / np.sqrt(2.0)


class FiberSplitG(NamedTuple):
    sd: np.ndarray
    asd: np.ndarray


class FiberSplitJ(NamedTuple):
    invariant: np.ndarray
    anti: np.ndarray


def _apply(mat, a):
    return np.tensordot(mat.astype(float), a, axes=(1, 0))


def inner(a, b):
    return np.sum(np.asarray(a) * np.asarray(b), axis=0)


def norm_sq(a):
    return inner(a, a)


def star(a):
    return _apply(STAR[2], np.asarray(a, dtype=float))


def wedge(a, b):
    """Coefficient of a ^ b against e1234."""
    return inner(a, star(b))


def split_g(a):
    a = np.asarray(a, dtype=float)
    sa = star(a)
    return FiberSplitG((a + sa) / 2, (a - sa) / 2)


def to_matrix(a):
    """Antisymmetric 4x4 matrix A with A[i, j] = a(e_i, e_j)."""
    a = np.asarray(a, dtype=float)
    out = np.zeros((4, 4) + a.shape[1:])
    for c, (i, j) in enumerate(_PAIRS):
        out[i, j] = a[c]
        out[j, i] = -a[c]
    return out


def from_matrix(m):
    m = np.asarray(m, dtype=float)
    return np.stack([(m[i, j] - m[j, i]) / 2 for i, j in _PAIRS])


@dataclass(frozen=True)
class AcsFiber:
    """Almost complex structure compatible with the flat metric.

    ``omega_unit`` is the fundamental form w(u, v) = g(Ju, v); ``j_matrix``
    acts on column vectors.  Both may carry trailing batch axes.
    """

    omega_unit: np.ndarray
    j_matrix: np.ndarray


def fundamental_form(j_matrix):
    # w(u, v) = (J u) . v, so the matrix of w is J^T
    return from_matrix(np.swapaxes(j_matrix, 0, 1))


def _check_unit_sd(w, tol):
    w = np.asarray(w, dtype=float)
    asd = np.max(np.abs(split_g(w).asd)) if w.size else 0.0
    dev = np.max(np.abs(norm_sq(w) - 2.0))
    if asd > tol or dev > tol:
        raise NotUnitSelfDual(
            f"expected a self-dual form with |w|^2 = 2 (asd part {asd:.3g}, norm defect {dev:.3g})"
        )


def acs_from_unit_sd_form(w, tol=INPUT_TOL):
    """The metric-compatible J whose fundamental form is ``w``."""
    w = np.asarray(w, dtype=float)
    _check_unit_sd(w, tol)
    return AcsFiber(omega_unit=w, j_matrix=-to_matrix(w))


def _jmat(J):
    return J.j_matrix if isinstance(J, AcsFiber) else np.asarray(J, dtype=float)


def j_conjugate(a, J):
    """The 2-form (u, v) -> a(Ju, Jv)."""
    jm = _jmat(J)
    m = to_matrix(a)
    return from_matrix(np.einsum("ji...,jk...,kl...->il...", jm, m, jm))


def split_j(a, J):
    a = np.asarray(a, dtype=float)
    ja = j_conjugate(a, J)
    return FiberSplitJ((a + ja) / 2, (a - ja) / 2)


def j_on_anti(b, J, tol=INPUT_TOL):
    """Complex structure on the anti-invariant bundle: (Jb)(X, Y) = -b(JX, Y)."""
    b = np.asarray(b, dtype=float)
    inv = split_j(b, J).invariant
    if inv.size and np.max(np.abs(inv)) > tol:
        raise NotAntiInvariant(f"form has a J-invariant part of size {np.max(np.abs(inv)):.3g}")
    jm = _jmat(J)
    return from_matrix(-np.einsum("ji...,jk...->ik...", jm, to_matrix(b)))


def q_required_sd(eta_asd_normsq, F, w_target, omega_background=OMEGA):
    """Self-dual increment making omega + eta compatible with the target.

    With the anti-self-dual part of eta fixed, the form c*w_target + eta^-
    is invariant for the target structure and has wedge square
    2c^2 - |eta^-|^2; matching e^F * (omega ^ omega) = 2 e^F gives
    c = sqrt(e^F + |eta^-|^2 / 2) on the positive branch.
    """
    c = np.sqrt(np.exp(F) + np.asarray(eta_asd_normsq) / 2.0)
    return c * expand(w_target, c.ndim) - expand(omega_background, c.ndim)


def expand(a, batch_ndim):
    """Append singleton batch axes to a single fiber so it broadcasts over a grid."""
    a = np.asarray(a, dtype=float)
    return a.reshape(a.shape + (1,) * (batch_ndim + 1 - a.ndim))
