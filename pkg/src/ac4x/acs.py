"""Families of metric-compatible almost complex structures and diagnostics."""

from typing import NamedTuple

import numpy as np

from .errors import (
    ModelMismatch,
    NormViolation,
    NotAntiInvariant,
    NotTaming,
    SectionDegenerate,
)
from .fiber import (
    BETA,
    JBETA,
    OMEGA,
    _check_unit_sd,
    expand,
    inner,
    j_on_anti,
    norm_sq,
    split_g,
    split_j,
    to_matrix,
)
from .hodge import exact_part
from .models import FormField, partials

PROVENANCE = ("standard", "fls", "lee", "tilde", "anti_preserving", "custom")
UNIT_TOL = 1e-10
EPS_F = 1e-8


class AcsField:
    """Almost complex structure on a model, stored as its fundamental form.

    The fundamental form w(u, v) = g(Ju, v) of the flat metric must be
    self-dual with |w|^2 = 2 at every grid point.
    """

    def __init__(self, omega_unit_field, provenance="custom", tol=UNIT_TOL):
        if provenance not in PROVENANCE:
            raise ValueError(f"unknown provenance {provenance!r}")
        w = omega_unit_field
        if w.degree != 2:
            raise ValueError("fundamental form must be a 2-form")
        _check_unit_sd(w.coeffs, tol)
        self.omega_unit_field = w
        self.provenance = provenance

    @property
    def model(self):
        return self.omega_unit_field.model

    @property
    def n(self):
        return self.omega_unit_field.n

    @property
    def grid_shape(self):
        return self.omega_unit_field.grid_shape

    @property
    def coeffs(self):
        return self.omega_unit_field.coeffs

    @property
    def j_matrix(self):
        """J as a (4, 4, *grid) array acting on column vectors."""
        return -to_matrix(self.coeffs)

    def __repr__(self):
        return f"AcsField({self.provenance}, model={self.model!r}, n={self.n})"


def standard(n=16, model="torus"):
    """The integrable structure J e1 = e2, J e3 = e4 with w = e12 + e34."""
    return AcsField(FormField.constant(2, OMEGA, n, model), "standard")


def as_function(values, grid_shape):
    if isinstance(values, FormField):
        if values.degree != 0:
            raise ValueError("expected a 0-form")
        values = values.coeffs[0]
    return np.broadcast_to(np.asarray(values, dtype=float), grid_shape)


def _grid_shape(model, n, *candidates):
    for c in candidates:
        if isinstance(c, FormField):
            return c.grid_shape
        if isinstance(c, np.ndarray) and c.ndim > 0:
            return c.shape[-(4 if model == "torus" else 3):]
    return (n,) * (4 if model == "torus" else 3)


def from_fls(l, s, sign=1, model="torus", n=16):
    """The structure with fundamental form f*omega + l*beta + s*J(beta).

    f = sign * sqrt((2 - |beta|^2 (l^2 + s^2)) / 2) with |beta|^2 = 2.
    """
    shape = _grid_shape(model, n, l, s)
    lv, sv = as_function(l, shape), as_function(s, shape)
    beta_sq = norm_sq(BETA)
    radicand = 2.0 - beta_sq * (lv**2 + sv**2)
    if np.min(radicand) < EPS_F:
        raise NormViolation(f"|beta|^2 (l^2 + s^2) reaches {2 - np.min(radicand):.6g} > 2 - {EPS_F:g}")
    f = sign * np.sqrt(radicand / 2.0)
    nd = len(shape)
    w = f * expand(OMEGA, nd) + lv * expand(BETA, nd) + sv * expand(JBETA, nd)
    return AcsField(FormField(2, w, model), "fls")


def _anti_invariant_coeffs(alpha, base):
    shape = alpha.grid_shape
    ref = base.coeffs if base is not None else np.broadcast_to(expand(OMEGA, len(shape)), (6,) + shape)
    jm = -to_matrix(ref)
    inv = split_j(alpha.coeffs, jm).invariant
    if np.max(np.abs(inv)) > UNIT_TOL:
        raise NotAntiInvariant(f"alpha has a J-invariant part of size {np.max(np.abs(inv)):.3g}")
    return alpha.coeffs, ref, jm


def lee_jalpha(alpha, sign=1, base=None):
    """Lee's structure: r = -4/(2+|alpha|^2), f = sign*(2-|alpha|^2)/(2+|alpha|^2)."""
    a, ref, _ = _anti_invariant_coeffs(alpha, base)
    asq = norm_sq(a)
    r = -4.0 / (2.0 + asq)
    f = sign * (2.0 - asq) / (2.0 + asq)
    return AcsField(FormField(2, f * ref + r * a, alpha.model), "lee")


def tilde_jalpha(alpha, sign=1, base=None):
    """Normalization of sign*omega + alpha to unit length."""
    a, ref, _ = _anti_invariant_coeffs(alpha, base)
    c = np.sqrt(2.0) / np.sqrt(2.0 + norm_sq(a))
    return AcsField(FormField(2, c * (sign * ref + a), alpha.model), "tilde")


def anti_preserving(alpha, r, sign=1, base=None):
    """Fundamental form f*omega + r*J(alpha) with 2 f^2 + r^2 |alpha|^2 = 2.

    alpha stays anti-invariant for the new structure.
    """
    a, ref, jm = _anti_invariant_coeffs(alpha, base)
    rv = as_function(r, alpha.grid_shape)
    radicand = 2.0 - rv**2 * norm_sq(a)
    if np.min(radicand) < EPS_F:
        raise NormViolation(f"r^2 |alpha|^2 reaches {2 - np.min(radicand):.6g} > 2 - {EPS_F:g}")
    f = sign * np.sqrt(radicand / 2.0)
    ja = j_on_anti(a, jm)
    return AcsField(FormField(2, f * ref + rv * ja, alpha.model), "anti_preserving")


# ---------------------------------------------------------------------------
# taming


class TamingSplit(NamedTuple):
    omega_prime: FormField
    omega_dprime: FormField
    normalized_omega_unit: FormField


def tame_split(omega_taming, J):
    """Split a taming form into J-invariant and anti-invariant parts."""
    w = J.coeffs
    pos = inner(omega_taming.coeffs, w)
    bad = np.argwhere(pos <= 0)
    if bad.size:
        idx = tuple(int(i) for i in bad[0])
        raise NotTaming(f"<omega, omega_J> = {pos[idx]:.3g} <= 0 at grid point {idx}", index=idx)
    parts = split_j(omega_taming.coeffs, J.j_matrix)
    prime = FormField(2, parts.invariant, J.model)
    unit = parts.invariant * np.sqrt(2.0 / norm_sq(parts.invariant))
    return TamingSplit(prime, FormField(2, parts.anti, J.model), FormField(2, unit, J.model))


def tame_to_compatible_candidate(alpha, base=None):
    """Closed candidate omega + alpha + 2(alpha^exact)^- and its positivity margin.

    The margin 2 + |alpha|^2 - 4|(alpha^exact)^-|^2 equals the wedge square of
    the candidate; where it is positive everywhere the candidate is a
    symplectic form compatible with the structure normalizing omega + alpha.
    """
    if alpha.model != "torus":
        raise ModelMismatch("needs the Hodge decomposition on the torus")
    a, ref, _ = _anti_invariant_coeffs(alpha, base)
    exact_asd = split_g(exact_part(alpha).coeffs).asd
    cand = FormField(2, ref + a + 2 * exact_asd, "torus")
    margin = 2.0 + norm_sq(a) - 4.0 * norm_sq(exact_asd)
    return cand, FormField.scalar(margin)


# ---------------------------------------------------------------------------
# integrability diagnostics


def _jfield(J):
    return J.j_matrix if isinstance(J, AcsField) else np.asarray(J, dtype=float)


def nijenhuis_tensor(J):
    """N(e_i, e_j) for the coordinate frame, shape (4, 4, 4, *grid) indexed [a, i, j].

    Accepts an AcsField or any (4, 4, *grid) matrix field on the torus.
    """
    jm = _jfield(J)
    grid = jm.shape[2:]
    if len(grid) != 4:
        raise ModelMismatch("Nijenhuis tensor is computed on the torus")
    dj = np.stack([p.reshape((4, 4) + grid) for p in partials(jm.reshape((16,) + grid))])
    # [JX, JY] part: sum_k J[k,i] d_k J[a,j]
    adv = np.einsum("ki...,kaj...->aij...", jm, dj)
    bracket = adv - np.swapaxes(adv, 1, 2)
    # -J[JX, Y] - J[X, JY] for coordinate X = e_i, Y = e_j
    twist = np.einsum("ab...,jbi...->aij...", jm, dj) - np.einsum("ab...,ibj...->aij...", jm, dj)
    return bracket + twist


def nijenhuis_sup(J):
    """Sup over the grid of max_{i<j} |N(e_i, e_j)|."""
    N = nijenhuis_tensor(J)
    norms = np.sqrt(np.sum(N**2, axis=0))
    iu = np.triu_indices(4, 1)
    return float(np.max(norms[iu]))


def canonical_anti_section(J, seed=BETA, tol=EPS_F):
    """Unit (|phi|^2 = 2) anti-invariant section from projecting ``seed``."""
    w = J.coeffs
    nd = len(J.grid_shape)
    b = expand(seed, nd)
    phi = b - inner(b, w) * w / 2.0
    nrm = np.sqrt(norm_sq(phi))
    if np.min(nrm) < tol:
        raise SectionDegenerate(f"projected section norm drops to {np.min(nrm):.3g}")
    return phi * np.sqrt(2.0) / nrm


def wellbalanced_defect(J):
    """sup | |grad(J phi)|^2 - |grad phi|^2 | for the canonical anti-invariant section.

    Uses the flat connection, i.e. coordinate derivatives of coefficients.
    """
    if J.model != "torus":
        raise ModelMismatch("well-balanced check uses the flat torus connection")
    phi = canonical_anti_section(J)
    jphi = j_on_anti(phi, J.j_matrix, tol=1e-8)
    g_phi = sum(np.sum(p**2, axis=0) for p in partials(phi))
    g_jphi = sum(np.sum(p**2, axis=0) for p in partials(jphi))
    return float(np.max(np.abs(g_jphi - g_phi)))
