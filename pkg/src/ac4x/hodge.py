"""Hodge theory on the flat torus.

Harmonic forms are exactly the constant ones, so every decomposition here
is a per-frequency projection with no iterative solves.
"""

from typing import NamedTuple

import numpy as np

from .errors import ModelMismatch, NotSelfDual, SingularFrequency
from .exterior import WEDGE1
from .fiber import SD_BASIS, split_g
from .models import (
    FormField,
    _wavenumbers,
    d_spectral,
    delta_spectral,
    fft_fields,
    ifft_fields,
    laplacian_symbol,
)

LEMMA_TOL = 1e-9
SD_TOL = 1e-10


class HodgeParts(NamedTuple):
    harmonic: FormField
    exact: FormField
    coexact: FormField
    theta: FormField
    psi: FormField


def _require_torus(a):
    if a.model != "torus":
        raise ModelMismatch("Hodge decomposition is only available on the flat torus")


def green(a):
    """Inverse Laplacian on the mean-zero part, componentwise."""
    _require_torus(a)
    lap = laplacian_symbol(a.n, 4)
    inv = np.zeros_like(lap)
    np.divide(1.0, lap, out=inv, where=lap > 0)
    return FormField(a.degree, ifft_fields(fft_fields(a.coeffs) * inv, a.grid_shape), a.model)


def harmonic_part(a):
    _require_torus(a)
    return FormField.constant(a.degree, a.mean(), a.n, a.model)


def hodge_decompose(a):
    """Split a 2-form as harmonic + d(theta) + delta(psi) with delta(theta) = 0."""
    _require_torus(a)
    g = green(a)
    theta = delta_spectral(g)
    psi = d_spectral(g)
    return HodgeParts(harmonic_part(a), d_spectral(theta), delta_spectral(psi), theta, psi)


def exact_part(a):
    return d_spectral(delta_spectral(green(a)))


def _sd(a):
    return FormField(2, split_g(a.coeffs).sd, a.model)


def _asd(a):
    return FormField(2, split_g(a.coeffs).asd, a.model)


def check_self_dual(a, tol=SD_TOL):
    defect = np.max(np.abs(split_g(a.coeffs).asd))
    if defect > tol:
        raise NotSelfDual(f"form has anti-self-dual part of size {defect:.3g}")


def verify_dim4_lemma(a):
    """Defects of (d theta)^+ = (delta psi)^+ and (d theta)^- = -(delta psi)^-."""
    check_self_dual(a)
    parts = hodge_decompose(a)
    plus = _sd(parts.exact) - _sd(parts.coexact)
    minus = _asd(parts.exact) + _asd(parts.coexact)
    return float(np.max(np.abs(plus.coeffs))), float(np.max(np.abs(minus.coeffs)))


def _omega_field(J):
    return J if isinstance(J, FormField) else J.omega_unit_field


def close_ji_form(f, J):
    """Closed J-invariant form f*w + 2((f*w)^exact)^- for the fundamental form w of J."""
    w = _omega_field(J)
    _require_torus(w)
    fw = w * f
    return fw + 2 * _asd(exact_part(fw))


# ---------------------------------------------------------------------------
# the first-order operator a -> (d*a, (da)^+) on 1-forms


def sd_coordinates(a):
    """Coordinates of the self-dual part on the orthonormal (omega, beta, J beta) basis."""
    return np.tensordot(SD_BASIS, a.coeffs, axes=(1, 0))


def from_sd_coordinates(c, model="torus"):
    return FormField(2, np.tensordot(SD_BASIS.T, np.asarray(c), axes=(1, 0)), model)


def dstar_dplus(a):
    """Forward operator: (d*a as a 0-form, (da)^+ as a 2-form)."""
    return delta_spectral(a), _sd(d_spectral(a))


def _symbol(n):
    # real 4x4 matrix R(k) with the operator acting as 2*pi*i*R(k) on Fourier modes
    ks = _wavenumbers(n, 4)
    shape = np.broadcast_shapes(*(k.shape for k in ks))
    kvec = np.stack([np.broadcast_to(k, shape) for k in ks], axis=-1)
    wedge_k = np.einsum("...i,irc->...rc", kvec, WEDGE1[1].astype(float))
    sym = np.empty(shape + (4, 4))
    sym[..., 0, :] = -kvec
    sym[..., 1:, :] = np.einsum("sr,...rc->...sc", SD_BASIS, wedge_k)
    return sym, np.sum(kvec**2, axis=-1) > 0


def invert_dstar_dplus(rhs0, rhsp, tol=1e-10):
    """The 1-form a without harmonic part solving d*a = rhs0, (da)^+ = rhsp.

    Both right-hand sides must have zero harmonic part: rhs0 mean-zero and
    rhsp orthogonal to the constant self-dual forms.
    """
    _require_torus(rhsp)
    if rhs0.grid_shape != rhsp.grid_shape:
        raise ModelMismatch("right-hand sides live on different grids")
    n = rhsp.n
    rhs = np.concatenate([rhs0.coeffs, sd_coordinates(rhsp)], axis=0)
    scale = max(1.0, float(np.max(np.abs(rhs))))
    zero_mode = np.abs(rhs.reshape(4, -1).mean(axis=1))
    if np.max(zero_mode) > tol * scale:
        raise SingularFrequency(
            f"right-hand side has harmonic content {np.max(zero_mode):.3g}; the zero-frequency block is singular"
        )
    sym, regular = _symbol(n)
    hat = np.moveaxis(fft_fields(rhs), 0, -1)
    out = np.zeros_like(hat)
    out[regular] = np.linalg.solve(sym[regular], hat[regular][..., None])[..., 0] / (2j * np.pi)
    return FormField(1, ifft_fields(np.moveaxis(out, -1, 0), rhsp.grid_shape), "torus")
