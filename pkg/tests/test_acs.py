import numpy as np
import pytest
from conftest import kt_coords, torus_coords
from hypothesis import given
from hypothesis import strategies as st

from ac4x.acs import (
    AcsField,
    anti_preserving,
    canonical_anti_section,
    from_fls,
    lee_jalpha,
    nijenhuis_sup,
    nijenhuis_tensor,
    standard,
    tame_split,
    tame_to_compatible_candidate,
    tilde_jalpha,
    wellbalanced_defect,
)
from ac4x.corpus import anti_form, random_function
from ac4x.errors import NormViolation, NotAntiInvariant, NotTaming, NotUnitSelfDual
from ac4x.fiber import BETA, JBETA, OMEGA, inner, norm_sq, split_j, to_matrix, wedge
from ac4x.models import FormField, closedness

seeds = st.integers(0, 2**32 - 1)
N = 8


def coeff(J, v):
    return np.tensordot(v, J.coeffs, 1) / 2


def test_acsfield_validation():
    with pytest.raises(NotUnitSelfDual):
        AcsField(FormField.constant(2, 2 * OMEGA, 4))
    with pytest.raises(ValueError):
        AcsField(FormField.constant(2, OMEGA, 4), "unknown")
    J = standard(4)
    assert J.j_matrix.shape == (4, 4, 4, 4, 4, 4)


def test_from_fls_examples():
    z = np.zeros((N,) * 4)
    assert np.allclose(from_fls(z, z, n=N).coeffs, standard(N).coeffs)
    c = np.full((N,) * 3, 0.5)
    J = from_fls(c, np.zeros_like(c), model="kt", n=N)
    assert np.allclose(coeff(J, OMEGA), np.sqrt(0.75))
    assert np.allclose(norm_sq(J.coeffs), 2)
    x, y, _ = kt_coords(N)
    J = from_fls(0.1 * np.cos(2 * np.pi * x), 0.1 * np.sin(2 * np.pi * y), model="kt", n=N)
    assert np.ptp(coeff(J, OMEGA)) > 0
    with pytest.raises(NormViolation):
        from_fls(np.full((N,) * 4, 0.8), np.full((N,) * 4, 0.7), n=N)


def test_from_fls_sign_coherence():
    x = torus_coords(N)
    l, s = 0.3 * np.cos(2 * np.pi * x[0]), 0.2 * np.sin(2 * np.pi * x[3])
    assert np.allclose(from_fls(-l, -s, -1, n=N).coeffs, -from_fls(l, s, 1, n=N).coeffs)


def test_lee_examples():
    zero = anti_form(0.0, 0.0, N)
    assert np.allclose(lee_jalpha(zero).coeffs, standard(N).coeffs)
    J = lee_jalpha(anti_form(1.0, 0.0, N))
    assert np.allclose(J.coeffs, -FormField.constant(2, BETA, N).coeffs)


def test_tilde_examples():
    assert np.allclose(tilde_jalpha(anti_form(0.0, 0.0, N), -1).coeffs, -standard(N).coeffs)
    J = tilde_jalpha(anti_form(0.0, 1.0, N))
    assert np.allclose(J.coeffs[:, 0, 0, 0, 0], (OMEGA + JBETA) / np.sqrt(2))


def test_tilde_tamed_by_closed_form():
    alpha = anti_form(0.6, -0.9, N)
    J = tilde_jalpha(alpha)
    taming = FormField.constant(2, OMEGA, N) + alpha
    assert np.all(wedge(taming.coeffs, J.coeffs) > 0)


@given(seeds)
def test_family_norm_identity(seed):
    rng = np.random.default_rng(seed)
    alpha = anti_form(random_function(rng, N, amp=1.5), random_function(rng, N), N)
    asq = norm_sq(alpha.coeffs)
    for J in (lee_jalpha(alpha), tilde_jalpha(alpha)):
        f = coeff(J, OMEGA)
        r = inner(J.coeffs - f * OMEGA[:, None, None, None, None], alpha.coeffs) / np.maximum(asq, 1e-300)
        assert np.allclose(2 * f**2 + r**2 * asq, 2, atol=1e-10)


def test_rejects_invariant_alpha():
    with pytest.raises(NotAntiInvariant):
        lee_jalpha(FormField.constant(2, OMEGA, N))


@given(seeds)
def test_anti_preserving_keeps_alpha(seed):
    rng = np.random.default_rng(seed)
    alpha = anti_form(rng.uniform(-1, 1), rng.uniform(-1, 1), N)
    J = anti_preserving(alpha, random_function(rng, N, amp=0.6))
    assert np.max(np.abs(inner(alpha.coeffs, J.coeffs))) <= 1e-12
    assert np.max(np.abs(split_j(alpha.coeffs, J.j_matrix).invariant)) <= 1e-12


def test_anti_preserving_trivial_and_bounds():
    alpha = anti_form(1.0, 0.0, N)
    assert np.allclose(anti_preserving(alpha, 0.0).coeffs, standard(N).coeffs)
    with pytest.raises(NormViolation):
        anti_preserving(alpha, 1.0)


def test_tame_split_examples():
    J = standard(N)
    w = FormField.constant(2, OMEGA, N)
    sp = tame_split(w, J)
    assert np.allclose(sp.omega_prime.coeffs, w.coeffs) and sp.omega_dprime.sup() == 0
    sp = tame_split(w + FormField.constant(2, 0.3 * BETA, N), J)
    assert np.allclose(sp.omega_prime.coeffs, w.coeffs)
    assert np.allclose(sp.omega_dprime.coeffs[:, 0, 0, 0, 0], 0.3 * BETA)
    assert np.allclose(norm_sq(sp.normalized_omega_unit.coeffs), 2)
    with pytest.raises(NotTaming) as err:
        tame_split(w * -1.0, J)
    assert err.value.index == (0, 0, 0, 0)


def test_candidate_closed_alpha():
    alpha = anti_form(0.4, 0.7, N)
    cand, margin = tame_to_compatible_candidate(alpha)
    assert np.allclose(cand.coeffs, (FormField.constant(2, OMEGA, N) + alpha).coeffs)
    assert np.allclose(margin.coeffs[0], 2 + norm_sq(alpha.coeffs))
    cand, margin = tame_to_compatible_candidate(anti_form(0.0, 0.0, N))
    assert np.allclose(margin.coeffs, 2)


def test_candidate_nonclosed_alpha():
    x1 = torus_coords(N)[0]
    alpha = anti_form(0.1 * (1 + np.sin(2 * np.pi * x1)), 0.0, N)
    cand, margin = tame_to_compatible_candidate(alpha)
    assert margin.coeffs.min() > 0
    assert closedness(cand) <= 1e-9
    assert np.all(wedge(cand.coeffs, cand.coeffs) > 0)
    assert np.allclose(wedge(cand.coeffs, cand.coeffs), margin.coeffs[0], atol=1e-12)
    Jt = tilde_jalpha(alpha)
    assert np.max(np.abs(split_j(cand.coeffs, Jt.j_matrix).anti)) <= 1e-8


def test_nijenhuis_constant_and_witness():
    assert nijenhuis_sup(standard(N)) == 0
    assert nijenhuis_sup(from_fls(np.full((N,) * 4, 0.3), np.full((N,) * 4, -0.2), n=N)) <= 1e-12
    x1 = torus_coords(16)[0]
    J = from_fls(0.2 * np.cos(2 * np.pi * x1), np.zeros_like(x1), n=16)
    assert nijenhuis_sup(J) > 1e-3


def _shear_pullback(n, eps=0.1):
    """Pullback of the constant beta-structure by psi = (x1 + eps sin 2pi x2, x2, x3 + eps sin 2pi x4, x4).

    The two shears act on disjoint coordinates, so D psi is the product of
    their Jacobians and J = (D psi)^-1 J0 D psi is integrable.
    """
    x = torus_coords(n)
    D = np.zeros((4, 4) + x[0].shape)
    for i in range(4):
        D[i, i] = 1.0
    D[0, 1] = 2 * np.pi * eps * np.cos(2 * np.pi * x[1])
    D[2, 3] = 2 * np.pi * eps * np.cos(2 * np.pi * x[3])
    Dinv = D.copy()
    Dinv[0, 1] *= -1
    Dinv[2, 3] *= -1
    J0 = -to_matrix(FormField.constant(2, BETA, n).coeffs)
    return np.einsum("ab...,bc...,cd...->ad...", Dinv, J0, D)


def test_nijenhuis_integrable_pullback():
    n = 16
    J = _shear_pullback(n)
    assert np.allclose(np.einsum("ab...,bc...->ac...", J, J), -np.eye(4)[:, :, None, None, None, None])
    assert np.ptp(J) > 0.1
    assert nijenhuis_sup(J) <= 1e-9


def test_nijenhuis_antisymmetric():
    x1 = torus_coords(N)[0]
    N_ = nijenhuis_tensor(from_fls(0.2 * np.cos(2 * np.pi * x1), np.zeros_like(x1), n=N))
    assert np.allclose(N_, -np.swapaxes(N_, 1, 2))


def test_wellbalanced():
    assert wellbalanced_defect(standard(N)) == 0
    assert wellbalanced_defect(tilde_jalpha(anti_form(0.5, 0.2, N))) <= 1e-8
    x1 = torus_coords(N)[0]
    J = from_fls(0.2 * np.cos(2 * np.pi * x1), np.zeros_like(x1), n=N)
    assert wellbalanced_defect(J) > 0
    phi = canonical_anti_section(J)
    assert np.allclose(norm_sq(phi), 2)
    assert np.max(np.abs(inner(phi, J.coeffs))) < 1e-12
