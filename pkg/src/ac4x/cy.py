"""Symplectic Calabi-Yau equation on the flat torus.

Find a 1-form a (gauge d*a = 0) and a constant self-dual h such that
w~ = w + da + h is invariant for a target structure J' and satisfies
w~ ^ w~ = e^F w ^ w pointwise.  Writing eta = da + h, invariance forces
eta^+ = sqrt(e^F + |eta^-|^2 / 2) w' - w, which is solved by Picard
iteration with one spectral inversion per step.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .acs import AcsField
from .errors import BreakdownAt, NonConvergence, NormViolation, PositivityLoss
from .fiber import (
    OMEGA,
    SD_BASIS,
    _check_unit_sd,
    inner,
    q_required_sd,
    split_g,
    split_j,
)
from .hodge import from_sd_coordinates, invert_dstar_dplus
from .models import FormField, closedness, d_spectral, delta_spectral, wedge_fields


@dataclass
class SolverConfig:
    tol: float = 1e-10
    max_iter: int = 200
    tol_vol: float = 1e-8
    tol_inv: float = 1e-8
    tol_closed: float = 1e-9
    delta_max: float = 0.5
    damping: float = 1.0
    fallback_damping: float = 0.5

    def to_dict(self):
        return asdict(self)


@dataclass
class CyProblem:
    F: FormField
    target: AcsField = None
    omega: FormField = None
    config: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.F.degree != 0 or self.F.model != "torus":
            raise ValueError("F must be a scalar field on the torus")
        if self.omega is None:
            self.omega = FormField.constant(2, OMEGA, self.F.n)
        _check_unit_sd(self.omega.coeffs, 1e-10)
        if closedness(self.omega) > self.config.tol_closed:
            raise ValueError("base form is not closed")
        if self.target is None:
            self.target = AcsField(self.omega, "custom")

    def to_dict(self):
        return {
            "n": self.F.n,
            "F_sup": self.F.sup(),
            "target": self.target.provenance,
            "config": self.config.to_dict(),
        }


@dataclass
class CySolution:
    a: FormField
    h: np.ndarray
    omega_tilde: FormField
    residual_volume: float
    residual_closed: float
    residual_invariance: float
    positivity_min: float
    period_drift: float
    gauge_residual: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list)

    def summary(self):
        return {
            "h": [float(x) for x in self.h],
            "residual_volume": self.residual_volume,
            "residual_closed": self.residual_closed,
            "residual_invariance": self.residual_invariance,
            "positivity_min": self.positivity_min,
            "period_drift": self.period_drift,
            "gauge_residual": self.gauge_residual,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def volume_form(omega):
    return wedge_fields(omega, omega).coeffs[0]


def normalize_F(F, omega=None):
    """F - log(int e^F w^2 / int w^2), so the volume constraint holds on the grid."""
    vol = 2.0 if omega is None else volume_form(omega)
    shift = np.log(np.mean(np.exp(F.coeffs[0]) * vol) / np.mean(vol * np.ones_like(F.coeffs[0])))
    return FormField.scalar(F.coeffs[0] - shift)


def periods(a):
    """Integrals of a 2-form over the six coordinate 2-tori through the origin."""
    out = np.empty(6)
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    for c, (i, j) in enumerate(pairs):
        sl = [0, 0, 0, 0]
        sl[i] = slice(None)
        sl[j] = slice(None)
        out[c] = np.mean(a.coeffs[c][tuple(sl)])
    return out


def check_solution(omega_tilde, omega, F, target):
    """Independent residuals: (volume, closedness, invariance, positivity minimum)."""
    vol = np.max(np.abs(volume_form(omega_tilde) - np.exp(F.coeffs[0]) * volume_form(omega)))
    inv = np.max(np.abs(split_j(omega_tilde.coeffs, target.j_matrix).anti))
    pos = np.min(inner(omega_tilde.coeffs, target.coeffs))
    return float(vol), closedness(omega_tilde), float(inv), float(pos)


def _assemble(p, a, h):
    return p.omega + d_spectral(a) + from_sd_coordinates(np.broadcast_to(h[:, None, None, None, None], (3,) + a.grid_shape))


def _positivity(p, omega_tilde):
    pos = inner(omega_tilde.coeffs, p.target.coeffs)
    bad = np.argwhere(pos <= 0)
    if bad.size:
        idx = tuple(int(i) for i in bad[0])
        raise PositivityLoss(f"<w~, w'> = {pos[idx]:.3g} <= 0 at grid point {idx}", index=idx)


def solve_cy(p, initial=None):
    """Picard iteration for (a, h); ``initial`` is an optional (a, h) warm start."""
    cfg = p.config
    gap = float(np.max(np.abs(p.target.coeffs - p.omega.coeffs)))
    if gap > cfg.delta_max:
        raise NormViolation(f"target is {gap:.3g} from the base form, beyond delta_max = {cfg.delta_max}")
    shape = p.F.grid_shape
    if initial is None:
        a, h = FormField.zeros(1, p.F.n), np.zeros(3)
    else:
        a, h = initial[0], np.asarray(initial[1], dtype=float)
    w_target = p.target.coeffs
    F = p.F.coeffs[0]
    lam = cfg.damping
    history = []
    converged = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        da = d_spectral(a)
        eta_asd = split_g(da.coeffs).asd
        R = q_required_sd(np.sum(eta_asd**2, axis=0), F, w_target, p.omega.coeffs)
        mean = R.reshape(6, -1).mean(axis=1)
        h_new = SD_BASIS @ mean
        rest = FormField(2, R - mean.reshape((6,) + (1,) * len(shape)))
        a_new = invert_dstar_dplus(FormField.zeros(0, p.F.n), rest)
        change = max(float(np.max(np.abs(a_new.coeffs - a.coeffs))), float(np.max(np.abs(h_new - h))))
        if history and change > history[-1] and lam > cfg.fallback_damping:
            lam = cfg.fallback_damping
        history.append(change)
        a = a + (a_new - a) * lam
        h = h + lam * (h_new - h)
        _positivity(p, _assemble(p, a, h))
        if change <= cfg.tol:
            converged = True
            break
    omega_tilde = _assemble(p, a, h)
    vol, closed, inv, pos = check_solution(omega_tilde, p.omega, p.F, p.target)
    drift = float(np.max(np.abs(periods(omega_tilde - p.omega))))
    sol = CySolution(
        a, h, omega_tilde, vol, closed, inv, pos, drift, delta_spectral(a).sup(), it, converged, history
    )
    if not converged:
        raise NonConvergence(
            f"no convergence after {it} iterations (last update {history[-1]:.3g})",
            iterations=it,
            residuals=history,
        )
    return sol


def continuation(path, steps, p):
    """Warm-started solves for J_t = path(t), t = k / steps."""
    solutions = []
    prev = None
    for k in range(steps + 1):
        t = k / steps
        try:
            q = CyProblem(p.F, path(t), p.omega, p.config)
            sol = solve_cy(q, prev)
        except (NonConvergence, PositivityLoss, NormViolation) as exc:
            raise BreakdownAt(t, f"{type(exc).__name__}: {exc}", solutions) from exc
        solutions.append(sol)
        prev = (sol.a, sol.h)
    return solutions
