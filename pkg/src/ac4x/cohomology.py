"""Dimensions of the J-invariant and J-anti-invariant cohomology.

Closed anti-invariant forms are exactly the harmonic self-dual forms
pointwise orthogonal to the fundamental form w of J, so h^- is the corank
of the matrix M[i, x] = <phi_i, w(x)> over a harmonic self-dual basis
phi_i, and h^+ = b2 - h^-.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space, orth

from .acs import from_fls, lee_jalpha
from .errors import IdenticallyPlusMinus, ModelMismatch, RankDeficient
from .fiber import j_on_anti, split_g, split_j, to_matrix
from .hodge import close_ji_form
from .models import (
    KT_ALGEBRA,
    FormField,
    KTGrid,
    algebra_for,
    betti_numbers,
    closedness,
    d_spectral,
    drop_nyquist,
    harmonic_asd_basis,
    harmonic_sd_basis,
    integrate,
    wedge_fields,
)

RANK_RTOL = 1e-8
RANK_ATOL = 1e-10
MAX_SAMPLES = 4096
PURITY_TOL = 1e-8


@dataclass
class RankReport:
    shape: tuple
    singular_values: list
    rank: int
    tol: float


def numerical_rank(matrix, rtol=RANK_RTOL, atol=RANK_ATOL):
    """Count singular values above rtol * sigma_max (and above atol)."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    sv = np.linalg.svd(matrix, compute_uv=False) if matrix.size else np.zeros(0)
    smax = sv[0] if sv.size else 0.0
    tol = max(rtol * smax, atol)
    return RankReport(matrix.shape, [float(s) for s in sv], int(np.sum(sv > tol)), float(tol))


def sample_points(grid_shape, max_points=MAX_SAMPLES, seed=0):
    """Flat indices of a jittered stratified subsample with at most ``max_points`` points."""
    total = int(np.prod(grid_shape))
    if total <= max_points:
        return np.arange(total)
    d = len(grid_shape)
    stride = 2
    while int(np.prod([-(-s // stride) for s in grid_shape])) > max_points:
        stride *= 2
    rng = np.random.default_rng(seed)
    axes = []
    for s in grid_shape:
        starts = np.arange(0, s, stride)
        axes.append(starts)
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    jitter = rng.integers(0, stride, size=mesh.shape)
    pts = np.minimum(mesh + jitter, np.array(grid_shape) - 1)
    return np.ravel_multi_index(pts.T, grid_shape)


def orthogonality_matrix(J, basis=None, max_points=MAX_SAMPLES):
    """M[i, x] = <phi_i, w(x)> / sqrt(#samples) on a sampled set of grid points."""
    if basis is None:
        basis = harmonic_sd_basis(J.model)
    w = J.coeffs.reshape(6, -1)
    idx = sample_points(J.grid_shape, max_points) if max_points else np.arange(int(np.prod(J.grid_shape)))
    return basis @ w[:, idx] / np.sqrt(idx.size)


@dataclass
class CohomSummary:
    b2: int
    b_plus: int
    b_minus: int
    h_plus: int
    h_minus: int
    singular_values: list
    null_basis: np.ndarray
    rank: RankReport = field(repr=False, default=None)
    model: str = "torus"

    def to_dict(self):
        return {
            "model": self.model,
            "b2": self.b2,
            "b_plus": self.b_plus,
            "b_minus": self.b_minus,
            "h_plus": self.h_plus,
            "h_minus": self.h_minus,
            "singular_values": list(self.singular_values),
            "null_basis": [list(map(float, v)) for v in self.null_basis],
            "rank_tol": self.rank.tol if self.rank else None,
        }


def _betti(model):
    b = betti_numbers(algebra_for(model))
    bp = harmonic_sd_basis(model).shape[0]
    return b[2], bp, b[2] - bp


def h_minus(J):
    """h^- from the corank of the orthogonality matrix; h^+ = b2 - h^-."""
    b2, bp, bm = _betti(J.model)
    basis = harmonic_sd_basis(J.model)
    M = orthogonality_matrix(J, basis)
    rep = numerical_rank(M)
    u = np.linalg.svd(M, full_matrices=True)[0] if M.size else np.eye(bp)
    null = u[:, rep.rank :].T @ basis  # coefficient vectors on the 6-dim fiber basis
    hm = bp - rep.rank
    return CohomSummary(b2, bp, bm, b2 - hm, hm, rep.singular_values, null, rep, J.model)


def h_anti_basis(J):
    """Closed anti-invariant forms spanning H_J^- as constant-coefficient fields."""
    summ = h_minus(J)
    return [FormField.constant(2, v, J.n, J.model) for v in summ.null_basis]


def intersection_estimate_check(J, Jt, tol=1e-10):
    """dim(H_J^- cap H_Jt^-) from the joint orthogonality system."""
    if J.model != Jt.model or J.grid_shape != Jt.grid_shape:
        raise ModelMismatch("structures live on different grids")
    w, wt = J.coeffs, Jt.coeffs
    dev = np.minimum(np.max(np.abs(wt - w), axis=0), np.max(np.abs(wt + w), axis=0))
    if np.max(dev) <= tol:
        raise IdenticallyPlusMinus("the second structure equals +-J at every grid point")
    basis = harmonic_sd_basis(J.model)
    M = np.hstack([orthogonality_matrix(J, basis), orthogonality_matrix(Jt, basis)])
    return basis.shape[0] - numerical_rank(M).rank


# ---------------------------------------------------------------------------
# direct-sum verification on the torus


@dataclass
class DirectSumReport:
    gram: np.ndarray
    gram_rank: int
    n_invariant: int
    n_anti: int
    cross_max: float
    purity_ok: bool
    closed_max: float
    invariance_max: float
    forms: list = field(repr=False, default_factory=list)

    def to_dict(self):
        return {
            "gram_rank": self.gram_rank,
            "n_invariant": self.n_invariant,
            "n_anti": self.n_anti,
            "cross_max": self.cross_max,
            "purity_ok": self.purity_ok,
            "closed_max": self.closed_max,
            "invariance_max": self.invariance_max,
        }


def verify_direct_sum(J, tol=PURITY_TOL):
    """Build b2 closed representatives split by type and check their cup Gram matrix.

    The anti-invariant block is the h^- null basis.  The invariant block is
    the constant anti-self-dual forms plus the closed invariant forms
    obtained from <phi, w> for phi in the complement of the null space.
    """
    if J.model != "torus":
        raise ModelMismatch("direct-sum verification needs the torus Hodge theory")
    basis = harmonic_sd_basis("torus")
    rep = numerical_rank(orthogonality_matrix(J, basis))
    # class vectors scale like sigma^2, so directions come from the full grid
    u = np.linalg.svd(orthogonality_matrix(J, basis, max_points=None), full_matrices=False)[0]
    anti = [FormField.constant(2, c @ basis, J.n) for c in u[:, rep.rank :].T]
    inv = [FormField.constant(2, v, J.n) for v in harmonic_asd_basis("torus")]
    for c in u[:, : rep.rank].T:
        f = ((c @ basis) @ J.coeffs.reshape(6, -1)).reshape(J.grid_shape)
        g = close_ji_form(FormField.scalar(f / np.sqrt(np.mean(f**2))), J)
        # drop the constant anti-self-dual part, already represented above
        inv.append(g - FormField.constant(2, split_g(g.mean()).asd, J.n))
    forms = inv + anti
    closed = max(closedness(a) for a in forms)
    jm = J.j_matrix
    inv_dev = max(float(np.max(np.abs(split_j(a.coeffs, jm).anti))) for a in inv)
    inv_dev = max([inv_dev] + [float(np.max(np.abs(split_j(a.coeffs, jm).invariant))) for a in anti])
    k = len(forms)
    flat = [drop_nyquist(a) for a in forms]
    gram = np.array([[integrate(wedge_fields(flat[i], flat[j])) for j in range(k)] for i in range(k)])
    b2 = betti_numbers(algebra_for("torus"))[2]
    ni = len(inv)
    l2 = np.array([np.sqrt(np.mean(np.sum(a.coeffs**2, axis=0))) for a in forms])
    # rank is judged on unit-norm classes; a class far below its representative counts as zero
    cls = np.array([np.linalg.norm(a.mean()) for a in forms])
    live = cls > RANK_ATOL * np.maximum(l2, 1.0)
    unit = np.where(live, 1.0 / np.where(live, cls, 1.0), 0.0)
    grank = numerical_rank(gram * np.outer(unit, unit)).rank
    cross = gram[:ni, ni:]
    cross_max = float(np.max(np.abs(cross))) if cross.size else 0.0
    scale = np.outer(l2[:ni], l2[ni:]) if cross.size else np.ones((0, 0))
    purity_ok = bool(np.all(np.abs(cross) <= tol * np.maximum(scale, 1e-300))) if cross.size else True
    report = DirectSumReport(gram, grank, ni, len(anti), cross_max, purity_ok, closed, inv_dev, forms)
    if k != b2 or grank != b2:
        raise RankDeficient(f"cup Gram matrix has rank {grank} on {k} forms, expected {b2}")
    return report


# ---------------------------------------------------------------------------
# invariant-form oracle on the nilmanifold


def invariant_type_dimensions(w, algebra=KT_ALGEBRA):
    """(h^+, h^-) for a constant structure computed inside the invariant complex.

    Closed invariant forms of each type are intersected with ker d and
    counted modulo exact invariant forms.
    """
    w = np.asarray(w, dtype=float)
    jm = -to_matrix(w)
    eye = np.eye(6)
    inv_proj = np.stack([split_j(v, jm).invariant for v in eye], axis=1)
    anti_proj = eye - inv_proj
    d2 = algebra.differential_matrix(2).astype(float)
    d1 = algebra.differential_matrix(1).astype(float)
    exact = d1  # columns span B^2
    rank_b = np.linalg.matrix_rank(exact)
    out = []
    for proj in (inv_proj, anti_proj):
        sub = orth(proj)
        closed_sub = sub @ null_space(d2 @ sub) if sub.size else sub
        out.append(int(np.linalg.matrix_rank(np.hstack([closed_sub, exact])) - rank_b))
    return tuple(out)


# ---------------------------------------------------------------------------
# worked examples as reusable checks


def prop_linear_check(l, s, u=0.0, v=0.0, f_sign=1, n=16):
    """h^- of J_{f,l,s} on the hyperKaehler torus computed two ways.

    Returns (3 - rank span{f', l', s'}, h^- from the orthogonality matrix),
    where l' = 2l, s' = 2s, f' = 2f + u l' + v s' (|beta|^2 = 2).
    """
    J = from_fls(l, s, f_sign, "torus", n)
    shape = J.grid_shape
    lv = np.broadcast_to(np.asarray(l.coeffs[0] if isinstance(l, FormField) else l, dtype=float), shape)
    sv = np.broadcast_to(np.asarray(s.coeffs[0] if isinstance(s, FormField) else s, dtype=float), shape)
    f = f_sign * np.sqrt((2.0 - 2.0 * (lv**2 + sv**2)) / 2.0)
    lp, sp = 2.0 * lv, 2.0 * sv
    fp = 2.0 * f + u * lp + v * sp
    idx = sample_points(shape)
    funcs = np.stack([fp.ravel()[idx], lp.ravel()[idx], sp.ravel()[idx]]) / np.sqrt(idx.size)
    via_rank = 3 - numerical_rank(funcs).rank
    return via_rank, h_minus(J).h_minus


def lee_hminus_check(alpha):
    """h^- of Lee's J_alpha for a constant anti-invariant alpha on the flat torus."""
    if alpha.model != "torus":
        raise ModelMismatch("the hyperKaehler check runs on the torus")
    return h_minus(lee_jalpha(alpha)).h_minus


@dataclass
class ScanRow:
    t: float
    h_plus: int
    h_minus: int


@dataclass
class ScanTable:
    rows: list
    consistent: bool

    def csv(self):
        lines = ["t,h_plus,h_minus"] + [f"{r.t!r},{r.h_plus},{r.h_minus}" for r in self.rows]
        return "\n".join(lines) + "\n"


def semicontinuity_scan(path, samples, radius=1.0):
    """Tabulate (t, h^+, h^-) along ``path`` on [0, radius].

    ``consistent`` records whether h^+ never drops below and h^- never
    rises above its value at t = 0.
    """
    rows = []
    for t in np.linspace(0.0, radius, samples):
        s = h_minus(path(float(t)))
        rows.append(ScanRow(float(t), s.h_plus, s.h_minus))
    base = rows[0]
    ok = all(r.h_plus >= base.h_plus and r.h_minus <= base.h_minus for r in rows)
    return ScanTable(rows, ok)


KODAIRA_PRESETS = ("rank0", "rank1", "rank2")


def kodaira_preset(name, n=16):
    """(l, s) sampled on the nilmanifold grid for one of the three table rows."""
    x, y, _ = KTGrid(n).coords()
    if name == "rank0":
        return np.zeros_like(x), np.zeros_like(x)
    if name == "rank1":
        return np.full_like(x, 0.5), np.zeros_like(x)
    if name == "rank2":
        return 0.1 * np.cos(2 * np.pi * x), 0.1 * np.sin(2 * np.pi * y)
    raise KeyError(name)


def kodaira_table(n=16):
    """Rows (rank of {l, s}, h^-, h^+) for the three presets on the nilmanifold."""
    rows = []
    for name in KODAIRA_PRESETS:
        l, s = kodaira_preset(name, n)
        idx = sample_points(l.shape)
        rank = numerical_rank(np.stack([l.ravel()[idx], s.ravel()[idx]]) / np.sqrt(idx.size)).rank
        summ = h_minus(from_fls(l, s, 1, "kt", n))
        rows.append({"preset": name, "rank": rank, "h_minus": summ.h_minus, "h_plus": summ.h_plus})
    return rows


def closed_anti_witness(J):
    """For each closed anti-invariant class: (form, |d form|, |d(J form)|)."""
    out = []
    for b in h_anti_basis(J):
        jb = FormField(2, j_on_anti(b.coeffs, J.j_matrix, tol=1e-8), J.model)
        out.append((b, d_spectral(b).sup(), d_spectral(jb).sup()))
    return out

