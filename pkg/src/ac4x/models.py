"""Model 4-manifolds and their exterior calculus.

Two models are supported:

``torus``
    The flat unit 4-torus sampled on an ``n**4`` periodic grid.  Derivatives
    are Fourier multipliers, so d and the codifferential are exact on
    trigonometric polynomials the grid resolves.

``kt``
    The Kodaira-Thurston nilmanifold with invariant coframe e1..e4,
    de1 = de2 = de3 = 0, de4 = e1 ^ e2.  Coefficient functions are sampled
    on an ``n**3`` grid in (x, y, t) and are independent of the fiber
    coordinate z; the frame derivatives E1, E2, E3 then act as plain
    partial derivatives in x, y, t and E4 acts trivially.
"""

from dataclasses import dataclass
from functools import cache, lru_cache

import numpy as np
from scipy.linalg import null_space

from .errors import DegreeOutOfRange, ModelMismatch, NotClosed
from .exterior import _INDEX, DIM, NCOMP, STAR, WEDGE1, _sort_sign, basis, wedge_matrix

MODELS = ("torus", "kt")

# spatial axis -> coframe index carrying its derivative
_FRAME_AXES = {"torus": (0, 1, 2, 3), "kt": (0, 1, 2)}

CLOSED_TOL = 1e-8


# ---------------------------------------------------------------------------
# grids and fields


@dataclass(frozen=True)
class TorusGrid:
    n: int = 16

    def __post_init__(self):
        if self.n < 4 or self.n & (self.n - 1):
            raise ValueError(f"grid size must be a power of two >= 4, got {self.n}")

    @property
    def spacing(self):
        return 1.0 / self.n

    @property
    def npoints(self):
        return self.n**4

    def coords(self):
        """Coordinate arrays (x1, x2, x3, x4), each of shape (n, n, n, n)."""
        x = np.arange(self.n) / self.n
        return np.meshgrid(x, x, x, x, indexing="ij")


@dataclass(frozen=True)
class KTGrid:
    """Sampling grid in (x, y, t) for z-independent functions on the nilmanifold."""

    n: int = 16

    def __post_init__(self):
        if self.n < 4 or self.n & (self.n - 1):
            raise ValueError(f"grid size must be a power of two >= 4, got {self.n}")

    @property
    def npoints(self):
        return self.n**3

    def coords(self):
        x = np.arange(self.n) / self.n
        return np.meshgrid(x, x, x, indexing="ij")


def grid_for(model, n):
    if model == "torus":
        return TorusGrid(n)
    if model == "kt":
        return KTGrid(n)
    raise ValueError(f"unknown model {model!r}")


class FormField:
    """A differential form of fixed degree sampled on a model grid.

    ``coeffs`` has shape ``(ncomp, *grid)`` with components ordered as in
    :mod:`ac4x.exterior`.  The array is copied and frozen on construction.
    """

    __array_priority__ = 1000

    def __init__(self, degree, coeffs, model="torus"):
        if model not in MODELS:
            raise ValueError(f"unknown model {model!r}")
        if not 0 <= degree <= DIM:
            raise DegreeOutOfRange(f"degree {degree} outside 0..4")
        coeffs = np.array(coeffs, dtype=float)
        nax = len(_FRAME_AXES[model])
        if coeffs.ndim != nax + 1 or coeffs.shape[0] != NCOMP[degree]:
            raise ValueError(
                f"{model} {degree}-form needs shape ({NCOMP[degree]}, n x {nax}), got {coeffs.shape}"
            )
        if len(set(coeffs.shape[1:])) != 1:
            raise ValueError("grid must have the same size along every axis")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("form coefficients must be finite")
        coeffs.setflags(write=False)
        self.degree = degree
        self.coeffs = coeffs
        self.model = model

    @property
    def n(self):
        return self.coeffs.shape[1]

    @property
    def grid_shape(self):
        return self.coeffs.shape[1:]

    @property
    def ncomp(self):
        return self.coeffs.shape[0]

    def __repr__(self):
        return f"FormField(degree={self.degree}, model={self.model!r}, n={self.n})"

    # -- constructors

    @classmethod
    def constant(cls, degree, values, n, model="torus"):
        values = np.asarray(values, dtype=float)
        shape = (NCOMP[degree],) + (n,) * len(_FRAME_AXES[model])
        return cls(degree, np.broadcast_to(values.reshape((-1,) + (1,) * (len(shape) - 1)), shape), model)

    @classmethod
    def zeros(cls, degree, n, model="torus"):
        return cls.constant(degree, np.zeros(NCOMP[degree]), n, model)

    @classmethod
    def scalar(cls, values, model="torus"):
        return cls(0, np.asarray(values, dtype=float)[None], model)

    @classmethod
    def from_fiber_field(cls, a, model="torus"):
        """Wrap a raw (6, *grid) coefficient array as a 2-form."""
        return cls(2, a, model)

    # -- arithmetic

    def _compatible(self, other):
        if not isinstance(other, FormField):
            return False
        if other.model != self.model or other.grid_shape != self.grid_shape:
            raise ModelMismatch("forms live on different models or grids")
        if other.degree != self.degree:
            raise DegreeOutOfRange(f"cannot add forms of degree {self.degree} and {other.degree}")
        return True

    def __add__(self, other):
        if self._compatible(other):
            return FormField(self.degree, self.coeffs + other.coeffs, self.model)
        return NotImplemented

    def __sub__(self, other):
        if self._compatible(other):
            return FormField(self.degree, self.coeffs - other.coeffs, self.model)
        return NotImplemented

    def __neg__(self):
        return FormField(self.degree, -self.coeffs, self.model)

    def __mul__(self, other):
        """Multiply by a number, a grid array, or a 0-form."""
        if isinstance(other, FormField):
            if other.degree != 0:
                return NotImplemented
            other = other.coeffs[0]
        return FormField(self.degree, self.coeffs * np.asarray(other, dtype=float), self.model)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1.0 / np.asarray(other, dtype=float))

    def sup(self):
        """Sup over the grid of the pointwise Euclidean coefficient norm."""
        return float(np.sqrt(np.max(np.sum(self.coeffs**2, axis=0))))

    def mean(self):
        """Coefficientwise average over the grid (the harmonic part on the torus)."""
        return self.coeffs.reshape(self.ncomp, -1).mean(axis=1)


def scalar_field(values, model="torus"):
    return FormField.scalar(values, model)


# ---------------------------------------------------------------------------
# spectral derivatives


@lru_cache(maxsize=16)
def _wavenumbers(n, naxes):
    # integer frequencies on the rfftn layout; the Nyquist mode is dropped
    full = np.fft.fftfreq(n, 1.0 / n)
    half = np.fft.rfftfreq(n, 1.0 / n)
    full[np.abs(full) == n // 2] = 0.0
    half[np.abs(half) == n // 2] = 0.0
    ks = []
    for ax in range(naxes):
        k = half if ax == naxes - 1 else full
        shape = [1] * naxes
        shape[ax] = k.size
        ks.append(k.reshape(shape))
    return tuple(ks)


def _spatial_axes(arr):
    return tuple(range(1, arr.ndim))


def fft_fields(arr):
    return np.fft.rfftn(arr, axes=_spatial_axes(arr))


def ifft_fields(hat, grid_shape):
    return np.fft.irfftn(hat, s=grid_shape, axes=tuple(range(1, hat.ndim)))


def partials(arr):
    """Spectral partial derivatives of every component along every spatial axis."""
    arr = np.asarray(arr, dtype=float)
    grid_shape = arr.shape[1:]
    ks = _wavenumbers(grid_shape[0], len(grid_shape))
    hat = fft_fields(arr)
    return [ifft_fields(2j * np.pi * k * hat, grid_shape) for k in ks]


@lru_cache(maxsize=16)
def _nyquist_mask(n, naxes):
    full = np.abs(np.fft.fftfreq(n, 1.0 / n)) != n // 2
    half = np.abs(np.fft.rfftfreq(n, 1.0 / n)) != n // 2
    mask = np.ones((1,) * naxes, dtype=bool)
    for ax in range(naxes):
        k = half if ax == naxes - 1 else full
        shape = [1] * naxes
        shape[ax] = k.size
        mask = mask & k.reshape(shape)
    return mask


def drop_nyquist(a):
    """Remove Nyquist modes, which the spectral derivative cannot see."""
    shape = a.grid_shape
    hat = fft_fields(a.coeffs) * _nyquist_mask(shape[0], len(shape))
    return FormField(a.degree, ifft_fields(hat, shape), a.model)


def laplacian_symbol(n, naxes=4):
    """(2 pi |k|)^2 on the rfftn layout, Nyquist excluded."""
    ks = _wavenumbers(n, naxes)
    return sum((2 * np.pi * k) ** 2 for k in ks)


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg complex


@dataclass(frozen=True)
class LieAlgebra4:
    """Four-dimensional Lie algebra through its coframe structure equations.

    ``structure[k]`` holds the degree-2 coefficients of de^{k+1}.
    """

    name: str
    structure: tuple

    def differential_matrix(self, k):
        return _ce_matrix(self.structure, k)


@cache
def _ce_matrix(structure, k):
    if not 0 <= k < DIM:
        raise DegreeOutOfRange(f"CE differential defined for degrees 0..3, got {k}")
    struct = np.array(structure, dtype=np.int64)
    pairs = basis(2)
    out = np.zeros((NCOMP[k + 1], NCOMP[k]), dtype=np.int64)
    for col, idx in enumerate(basis(k)):
        for m, gen in enumerate(idx):
            for c, pair in enumerate(pairs):
                coef = struct[gen, c]
                if not coef:
                    continue
                seq = idx[:m] + pair + idx[m + 1 :]
                s = _sort_sign(seq)
                if s:
                    row = _INDEX[k + 1][tuple(sorted(seq))]
                    out[row, col] += (-1) ** m * s * coef
    out.setflags(write=False)
    return out


def _structure(entries):
    rows = [[0] * 6 for _ in range(4)]
    for gen, pair, coef in entries:
        rows[gen - 1][basis(2).index((pair[0] - 1, pair[1] - 1))] = coef
    return tuple(tuple(r) for r in rows)


ABELIAN = LieAlgebra4("abelian", _structure([]))
KT_ALGEBRA = LieAlgebra4("kodaira-thurston", _structure([(4, (1, 2), 1)]))

_ALGEBRA = {"torus": ABELIAN, "kt": KT_ALGEBRA}


def algebra_for(model):
    return _ALGEBRA[model]


def ce_differential(k, coeffs, algebra=KT_ALGEBRA):
    """Apply the invariant differential to degree-k coefficients."""
    return algebra.differential_matrix(k) @ np.asarray(coeffs, dtype=float)


def _gram_schmidt(candidates, space, tol=1e-10):
    """Orthonormal basis of ``space`` (columns) obtained by projecting candidates in order."""
    proj = space @ space.T
    out = []
    for v in candidates:
        w = proj @ v
        for u in out:
            w = w - (u @ w) * u
        nrm = np.linalg.norm(w)
        if nrm > tol:
            out.append(w / nrm)
        if len(out) == space.shape[1]:
            break
    return np.array(out).reshape(len(out), proj.shape[0])


def ce_cohomology(k, algebra=KT_ALGEBRA, part=None):
    """Betti number and orthonormal invariant harmonic basis in degree k.

    ``part`` may be ``"sd"`` or ``"asd"`` for k = 2 to restrict to
    self-dual or anti-self-dual harmonic forms.  Basis vectors are chosen
    canonically by projecting the standard basis in order.
    """
    rows = []
    if k < DIM:
        rows.append(algebra.differential_matrix(k).astype(float))
    if k > 0:
        rows.append(algebra.differential_matrix(k - 1).T.astype(float))
    candidates = np.eye(NCOMP[k])
    if part is not None:
        if k != 2:
            raise DegreeOutOfRange("self-dual splitting only applies to 2-forms")
        from .fiber import ASD_BASIS, SD_BASIS

        sign = 1 if part == "sd" else -1
        rows.append(STAR[2] - sign * np.eye(6))
        candidates = SD_BASIS if part == "sd" else ASD_BASIS
    space = null_space(np.vstack(rows)) if rows else np.eye(NCOMP[k])
    harmonic = _gram_schmidt(candidates, space)
    return harmonic.shape[0], harmonic


def betti_numbers(algebra=KT_ALGEBRA):
    """Betti numbers from kernel and image dimensions of the CE matrices."""
    out = []
    for k in range(DIM + 1):
        ker = NCOMP[k] - (np.linalg.matrix_rank(algebra.differential_matrix(k)) if k < DIM else 0)
        im = np.linalg.matrix_rank(algebra.differential_matrix(k - 1)) if k > 0 else 0
        out.append(int(ker - im))
    return tuple(out)


def harmonic_sd_basis(model):
    """Orthonormal harmonic self-dual 2-forms (constant coefficients)."""
    return ce_cohomology(2, algebra_for(model), "sd")[1]


def harmonic_asd_basis(model):
    return ce_cohomology(2, algebra_for(model), "asd")[1]


# ---------------------------------------------------------------------------
# exterior calculus on fields


def d_spectral(a):
    """Exterior derivative of a sampled form.

    On the torus this is a pure Fourier multiplier; on the nilmanifold the
    invariant structure term is added pointwise.
    """
    if a.degree >= DIM:
        raise DegreeOutOfRange("d is defined for degrees 0..3")
    k = a.degree
    out = np.zeros((NCOMP[k + 1],) + a.grid_shape)
    for frame, da in zip(_FRAME_AXES[a.model], partials(a.coeffs)):
        out += np.tensordot(WEDGE1[k][frame].astype(float), da, axes=(1, 0))
    if a.model == "kt":
        out += np.tensordot(KT_ALGEBRA.differential_matrix(k).astype(float), a.coeffs, axes=(1, 0))
    return FormField(k + 1, out, a.model)


def delta_spectral(a):
    """Codifferential on the flat torus: minus the sum of i_{e_j} d/dx_j."""
    if a.model != "torus":
        raise ModelMismatch("the codifferential is only provided on the flat torus")
    if a.degree < 1:
        raise DegreeOutOfRange("the codifferential is defined for degrees 1..4")
    k = a.degree
    out = np.zeros((NCOMP[k - 1],) + a.grid_shape)
    for frame, da in enumerate(partials(a.coeffs)):
        out -= np.tensordot(WEDGE1[k - 1][frame].T.astype(float), da, axes=(1, 0))
    return FormField(k - 1, out, a.model)


def star_field(a):
    return FormField(DIM - a.degree, np.tensordot(STAR[a.degree].astype(float), a.coeffs, axes=(1, 0)), a.model)


def wedge_fields(a, b):
    if a.model != b.model or a.grid_shape != b.grid_shape:
        raise ModelMismatch("forms live on different models or grids")
    if a.degree + b.degree > DIM:
        raise DegreeOutOfRange("wedge product exceeds top degree")
    w = wedge_matrix(a.degree, b.degree).astype(float)
    return FormField(a.degree + b.degree, np.einsum("cij,i...,j...->c...", w, a.coeffs, b.coeffs), a.model)


def integrate(a):
    """Integral of a top form; both model manifolds have unit volume."""
    if a.degree != DIM:
        raise DegreeOutOfRange("only 4-forms can be integrated")
    return float(np.mean(a.coeffs[0]))


def l2_inner(a, b):
    """L2 inner product for the flat metric and orthonormal coframe."""
    return float(np.mean(np.sum(a.coeffs * b.coeffs, axis=0)))


def closedness(a):
    return d_spectral(a).sup() if a.degree < DIM else 0.0


def cup(a, b, tol=CLOSED_TOL):
    """Cup product of the classes of two closed 2-forms."""
    if a.degree != 2 or b.degree != 2:
        raise DegreeOutOfRange("cup pairs 2-forms")
    for name, form in (("first", a), ("second", b)):
        res = closedness(form)
        if res > tol:
            raise NotClosed(f"{name} argument has |d| = {res:.3g} > {tol:g}")
    return integrate(wedge_fields(drop_nyquist(a), drop_nyquist(b)))


# ---------------------------------------------------------------------------
# random band-limited data


def random_field(degree, n, rng, kmax=2, model="torus", amplitude=1.0):
    """Random real trigonometric polynomial form with frequencies |k_i| <= kmax."""
    naxes = len(_FRAME_AXES[model])
    shape = (NCOMP[degree],) + (n,) * naxes
    hat = np.zeros(shape, dtype=complex)
    freqs = np.r_[0 : kmax + 1, n - kmax : n]
    idx = np.ix_(np.arange(shape[0]), *([freqs] * naxes))
    hat[idx] = rng.standard_normal(hat[idx].shape) + 1j * rng.standard_normal(hat[idx].shape)
    vals = np.real(np.fft.ifftn(hat, axes=tuple(range(1, naxes + 1))))
    scale = np.max(np.abs(vals))
    return FormField(degree, amplitude * vals / scale, model)
