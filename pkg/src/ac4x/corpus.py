"""Seeded families of structures used by the verification suite and tests."""

import numpy as np

from .acs import anti_preserving, from_fls, lee_jalpha, standard, tilde_jalpha
from .fiber import BETA, JBETA, expand
from .models import FormField
from .trig import evaluate, random_terms

NDIM = {"torus": 4, "kt": 3}


def random_function(rng, n, model="torus", amp=1.0, count=3, kmax=None):
    kmax = max(1, n // 4) if kmax is None else kmax
    return evaluate(random_terms(rng, NDIM[model], count, kmax, amp), n, model)


def anti_form(cb, cj, n, model="torus"):
    """cb * beta + cj * J(beta) with scalar or grid coefficients."""
    shape = (n,) * NDIM[model]
    cb = np.broadcast_to(np.asarray(cb, dtype=float), shape)
    cj = np.broadcast_to(np.asarray(cj, dtype=float), shape)
    nd = len(shape)
    return FormField(2, cb * expand(BETA, nd) + cj * expand(JBETA, nd), model)


def random_ls(rng, n, model="torus", bound=0.9):
    """Admissible (l, s) with l^2 + s^2 < bound^2, covering span ranks 0 to 2."""
    shape = (n,) * NDIM[model]
    a, b = bound * rng.dirichlet([1.0, 1.0, 1.0])[:2]
    mode = int(rng.integers(5))
    const = lambda c: np.full(shape, c)
    if mode == 0:
        return const(a * rng.uniform(-1, 1)), const(b * rng.uniform(-1, 1))
    if mode == 1:
        return random_function(rng, n, model, a), const(b * rng.uniform(-1, 1))
    if mode == 2:
        g = random_function(rng, n, model, a)
        return g, rng.uniform(-1, 1) * b / max(a, 1e-12) * g
    if mode == 3:
        return const(a * rng.uniform(-1, 1)), random_function(rng, n, model, b)
    return random_function(rng, n, model, a), random_function(rng, n, model, b)


def torus_corpus(rng, n=16, size=20):
    """At least ``size`` structures on the torus spanning every construction."""
    out = [standard(n)]
    makers = [
        lambda: from_fls(*random_ls(rng, n), sign=1, model="torus", n=n),
        lambda: lee_jalpha(anti_form(random_function(rng, n), random_function(rng, n), n)),
        lambda: lee_jalpha(anti_form(rng.uniform(-1, 1), rng.uniform(-1, 1), n)),
        lambda: tilde_jalpha(anti_form(random_function(rng, n, amp=2.0), random_function(rng, n), n)),
        lambda: anti_preserving(anti_form(rng.uniform(-1, 1), rng.uniform(-1, 1), n), random_function(rng, n, amp=0.6)),
    ]
    i = 0
    while len(out) < size:
        out.append(makers[i % len(makers)]())
        i += 1
    return out


def kt_corpus(rng, n=16, size=5):
    out = [standard(n, "kt"), from_fls(np.full((n,) * 3, 0.5), np.zeros((n,) * 3), 1, "kt", n)]
    while len(out) < size:
        out.append(from_fls(*random_ls(rng, n, "kt"), sign=1, model="kt", n=n))
    return out
