"""Function fields given as finite trigonometric sums.

A term is a mapping {"amp": a, "kind": "cos" | "sin" | "const", "k": [k1, ...]}
evaluating to a * cos(2 pi k.x) (or sin); a function is a list of terms.
"""

import numpy as np

from .models import grid_for


class TrigSpecError(ValueError):
    pass


def _term(term, ndim):
    if not isinstance(term, dict):
        raise TrigSpecError(f"term must be a table, got {term!r}")
    unknown = set(term) - {"amp", "kind", "k"}
    if unknown:
        raise TrigSpecError(f"unknown term keys {sorted(unknown)}")
    kind = term.get("kind", "const")
    if kind not in ("cos", "sin", "const"):
        raise TrigSpecError(f"unknown term kind {kind!r}")
    try:
        amp = float(term.get("amp", 1.0))
        k = [int(v) for v in term.get("k", [0] * ndim)]
    except (TypeError, ValueError) as exc:
        raise TrigSpecError(f"bad term {term!r}: {exc}") from exc
    if len(k) > ndim:
        raise TrigSpecError(f"wave vector {k} has more than {ndim} entries")
    return amp, kind, k + [0] * (ndim - len(k))


def bandwidth(terms):
    """Largest |k_i| appearing in a term list."""
    return max((abs(int(v)) for t in terms for v in t.get("k", [])), default=0)


def evaluate(terms, n, model="torus"):
    """Sample a term list (or a plain number) on the model grid."""
    coords = grid_for(model, n).coords()
    shape = coords[0].shape
    if isinstance(terms, (int, float)) and not isinstance(terms, bool):
        return np.full(shape, float(terms))
    if not isinstance(terms, list):
        raise TrigSpecError(f"expected a number or a list of terms, got {type(terms).__name__}")
    parsed = [_term(t, len(coords)) for t in terms]
    kmax = max((abs(v) for _, _, k in parsed for v in k), default=0)
    if kmax > n // 4:
        raise TrigSpecError(f"frequency {kmax} exceeds the band limit n/4 = {n // 4}")
    out = np.zeros(shape)
    for amp, kind, k in parsed:
        if kind == "const":
            out += amp
            continue
        phase = 2 * np.pi * sum(ki * x for ki, x in zip(k, coords))
        out += amp * (np.cos(phase) if kind == "cos" else np.sin(phase))
    return out


def random_terms(rng, ndim, count=3, kmax=2, amp=1.0):
    """Random band-limited term list with total amplitude at most ``amp``."""
    weights = rng.dirichlet(np.ones(count + 1))[:count] * amp
    terms = []
    for w in weights:
        k = [int(v) for v in rng.integers(-kmax, kmax + 1, size=ndim)]
        kind = ("cos", "sin")[int(rng.integers(2))]
        sign = 1.0 if rng.random() < 0.5 else -1.0
        terms.append({"amp": float(sign * w), "kind": kind, "k": k})
    return terms
