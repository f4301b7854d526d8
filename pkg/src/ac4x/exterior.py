"""Constant tables for the exterior algebra of R^4.

Forms of degree k are stored as coefficient vectors on the basis of
increasing index tuples, e.g. degree 2 uses (e12, e13, e14, e23, e24, e34)
with orientation e1234.  Indices are zero-based internally.
"""

from itertools import combinations

import numpy as np

DIM = 4


def basis(k):
    """Increasing index tuples spanning the degree-k forms."""
    return list(combinations(range(DIM), k))


NCOMP = tuple(len(basis(k)) for k in range(DIM + 1))

_INDEX = [{idx: pos for pos, idx in enumerate(basis(k))} for k in range(DIM + 1)]


def _sort_sign(seq):
    """Sign of the permutation sorting ``seq``; 0 on a repeated index."""
    seq = list(seq)
    if len(set(seq)) < len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign


def _wedge_vector_matrices(k):
    # E[i] maps degree-k coefficients to those of e^i ^ (.)
    out = np.zeros((DIM, NCOMP[k + 1], NCOMP[k]), dtype=np.int64)
    for i in range(DIM):
        for col, idx in enumerate(basis(k)):
            seq = (i,) + idx
            s = _sort_sign(seq)
            if s:
                out[i, _INDEX[k + 1][tuple(sorted(seq))], col] = s
    return out


def _star_matrix(k):
    out = np.zeros((NCOMP[DIM - k], NCOMP[k]), dtype=np.int64)
    for col, idx in enumerate(basis(k)):
        rest = tuple(i for i in range(DIM) if i not in idx)
        out[_INDEX[DIM - k][rest], col] = _sort_sign(idx + rest)
    return out


# WEDGE1[k][i]: e^i ^ (.) on degree-k forms, k = 0..3
WEDGE1 = [_wedge_vector_matrices(k) for k in range(DIM)]
# Flat Hodge star on degree-k forms, k = 0..4
STAR = [_star_matrix(k) for k in range(DIM + 1)]


def wedge_matrix(p, q):
    """Tensor W with (a ^ b)_c = sum W[c, i, j] a_i b_j for degrees p, q."""
    out = np.zeros((NCOMP[p + q], NCOMP[p], NCOMP[q]), dtype=np.int64)
    for i, I in enumerate(basis(p)):
        for j, J in enumerate(basis(q)):
            s = _sort_sign(I + J)
            if s:
                out[_INDEX[p + q][tuple(sorted(I + J))], i, j] = s
    return out


def label(idx):
    return "e" + "".join(str(i + 1) for i in idx)


def index_of(*one_based):
    """Component position of e^{i1 i2 ...} given one-based increasing indices."""
    return _INDEX[len(one_based)][tuple(i - 1 for i in one_based)]
