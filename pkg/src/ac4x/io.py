"""Serialization: form fields as bit-exact JSON, summaries and CSV tables.

Field values are stored as float.hex strings so a round trip reproduces
every bit; each component is flattened with the first grid axis fastest.
"""

import json
from pathlib import Path

import numpy as np

from .acs import AcsField
from .exterior import basis, label
from .models import FormField

ORDERING = "row-major x1-fastest"


def formfield_to_dict(a):
    comps = [label(idx) for idx in basis(a.degree)]
    values = [[float(v).hex() for v in c.ravel(order="F")] for c in a.coeffs]
    return {
        "header": {
            "model": a.model,
            "degree": a.degree,
            "n": a.n,
            "components": comps,
            "ordering": ORDERING,
        },
        "values": values,
    }


def formfield_from_dict(d):
    hdr = d["header"]
    if hdr.get("ordering") != ORDERING:
        raise ValueError(f"unsupported ordering {hdr.get('ordering')!r}")
    ndim = 4 if hdr["model"] == "torus" else 3
    shape = (hdr["n"],) * ndim
    coeffs = np.stack(
        [np.array([float.fromhex(v) for v in comp]).reshape(shape, order="F") for comp in d["values"]]
    )
    if len(coeffs) != len(hdr["components"]):
        raise ValueError("component count does not match the header")
    return FormField(hdr["degree"], coeffs, hdr["model"])


def acs_to_dict(J):
    d = formfield_to_dict(J.omega_unit_field)
    d["header"]["provenance"] = J.provenance
    return d


def acs_from_dict(d):
    return AcsField(formfield_from_dict(d), d["header"].get("provenance", "custom"))


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def dumps(obj):
    """Deterministic JSON: sorted keys, shortest round-trip floats."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def save_formfield(path, a):
    d = acs_to_dict(a) if isinstance(a, AcsField) else formfield_to_dict(a)
    write_json(path, d)


def load_formfield(path):
    d = json.loads(Path(path).read_text())
    return acs_from_dict(d) if "provenance" in d["header"] else formfield_from_dict(d)


def table_csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) if isinstance(v, (float, np.floating)) else str(v) for v in row))
    return "\n".join(lines) + "\n"
