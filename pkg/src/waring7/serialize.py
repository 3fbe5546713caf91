"""JSON encodings for forms, frames and decompositions.

Complex numbers are ``[re, im]`` pairs. A form is::

    {"side": "primal", "nvars": 3, "degree": 4, "coeffs": [[re, im], ...]}

with coefficients in graded-lex order; on input the sparse variant
``{"terms": [{"exp": [a, b, c], "value": [re, im]}, ...]}`` is accepted too
(side defaults to primal, nvars and degree are read off the exponents).
"""

import json

import numpy as np

from .binary import frame_from_matrix
from .errors import PreconditionError
from .poly import DUAL, PRIMAL, Decomposition, DecompositionTerm, HomogeneousForm


def complex_to_json(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def complex_from_json(v):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise PreconditionError(f"bad complex value {v!r}")


def form_to_json(f):
    return {
        "side": f.side,
        "nvars": f.nvars,
        "degree": f.degree,
        "coeffs": [complex_to_json(c) for c in f.coeffs],
    }


def form_from_json(obj):
    if not isinstance(obj, dict):
        raise PreconditionError("form must be a JSON object")
    side = obj.get("side", PRIMAL)
    if side not in (PRIMAL, DUAL):
        raise PreconditionError(f"bad side {side!r}")
    if "terms" in obj:
        terms = obj["terms"]
        if not terms:
            raise PreconditionError("empty term list")
        exps = [tuple(int(e) for e in t["exp"]) for t in terms]
        nvars = int(obj.get("nvars", len(exps[0])))
        degree = int(obj.get("degree", sum(exps[0])))
        values = {}
        for e, t in zip(exps, terms):
            values[e] = values.get(e, 0) + complex_from_json(t["value"])
        return HomogeneousForm.from_terms(side, nvars, degree, values)
    try:
        nvars, degree = int(obj["nvars"]), int(obj["degree"])
        coeffs = [complex_from_json(c) for c in obj["coeffs"]]
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"malformed form: {exc}") from exc
    return HomogeneousForm(side, nvars, degree, coeffs)


def frame_from_json(obj):
    """``{"x0": [[re, im] x3], "x1": ..., "x2": ...}`` or ``{"x": [[...], [...], [...]]}``."""
    if not isinstance(obj, dict):
        raise PreconditionError("frame must be a JSON object")
    rows = obj["x"] if "x" in obj else [obj[f"x{i}"] for i in range(3)]
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise PreconditionError("frame needs three rows of three coefficients")
    return frame_from_matrix(np.array([[complex_from_json(c) for c in r] for r in rows]))


def decomposition_to_json(dec):
    return {
        "degree": dec.degree,
        "terms": [
            {"coeff": complex_to_json(t.coefficient), "direction": [complex_to_json(c) for c in t.direction.coeffs]}
            for t in dec.terms
        ],
        "residual": float(dec.target_residual),
        "provenance": [dict(p) for p in dec.provenance],
    }


def decomposition_from_json(obj):
    try:
        terms = [
            DecompositionTerm(
                complex_from_json(t["coeff"]),
                HomogeneousForm.linear(PRIMAL, [complex_from_json(c) for c in t["direction"]]),
            )
            for t in obj["terms"]
        ]
        return Decomposition(int(obj["degree"]), terms, float(obj.get("residual", 0.0)), obj.get("provenance", ()))
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"malformed decomposition: {exc}") from exc


def to_jsonable(obj):
    """Recursively convert numpy and complex values for ``json.dumps``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, HomogeneousForm):
        return form_to_json(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def dumps(obj, pretty=False):
    return json.dumps(to_jsonable(obj), indent=2 if pretty else None, sort_keys=True)
