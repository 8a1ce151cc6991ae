"""JSON file formats for spaces, loci, and basis oracles.

Space file: ``{"dim": n, "gram": [[...], ...], "basis_labels": [...]}``
(labels optional), or ``{"oracle": {...}}`` to materialize the Gram from
an oracle declaration.

Locus file: ``{"foci": [[...], ...], "alphas": [...], "c": r}``.

Oracle declaration: ``{"kind": "poly_integral", "interval": [a, b],
"scale": s, "dim": n}``, ``{"kind": "table", "entries": [[...], ...]}``,
or ``{"kind": "matrix_trace", "shape": [rows, cols]}``.
"""

from __future__ import annotations

import json

import numpy as np

from .locus import LocusSpec
from .spaces import GramSpace, validate_gram
from .transport import (
    BasisOracle,
    MatrixTraceOracle,
    PolyIntegralOracle,
    TableOracle,
    gram_from_basis,
)


def oracle_from_dict(data: dict) -> BasisOracle:
    try:
        kind = data["kind"]
    except KeyError:
        raise ValueError("oracle declaration needs a 'kind' field") from None
    if kind == "table":
        return TableOracle(entries=np.asarray(data["entries"], dtype=float))
    if kind == "poly_integral":
        a, b = data["interval"]
        return PolyIntegralOracle(
            lower=float(a),
            upper=float(b),
            dim=int(data["dim"]),
            scale=float(data.get("scale", 1.0)),
        )
    if kind == "matrix_trace":
        rows, cols = data["shape"]
        return MatrixTraceOracle(rows=int(rows), cols=int(cols))
    raise ValueError(f"unknown oracle kind {kind!r}")


def space_from_dict(data: dict) -> GramSpace:
    if "oracle" in data:
        return gram_from_basis(oracle_from_dict(data["oracle"]))
    if "gram" not in data:
        raise ValueError("space file needs a 'gram' matrix or an 'oracle' declaration")
    space = validate_gram(np.asarray(data["gram"], dtype=float))
    if "dim" in data and int(data["dim"]) != space.dim:
        raise ValueError(f"declared dim {data['dim']} does not match gram shape {space.dim}")
    return space


def locus_from_dict(data: dict) -> LocusSpec:
    try:
        return LocusSpec(
            foci=np.asarray(data["foci"], dtype=float),
            alphas=np.asarray(data["alphas"], dtype=float),
            c=float(data["c"]),
        )
    except KeyError as exc:
        raise ValueError(f"locus file is missing field {exc}") from None


def space_to_dict(space: GramSpace) -> dict:
    return {"dim": space.dim, "gram": space.gram.tolist()}


def locus_to_dict(spec: LocusSpec) -> dict:
    return {"foci": spec.foci.tolist(), "alphas": spec.alphas.tolist(), "c": spec.c}


def _load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_space(path) -> GramSpace:
    return space_from_dict(_load_json(path))


def load_locus(path) -> LocusSpec:
    return locus_from_dict(_load_json(path))


def load_oracle(path) -> BasisOracle:
    return oracle_from_dict(_load_json(path))
