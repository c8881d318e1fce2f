"""JSON file formats.

Rationals travel as strings "p/q" (or "p" when the denominator is 1), so
every file is exact; floating values never appear except the bound
estimate, which is labeled approximate.  Writing is canonical (sorted
keys, two-space indent, trailing newline), so reading a canonical file and
writing it back is byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import ParseError
from .linalg import Mat, Vec, identity, vec
from .relations import LinearRelation, relation_from_graph_vectors
from .spaces import InnerProductSpace, Subspace, span, standard_space

# ---------------------------------------------------------------- rationals


def rational_to_str(x: Fraction) -> str:
    return str(x)


def parse_rational(s: Any, field: str) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ParseError(f"{field}: expected a rational string, got {type(s).__name__}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{field}: invalid rational {s!r} ({exc})") from None


def vector_to_json(v: Vec) -> list[str]:
    return [rational_to_str(x) for x in v]


def parse_vector(data: Any, field: str) -> Vec:
    if not isinstance(data, list):
        raise ParseError(f"{field}: expected a list of rationals")
    return vec([parse_rational(x, f"{field}[{i}]") for i, x in enumerate(data)])


def matrix_to_json(m: Mat) -> list[list[str]]:
    return [[rational_to_str(x) for x in row] for row in m.data]


def parse_matrix(data: Any, field: str) -> Mat:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError(f"{field}: expected a list of rows")
    rows = [parse_vector(r, f"{field}[{i}]") for i, r in enumerate(data)]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ParseError(f"{field}: ragged rows")
    return Mat(len(rows), len(rows[0]) if rows else 0, tuple(rows))

# ------------------------------------------------------------------- spaces


def space_to_json(space: InnerProductSpace) -> dict:
    out: dict[str, Any] = {"dim": space.dim}
    if space.gram != identity(space.dim):
        out["gram"] = matrix_to_json(space.gram)
    return out


def parse_space(data: Any, field: str = "space") -> InnerProductSpace:
    if not isinstance(data, dict) or "dim" not in data:
        raise ParseError(f"{field}: expected an object with a 'dim' entry")
    dim = data["dim"]
    if not isinstance(dim, int) or dim < 0:
        raise ParseError(f"{field}.dim: expected a nonnegative integer")
    if "gram" not in data:
        return standard_space(dim)
    gram = parse_matrix(data["gram"], f"{field}.gram")
    try:
        return InnerProductSpace(dim, gram)
    except ValueError as exc:
        raise ParseError(f"{field}.gram: {exc}") from None


def subspace_to_json(sub: Subspace) -> dict:
    return {"basis": [vector_to_json(b) for b in sub.basis_vectors()]}


def parse_subspace(data: Any, space: InnerProductSpace, field: str = "subspace") -> Subspace:
    if not isinstance(data, dict) or "basis" not in data:
        raise ParseError(f"{field}: expected an object with a 'basis' entry")
    vecs = [parse_vector(v, f"{field}.basis[{i}]") for i, v in enumerate(data["basis"])]
    for i, v in enumerate(vecs):
        if len(v) != space.dim:
            raise ParseError(f"{field}.basis[{i}]: wrong length for ambient dimension {space.dim}")
    return span(space, vecs)

# ---------------------------------------------------------------- relations


def relation_to_json(rel: LinearRelation) -> dict:
    return {
        "from": space_to_json(rel.src),
        "to": space_to_json(rel.dst),
        "graph_basis": [vector_to_json(v) for v in rel.graph.basis_vectors()],
    }


def parse_relation(data: Any, field: str = "relation") -> LinearRelation:
    if not isinstance(data, dict):
        raise ParseError(f"{field}: expected an object")
    for key in ("from", "to", "graph_basis"):
        if key not in data:
            raise ParseError(f"{field}.{key}: missing")
    src = parse_space(data["from"], f"{field}.from")
    dst = parse_space(data["to"], f"{field}.to")
    vecs = [parse_vector(v, f"{field}.graph_basis[{i}]") for i, v in enumerate(data["graph_basis"])]
    for i, v in enumerate(vecs):
        if len(v) != src.dim + dst.dim:
            raise ParseError(
                f"{field}.graph_basis[{i}]: wrong length, expected {src.dim + dst.dim}"
            )
    return relation_from_graph_vectors(src, dst, vecs)

# ---------------------------------------------------------------- repmaps


def repmap_to_json(q) -> dict:
    return {
        "c": rational_to_str(q.base_point),
        "domain_basis": [vector_to_json(b) for b in q.domain.basis_vectors()],
        "matrix": matrix_to_json(q.matrix),
        "codomain_gram": matrix_to_json(q.codomain.gram),
        "form_matrix": matrix_to_json(q.form_matrix),
    }


def extension_report_to_json(report) -> dict:
    out = {
        "relation": relation_to_json(report.relation),
        "c": rational_to_str(report.c),
        "friedrichs": relation_to_json(report.friedrichs),
        "weak_friedrichs": relation_to_json(report.weak_friedrichs),
        "krein": relation_to_json(report.krein),
        "weak_krein": relation_to_json(report.weak_krein),
        "checks": [
            {"name": ch.name, "passed": ch.passed, **({"witness": ch.witness} if ch.witness else {})}
            for ch in report.checks
        ],
    }
    if report.bound is not None:
        out["bound"] = {
            "certified_lo": rational_to_str(report.bound.lo),
            "refuted_hi": rational_to_str(report.bound.hi),
            "estimate_approximate": report.bound.estimate,
        }
    else:
        out["bound"] = None
    return out

# ------------------------------------------------------------------- files


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None


def read_relation(path: str) -> LinearRelation:
    return parse_relation(load_json(path), field=path)


def write_relation(path: str, rel: LinearRelation) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_dumps(relation_to_json(rel)))


def relation_witness(rel: LinearRelation) -> str:
    """Compact one-line serialization for check witnesses."""
    return json.dumps(relation_to_json(rel), sort_keys=True)


def vector_witness(v: Vec) -> str:
    return json.dumps(vector_to_json(v))
