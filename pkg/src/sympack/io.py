"""JSON readers and writers for matrices, homology classes and configurations.

Rationals travel as strings such as "24/25".  A matrix file looks like
{"dim": 4, "rows": [[...], ...], "role": "metric"}; the role is optional and
inferred from the entries when absent.  Integer and string entries load as
exact Fractions, anything with a float loads as float64.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .lattice import HomologyClass
from .projective import Configuration, GeometryError, ProjPoint
from .symplin import MAP_ROLES, SYMPLECTIC_ROLES, BilinearForm, InvariantError, LinearMap


class SchemaError(ValueError):
    """Malformed input file; the message names the offending field."""


def read_json(path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


def write_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _entry(x, where: str):
    if isinstance(x, bool):
        raise SchemaError(f"{where}: booleans are not matrix entries")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"{where}: cannot parse {x!r} as a rational") from None
    raise SchemaError(f"{where}: expected a number or rational string, got {type(x).__name__}")


def parse_matrix(d: Any, source: str = "<input>") -> np.ndarray:
    if not isinstance(d, dict):
        raise SchemaError(f"{source}: expected an object with 'dim' and 'rows'")
    if "rows" not in d:
        raise SchemaError(f"{source}: missing field 'rows'")
    rows = d["rows"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise SchemaError(f"{source}: 'rows' must be a non-empty list of lists")
    dim = d.get("dim", len(rows))
    if not isinstance(dim, int) or dim != len(rows):
        raise SchemaError(f"{source}: 'dim' is {dim!r} but there are {len(rows)} rows")
    vals = []
    for i, r in enumerate(rows):
        if len(r) != dim:
            raise SchemaError(f"{source}: rows[{i}] has {len(r)} entries, expected {dim}")
        vals.append([_entry(x, f"{source}: rows[{i}][{j}]") for j, x in enumerate(r)])
    if any(isinstance(x, float) for r in vals for x in r):
        return np.array([[float(x) for x in r] for r in vals])
    return np.array(vals, dtype=object)


def infer_role(a: np.ndarray, tol: float = 1e-9) -> str:
    f = a.astype(float)
    eye = np.eye(len(f))
    if np.allclose(f, f.T, atol=tol):
        return "metric"
    if np.allclose(f, -f.T, atol=tol):
        return "symplectic"
    if np.allclose(f @ f, -eye, atol=tol):
        return "acs"
    if np.allclose(f @ f, eye, atol=tol):
        return "involution"
    return "general"


def build_matrix(a: np.ndarray, role: Optional[str] = None, source: str = "<input>") -> Union[BilinearForm, LinearMap]:
    role = role or infer_role(a)
    try:
        if role in SYMPLECTIC_ROLES:
            return BilinearForm(a, role)
        if role in MAP_ROLES and role != "symplectomorphism":
            return LinearMap(a, role)
    except InvariantError as e:
        raise SchemaError(f"{source}: {role} matrix rejected: {e}") from None
    except ValueError as e:
        raise SchemaError(f"{source}: {e}") from None
    raise SchemaError(f"{source}: unsupported role {role!r}")


def load_matrix(path, role: Optional[str] = None) -> Union[BilinearForm, LinearMap]:
    """Read and validate a matrix; ``role`` overrides the file's own tag."""
    d = read_json(path)
    a = parse_matrix(d, str(path))
    tag = d.get("role")
    if tag is not None and role is not None and tag != role:
        raise SchemaError(f"{path}: file is tagged {tag!r} but a {role!r} matrix is expected")
    return build_matrix(a, role or tag, str(path))


def matrix_to_json(m, role: Optional[str] = None) -> dict:
    a = m.matrix if isinstance(m, (BilinearForm, LinearMap)) else np.asarray(m)
    if role is None and isinstance(m, (BilinearForm, LinearMap)):
        role = m.role
    if a.dtype == object:
        rows = [[str(Fraction(x)) for x in r] for r in a]
    else:
        rows = [[float(x) for x in r] for r in a]
    out = {"dim": len(rows), "rows": rows}
    if role:
        out["role"] = role
    return out


def class_to_json(c: HomologyClass) -> dict:
    return c.to_dict()


def class_from_json(d: Any) -> HomologyClass:
    try:
        return HomologyClass.from_dict(d)
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"bad homology class {d!r}: {e}") from None


def config_from_json(d: Any, source: str = "<input>") -> Configuration:
    if not isinstance(d, dict) or not isinstance(d.get("points"), list):
        raise SchemaError(f"{source}: expected an object with a 'points' list")
    pts = []
    for i, p in enumerate(d["points"]):
        if not isinstance(p, list) or len(p) != 3:
            raise SchemaError(f"{source}: points[{i}] must be a list of 3 coordinates")
        coords = []
        for j, x in enumerate(p):
            v = _entry(x, f"{source}: points[{i}][{j}]")
            if isinstance(v, float):
                raise SchemaError(f"{source}: points[{i}][{j}]: give coordinates as integers or rational strings")
            coords.append(v)
        try:
            pts.append(ProjPoint(tuple(coords)))
        except GeometryError as e:
            raise SchemaError(f"{source}: points[{i}]: {e}") from None
    try:
        return Configuration(tuple(pts))
    except GeometryError as e:
        raise SchemaError(f"{source}: {e}") from None


def load_config(path) -> Configuration:
    return config_from_json(read_json(path), str(path))


def config_to_json(cfg: Configuration) -> dict:
    return cfg.to_dict()
