"""JSON schemas and file handling for every object the toolbox exchanges.

All matrices use one format: {"dims": [d1, ..., dn], "data": [[re, im], ...]}
with data row-major over the flattened index.  Serialization uses Python's
shortest round-trip float printing, so dump -> load is exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import ChoiChannel
from .dephasing import DephasingSuperParams
from .do import DOSuperParams, TABLE_NAMES as DO_TABLE_NAMES
from .du import DUSuperParams
from .linalg import MultipartiteOperator, matrix_from_json, matrix_to_json
from .pauli import PauliSuperParams
from .superchannels import SuperChoi, super_choi


class SchemaError(ValueError):
    """Input JSON does not match the expected schema."""


def _require(obj: dict, keys, what: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{what} must be a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise SchemaError(f"{what} is missing keys {missing}")


def _matrix(obj, what: str) -> MultipartiteOperator:
    try:
        return matrix_from_json(obj)
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"bad matrix for {what}: {exc}") from exc


def _table(obj, d: int, what: str) -> np.ndarray:
    m = _matrix(obj, what)
    if m.side != d * d:
        raise SchemaError(f"{what} must have side {d * d}, got {m.side}")
    return m.mat


def channel_to_json(ch: ChoiChannel) -> dict:
    return {"d_in": ch.d_in, "d_out": ch.d_out, "choi": matrix_to_json(ch.choi)}


def channel_from_json(obj: dict) -> ChoiChannel:
    _require(obj, ("d_in", "d_out", "choi"), "channel")
    d_in, d_out = int(obj["d_in"]), int(obj["d_out"])
    choi = _matrix(obj["choi"], "channel choi")
    if choi.dims != (d_in, d_out):
        raise SchemaError(
            f"choi dims {choi.dims} do not match d_in={d_in}, d_out={d_out}"
        )
    return ChoiChannel(d_in, d_out, choi)


def superchannel_to_json(s: SuperChoi) -> dict:
    return {
        "dims": {"A0": s.dA0, "A1": s.dA1, "B0": s.dB0, "B1": s.dB1},
        "choi": matrix_to_json(s.choi),
    }


def superchannel_from_json(obj: dict) -> SuperChoi:
    _require(obj, ("dims", "choi"), "superchannel")
    _require(obj["dims"], ("A0", "A1", "B0", "B1"), "superchannel dims")
    dims = tuple(int(obj["dims"][k]) for k in ("A0", "A1", "B0", "B1"))
    choi = _matrix(obj["choi"], "superchannel choi")
    if choi.dims != dims:
        raise SchemaError(f"choi dims {choi.dims} do not match declared {dims}")
    return super_choi(choi.mat, dims)


def _pair_table_json(d: int, table: np.ndarray) -> dict:
    return matrix_to_json(MultipartiteOperator((d, d), table))


def du_params_to_json(p: DUSuperParams) -> dict:
    out = {"d": p.d}
    for name in "ABCD":
        out[name] = _pair_table_json(p.d, getattr(p, name).astype(complex))
    return out


def du_params_from_json(obj: dict) -> DUSuperParams:
    _require(obj, ("d", "A", "B", "C", "D"), "du parameters")
    d = int(obj["d"])
    tables = [_table(obj[name], d, f"table {name}") for name in "ABCD"]
    if np.abs(tables[0].imag).max() > 0:
        raise SchemaError("table A must be real")
    try:
        return DUSuperParams(d, tables[0].real, *tables[1:])
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def do_params_to_json(p: DOSuperParams) -> dict:
    out = {"d": p.d}
    for name in DO_TABLE_NAMES:
        out[name] = _pair_table_json(p.d, getattr(p, name).astype(complex))
    return out


def do_params_from_json(obj: dict) -> DOSuperParams:
    _require(obj, ("d",) + DO_TABLE_NAMES, "do parameters")
    d = int(obj["d"])
    tables = [_table(obj[name], d, f"table {name}") for name in DO_TABLE_NAMES]
    if np.abs(tables[0].imag).max() > 0:
        raise SchemaError("table A must be real")
    try:
        return DOSuperParams(d, tables[0].real, *tables[1:])
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def dephasing_to_json(p: DephasingSuperParams) -> dict:
    return {"d": p.d, "M_big": _pair_table_json(p.d, p.M_big)}


def dephasing_from_json(obj: dict) -> DephasingSuperParams:
    _require(obj, ("d", "M_big"), "dephasing parameters")
    d = int(obj["d"])
    return DephasingSuperParams(d, _table(obj["M_big"], d, "M_big"))


def realization_from_json(obj: dict):
    """Block-unitary dilation data: environment unitaries and state."""
    _require(obj, ("e", "U", "V", "psi"), "realization")
    e = int(obj["e"])
    us = [_matrix(u, "U").mat for u in obj["U"]]
    vs = [_matrix(v, "V").mat for v in obj["V"]]
    for w in (*us, *vs):
        if w.shape != (e, e):
            raise SchemaError(f"realization unitaries must be {e}x{e}")
    psi = np.array([complex(re, im) for re, im in obj["psi"]])
    if psi.shape != (e,):
        raise SchemaError(f"psi must have {e} entries")
    return us, vs, psi


def pauli_to_json(p: PauliSuperParams) -> dict:
    return {"pi": [[float(v) for v in row] for row in p.pi]}


def pauli_from_json(obj: dict) -> PauliSuperParams:
    _require(obj, ("pi",), "pauli parameters")
    pi = np.asarray(obj["pi"], dtype=float)
    try:
        return PauliSuperParams(pi)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


_KIND_KEYS = {
    "superchannel": {"dims", "choi"},
    "channel": {"d_in", "d_out", "choi"},
    "du": {"d", "A", "B", "C", "D"},
    "do": {"d"} | set(DO_TABLE_NAMES),
    "dephasing": {"d", "M_big"},
    "pauli": {"pi"},
}


def detect_kind(obj: dict) -> str:
    """Identify which schema a parsed JSON object matches (largest match wins)."""
    if not isinstance(obj, dict):
        raise SchemaError("expected a JSON object")
    keys = set(obj)
    for kind in ("do", "du", "dephasing", "pauli", "channel", "superchannel"):
        if _KIND_KEYS[kind] <= keys:
            return kind
    raise SchemaError(f"cannot identify object with keys {sorted(keys)}")


def load_json(path) -> dict:
    """Parse a JSON file; decode errors carry line/column positions."""
    text = Path(path).read_text()
    return json.loads(text)


def dump_json(obj: dict, path=None) -> str:
    """Deterministic serialization (fixed key order, shortest-float repr)."""
    text = json.dumps(obj, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
