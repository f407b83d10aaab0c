"""JSON interchange formats.

Matrices serialize as {"rows": r, "cols": c, "data": [[re, im], ...]}
with the data flat in row-major order; Bloch vectors as {"d": d,
"lambda": [...]}; channels as {"d_in": ..., "d_out": ..., "kraus":
[matrix, ...]}.  Floats are emitted at 17 significant digits, which
round-trips IEEE doubles exactly, so identical inputs yield
byte-identical documents.
"""

from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass

import numpy as np

from .channels import Channel
from .cloners import Cloner


def _sig17(x: float) -> float:
    # 17 significant decimal digits uniquely determine a double.
    return float(f"{float(x):.17g}")


def matrix_to_obj(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    data = [[_sig17(z.real), _sig17(z.imag)] for z in a.reshape(-1)]
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": data}


def matrix_from_obj(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    data = obj["data"]
    if len(data) != rows * cols:
        raise ValueError(
            f"matrix data length {len(data)} does not match {rows}x{cols}"
        )
    flat = np.array([complex(re, im) for re, im in data])
    return flat.reshape(rows, cols)


def bloch_to_obj(lam, d: int) -> dict:
    lam = np.asarray(lam, dtype=float)
    return {"d": int(d), "lambda": [_sig17(x) for x in lam]}


def bloch_from_obj(obj: dict) -> tuple[int, np.ndarray]:
    d = int(obj["d"])
    lam = np.asarray(obj["lambda"], dtype=float)
    if lam.shape[0] != d * d - 1:
        raise ValueError(f"lambda length {lam.shape[0]} does not match d={d}")
    return d, lam


def channel_to_obj(chan: Channel) -> dict:
    return {
        "d_in": chan.d_in,
        "d_out": chan.d_out,
        "kraus": [matrix_to_obj(k) for k in chan.kraus],
    }


def channel_from_obj(obj: dict) -> Channel:
    chan = Channel.from_kraus([matrix_from_obj(k) for k in obj["kraus"]])
    if chan.d_in != int(obj["d_in"]) or chan.d_out != int(obj["d_out"]):
        raise ValueError("declared channel dimensions do not match the Kraus data")
    return chan


def cloner_to_obj(cloner: Cloner) -> dict:
    return {
        "d": cloner.d,
        "n": cloner.n,
        "m": cloner.m,
        "channel": channel_to_obj(cloner.channel),
    }


def cloner_from_obj(obj: dict) -> Cloner:
    return Cloner(
        d=int(obj["d"]),
        n=int(obj["n"]),
        m=int(obj["m"]),
        channel=channel_from_obj(obj["channel"]),
    )


def jsonable(value):
    """Recursively convert reports and arrays into JSON-ready structures."""
    if is_dataclass(value) and not isinstance(value, type):
        return jsonable(asdict(value))
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        if value.ndim == 2 and np.iscomplexobj(value):
            return matrix_to_obj(value)
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        return _sig17(float(value))
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, complex):
        return [_sig17(value.real), _sig17(value.imag)]
    return value


def dump_json(value) -> str:
    return json.dumps(jsonable(value), indent=2, sort_keys=True)


def load_json_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
