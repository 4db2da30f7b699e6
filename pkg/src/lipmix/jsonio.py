"""Deterministic JSON serialization for run artifacts.

Outputs must be byte-identical across runs with the same inputs, so floats
are written with a fixed 17-significant-digit format (round-trip exact for
binary64) and dict key order is preserved as given. Reading uses the
standard library parser.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def _format_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("non-finite float in JSON output: %r" % x)
    s = format(float(x), ".17g")
    # keep the value typed as a float on reload
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def _write(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, np.ndarray):
        _write(obj.tolist(), out)
    elif isinstance(obj, dict):
        out.append("{")
        for k, (key, val) in enumerate(obj.items()):
            if k:
                out.append(", ")
            if not isinstance(key, str):
                raise TypeError("JSON object keys must be strings: %r" % (key,))
            out.append(json.dumps(key))
            out.append(": ")
            _write(val, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for k, val in enumerate(obj):
            if k:
                out.append(", ")
            _write(val, out)
        out.append("]")
    else:
        raise TypeError("cannot serialize %r" % type(obj))


def dumps(obj) -> str:
    out: list = []
    _write(obj, out)
    return "".join(out)


def dump(obj, path) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def loads(text: str):
    return json.loads(text)


def load(path):
    return json.loads(Path(path).read_text())
