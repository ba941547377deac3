"""Matrix files.

JSON objects ``{"dim": n, "entries": [[re, im], ...], "name": ...}`` with
``n*n`` row-major entries. A non-square basis may add ``"cols": k`` and
then carries ``n*k`` entries. Plain text is accepted on input: one row per
line, whitespace- or comma-separated tokens such as ``1``, ``-2.5i`` or
``3+4i``; blank lines and ``#`` comments are skipped.
"""
import json
import math
import re
from pathlib import Path

import numpy as np

from .errors import MalformedInput

__all__ = ["parse_matrix", "load_matrix", "to_json_obj", "save_matrix", "matrix_to_pairs"]

_TOKEN_SPLIT = re.compile(r"[,\s]+")


def matrix_to_pairs(x):
    x = np.asarray(x, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in x.ravel()]


def to_json_obj(x, name=None):
    x = np.asarray(x, dtype=complex)
    obj = {"dim": int(x.shape[0])}
    if x.ndim == 2 and x.shape[1] != x.shape[0]:
        obj["cols"] = int(x.shape[1])
    obj["entries"] = matrix_to_pairs(x)
    if name is not None:
        obj["name"] = name
    return obj


def save_matrix(path, x, name=None):
    Path(path).write_text(json.dumps(to_json_obj(x, name), indent=1) + "\n", encoding="utf-8")


def _number(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise MalformedInput(where, f"expected a finite number, got {v!r}")
    return float(v)


def _from_json(obj, label, square):
    if not isinstance(obj, dict):
        raise MalformedInput(label, "top-level JSON value must be an object")
    dim = obj.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise MalformedInput(label, f"'dim' must be a positive integer, got {dim!r}")
    cols = obj.get("cols", dim)
    if isinstance(cols, bool) or not isinstance(cols, int) or cols < 1:
        raise MalformedInput(label, f"'cols' must be a positive integer, got {cols!r}")
    if square and cols != dim:
        raise MalformedInput(label, f"expected a square matrix, got {dim}x{cols}")
    entries = obj.get("entries")
    if not isinstance(entries, list) or len(entries) != dim * cols:
        n = len(entries) if isinstance(entries, list) else None
        raise MalformedInput(label, f"'entries' must hold {dim * cols} [re, im] pairs, got {n}")
    vals = []
    for i, e in enumerate(entries):
        if not isinstance(e, list) or len(e) != 2:
            raise MalformedInput(label, f"entry {i} is not an [re, im] pair: {e!r}")
        vals.append(complex(_number(e[0], label), _number(e[1], label)))
    return np.array(vals, dtype=complex).reshape(dim, cols)


def _parse_token(tok, label):
    t = tok.strip().lower().replace("i", "j")
    try:
        z = complex(t)
    except ValueError:
        raise MalformedInput(label, f"cannot parse number {tok!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise MalformedInput(label, f"non-finite number {tok!r}")
    return z


def _from_text(text, label, square):
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        rows.append([_parse_token(t, label) for t in _TOKEN_SPLIT.split(line) if t])
    if not rows:
        raise MalformedInput(label, "empty matrix")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MalformedInput(label, "rows have different lengths")
    if square and width != len(rows):
        raise MalformedInput(label, f"expected a square matrix, got {len(rows)}x{width}")
    return np.array(rows, dtype=complex)


def parse_matrix(text, label="matrix", square=True):
    """Parse a matrix from JSON or plain text."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInput(label, f"invalid JSON: {exc}") from None
        return _from_json(obj, label, square)
    return _from_text(text, label, square)


def load_matrix(path, label=None, square=True):
    label = label or str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise MalformedInput(label, f"cannot read file: {exc}") from None
    return parse_matrix(text, label, square)
