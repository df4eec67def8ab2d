"""alist files and JSON code descriptors.

A descriptor sits next to two alist files, one per check matrix::

    {"format_version": 1, "family": "QC", "n": 50, "k": 12, "claimed_d": 6,
     "params": {"p": 7, "sigma": 3}, "hx_file": "q1_hx.alist", "hz_file": "q1_hz.alist"}

Paths in the descriptor are relative to the descriptor's directory.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .algebra import BinaryMatrix, as_bits
from .css import CodeValidationError, CssCode

FORMAT_VERSION = 1


class CodeFormatError(ValueError):
    """A descriptor or alist file is unreadable or inconsistent."""


def alist_text(h) -> str:
    """MacKay alist rendering of a binary matrix."""
    a = as_bits(h)
    m, n = a.shape
    cols = [np.flatnonzero(a[:, j]) + 1 for j in range(n)]
    rows = [np.flatnonzero(a[i]) + 1 for i in range(m)]
    col_w = [len(c) for c in cols]
    row_w = [len(r) for r in rows]
    max_c = max(col_w, default=0)
    max_r = max(row_w, default=0)

    def padded(idx, width):
        return " ".join(str(int(x)) for x in list(idx) + [0] * (width - len(idx)))

    lines = [
        f"{n} {m}",
        f"{max_c} {max_r}",
        " ".join(map(str, col_w)),
        " ".join(map(str, row_w)),
    ]
    lines += [padded(c, max_c) for c in cols]
    lines += [padded(r, max_r) for r in rows]
    return "\n".join(lines) + "\n"


def parse_alist(text: str) -> BinaryMatrix:
    try:
        lines = [list(map(int, ln.split())) for ln in text.splitlines()]
        n, m = lines[0]
        max_c, max_r = lines[1]
        col_w, row_w = lines[2], lines[3]
    except (ValueError, IndexError) as exc:
        raise CodeFormatError(f"malformed alist header: {exc}") from None
    if len(col_w) != n or len(row_w) != m:
        raise CodeFormatError("alist weight lines do not match the stated dimensions")
    if len(lines) < 4 + n + m or any(lines[4 + n + m :]):
        raise CodeFormatError(f"alist has {len(lines)} lines, expected {4 + n + m}")
    if max(col_w, default=0) != max_c or max(row_w, default=0) != max_r:
        raise CodeFormatError("alist maximum weights disagree with the weight lists")
    a = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        idx = [x for x in lines[4 + j] if x]
        if len(idx) != col_w[j] or any(not 1 <= x <= m for x in idx):
            raise CodeFormatError(f"alist column {j} is inconsistent with its weight")
        a[np.array(idx, dtype=np.int64) - 1, j] = 1
    b = np.zeros_like(a)
    for i in range(m):
        idx = [x for x in lines[4 + n + i] if x]
        if len(idx) != row_w[i] or any(not 1 <= x <= n for x in idx):
            raise CodeFormatError(f"alist row {i} is inconsistent with its weight")
        b[i, np.array(idx, dtype=np.int64) - 1] = 1
    if not np.array_equal(a, b):
        raise CodeFormatError("alist column and row lists describe different matrices")
    return BinaryMatrix(a)


def write_alist(h, path) -> None:
    Path(path).write_text(alist_text(h), encoding="utf-8")


def read_alist(path) -> BinaryMatrix:
    return parse_alist(Path(path).read_text(encoding="utf-8"))


def save_code(code: CssCode, path) -> Path:
    """Write the descriptor at ``path`` and its two alist files beside it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    stem = path.stem
    hx_file, hz_file = f"{stem}_hx.alist", f"{stem}_hz.alist"
    write_alist(code.hx, path.parent / hx_file)
    write_alist(code.hz, path.parent / hz_file)
    descriptor = {
        "format_version": FORMAT_VERSION,
        "name": code.name,
        "family": code.family,
        "n": code.n,
        "k": code.k,
        "claimed_d": code.claimed_d,
        "params": code.params,
        "hx_file": hx_file,
        "hz_file": hz_file,
    }
    path.write_text(json.dumps(descriptor, indent=2) + "\n", encoding="utf-8")
    return path


def load_code(path, validate: bool = True) -> CssCode:
    """Read a descriptor; with ``validate`` the code invariants are re-checked."""
    path = Path(path)
    try:
        d = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CodeFormatError(f"cannot read descriptor {path}: {exc}") from None
    missing = {"format_version", "family", "n", "k", "params", "hx_file", "hz_file"} - set(d)
    if missing:
        raise CodeFormatError(f"descriptor lacks fields {sorted(missing)}")
    if d["format_version"] != FORMAT_VERSION:
        raise CodeFormatError(f"unsupported format_version {d['format_version']!r}")
    try:
        hx = read_alist(path.parent / d["hx_file"])
        hz = read_alist(path.parent / d["hz_file"])
    except OSError as exc:
        raise CodeFormatError(str(exc)) from None
    if hx.cols != d["n"] or hz.cols != d["n"]:
        raise CodeFormatError(f"descriptor says n={d['n']} but matrices have {hx.cols} and {hz.cols} columns")
    try:
        code = CssCode(
            hx=hx,
            hz=hz,
            family=d["family"],
            params=d["params"],
            claimed_d=d.get("claimed_d"),
            name=d.get("name"),
        )
    except ValueError as exc:
        raise CodeFormatError(str(exc)) from None
    if validate:
        code.validate()
        if code.k != d["k"]:
            raise CodeValidationError(f"descriptor says k={d['k']} but the matrices give k={code.k}")
    return code
