"""Plain-text file formats.

Vectors: a "<n> <m>" line, then m lines of n numbers. Caps: a
"theta <radians>" or "volume <delta>" line first. Matrix: a "columns" line
first, then the vectors format with one column per line. Blank lines and
anything after '#' are ignored.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError


def _lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _parse_block(lines: list[str]) -> np.ndarray:
    if not lines:
        raise DomainError("missing '<n> <m>' header")
    head = lines[0].split()
    if len(head) != 2:
        raise DomainError("header must be '<n> <m>'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise DomainError(f"bad header {lines[0]!r}") from exc
    if n < 1 or m < 0:
        raise DomainError("header needs n >= 1 and m >= 0")
    body = lines[1:]
    if len(body) != m:
        raise DomainError(f"header announces {m} vectors, found {len(body)}")
    rows = np.empty((m, n))
    for i, line in enumerate(body):
        parts = line.split()
        if len(parts) != n:
            raise DomainError(f"vector {i + 1} has {len(parts)} entries, expected {n}")
        try:
            rows[i] = [float(p) for p in parts]
        except ValueError as exc:
            raise DomainError(f"vector {i + 1}: {exc}") from exc
    return rows


def parse_vectors(text: str) -> np.ndarray:
    return _parse_block(_lines(text))


def format_vectors(V, header: str | None = None) -> str:
    V = np.atleast_2d(np.asarray(V, dtype=float))
    out = [header] if header else []
    out.append(f"{V.shape[1]} {V.shape[0]}")
    out += [" ".join(f"{v:.17g}" for v in row) for row in V]
    return "\n".join(out) + "\n"


def parse_caps(text: str) -> tuple[str, float, np.ndarray]:
    """Return (kind, level, poles) with kind 'theta' or 'volume'."""
    lines = _lines(text)
    if not lines:
        raise DomainError("empty caps file")
    head = lines[0].split()
    if len(head) != 2 or head[0] not in ("theta", "volume"):
        raise DomainError("caps file must start with 'theta <radians>' or 'volume <delta>'")
    try:
        level = float(head[1])
    except ValueError as exc:
        raise DomainError(f"bad cap level {head[1]!r}") from exc
    return head[0], level, _parse_block(lines[1:])


def parse_matrix(text: str) -> np.ndarray:
    """Matrix W whose columns are the listed vectors."""
    lines = _lines(text)
    if not lines or lines[0] != "columns":
        raise DomainError("matrix file must start with 'columns'")
    return _parse_block(lines[1:]).T.copy()


def read_text(path) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from exc


def write_text(path, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise DomainError(f"cannot write {path}: {exc.strerror}") from exc
