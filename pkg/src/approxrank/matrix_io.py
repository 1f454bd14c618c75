"""Matrix text format: a header line ``m n`` followed by m rows of n numbers."""
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .linalg import as_matrix, as_sign_matrix


def parse_matrix(text: str, sign: bool = False) -> np.ndarray:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise ValidationError("first line must be 'm n'")
    try:
        m, n = int(lines[0][0]), int(lines[0][1])
    except ValueError as exc:
        raise ValidationError(f"bad header: {' '.join(lines[0])}") from exc
    if m < 1 or n < 1:
        raise ValidationError("dimensions must be positive")
    rows = lines[1:]
    if len(rows) != m:
        raise ValidationError(f"expected {m} rows, found {len(rows)}")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise ValidationError(f"row {i + 1} has {len(r)} entries, expected {n}")
        if sign and any(tok not in ("1", "-1") for tok in r):
            raise ValidationError(f"row {i + 1}: sign matrices may only contain 1 and -1")
    try:
        A = np.array([[float(tok) for tok in r] for r in rows])
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    return as_sign_matrix(A) if sign else as_matrix(A)


def read_matrix(path, sign: bool = False) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read matrix file {path}: {exc.strerror}") from exc
    return parse_matrix(text, sign=sign)


def _fmt(x: float) -> str:
    if float(x).is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(float(x))


def format_matrix(M) -> str:
    M = np.asarray(M, dtype=float)
    m, n = M.shape
    body = "\n".join(" ".join(_fmt(x) for x in row) for row in M)
    return f"{m} {n}\n{body}\n"


def write_matrix(path, M) -> None:
    Path(path).write_text(format_matrix(M))
