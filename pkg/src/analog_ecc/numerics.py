"""Dense linear algebra in two numeric modes.

Matrices are plain numpy arrays. Float mode uses ``float64``; rational mode
uses ``object`` arrays whose entries are all :class:`fractions.Fraction`.
A computation runs in exactly one mode: kernels that combine two operands
reject a mode mismatch with :class:`ModeError`.
"""
from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational

import numpy as np

FLOAT = "float"
RATIONAL = "rational"
MODES = (FLOAT, RATIONAL)

# absolute pivot tolerance for float-mode elimination
PIVOT_TOL = 1e-9


class ModeError(TypeError):
    """Raised when float and rational values meet in one computation."""


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not numeric entries")
    if isinstance(value, (int, np.integer, Rational)):
        return Fraction(int(value)) if isinstance(value, np.integer) else Fraction(value)
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError(f"cannot represent {value!r} exactly")
        return Fraction(float(value))
    raise TypeError(f"unsupported entry type {type(value).__name__}")


def _to_float(value) -> float:
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    return float(value)


def as_array(data, mode: str = FLOAT) -> np.ndarray:
    """Build a read-only vector or matrix in the requested mode.

    Strings like ``"3/4"`` are accepted in both modes. Converting a float to
    rational mode is exact (the binary64 value itself, not a nearby fraction).
    """
    if mode not in MODES:
        raise ValueError(f"unknown numeric mode {mode!r}")
    raw = np.asarray(data, dtype=object)
    if mode == FLOAT:
        out = np.vectorize(_to_float, otypes=[np.float64])(raw) if raw.size else raw.astype(np.float64)
    else:
        out = np.empty(raw.shape, dtype=object)
        for idx, v in np.ndenumerate(raw):
            out[idx] = _to_fraction(v)
    out.setflags(write=False)
    return out


def mode_of(a: np.ndarray) -> str:
    """Return the numeric mode of ``a``; mixed object arrays raise."""
    a = np.asarray(a)
    if a.dtype.kind in "fiu":
        return FLOAT
    if a.dtype == object:
        if all(isinstance(v, Fraction) for v in a.flat):
            return RATIONAL
        raise ModeError("object array must contain only Fraction entries")
    raise TypeError(f"unsupported dtype {a.dtype}")


def same_mode(*arrays) -> str:
    modes = {mode_of(a) for a in arrays}
    if len(modes) != 1:
        raise ModeError("mixed float/rational operands")
    return modes.pop()


def zero(mode: str):
    return Fraction(0) if mode == RATIONAL else 0.0


def one(mode: str):
    return Fraction(1) if mode == RATIONAL else 1.0


def scalar(value, mode: str):
    return _to_fraction(value) if mode == RATIONAL else _to_float(value)


def tolerance(mode: str) -> float:
    return 0.0 if mode == RATIONAL else PIVOT_TOL


def zeros(shape, mode: str) -> np.ndarray:
    """Writable zero array in ``mode``."""
    if mode == RATIONAL:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def to_float(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=np.float64)


def _matrix(a) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


def inf_norm_matrix(a):
    """Maximum absolute row sum."""
    a = _matrix(a)
    if a.size == 0:
        raise ValueError("empty matrix")
    mode = mode_of(a)
    return max((sum((abs(v) for v in row), zero(mode)) for row in a))


def trace(a):
    a = _matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"trace of non-square {a.shape} matrix")
    mode = mode_of(a)
    return sum((a[i, i] for i in range(a.shape[0])), zero(mode))


def matmul(a, b) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    same_mode(a, b)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"dimension mismatch {a.shape} @ {b.shape}")
    out = a @ b
    if isinstance(out, np.ndarray):
        out.setflags(write=False)
    return out


def rref(a):
    """Reduced row echelon form and pivot columns.

    Float mode uses partial pivoting and treats pivots with magnitude at most
    ``PIVOT_TOL`` as zero; rational mode is exact.
    """
    a = _matrix(a)
    mode = mode_of(a)
    tol = tolerance(mode)
    r = np.array(a, dtype=object if mode == RATIONAL else np.float64, copy=True)
    rows, cols = r.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        column = r[row:, col]
        if mode == RATIONAL:
            nz = [i for i, v in enumerate(column) if v != 0]
            if not nz:
                continue
            p = row + nz[0]
        else:
            p = row + int(np.argmax(np.abs(column)))
            if abs(r[p, col]) <= tol:
                r[row:, col] = 0.0
                continue
        if p != row:
            r[[row, p]] = r[[p, row]]
        r[row] = r[row] / r[row, col]
        for i in range(rows):
            if i != row and r[i, col] != 0:
                r[i] = r[i] - r[i, col] * r[row]
        if mode == FLOAT:
            r[:, col] = 0.0
            r[row, col] = 1.0
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a) -> int:
    a = _matrix(a)
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def kernel_basis(a) -> np.ndarray:
    """Columns spanning ``{x : a @ x = 0}``; shape ``(cols, cols - rank)``."""
    a = _matrix(a)
    mode = mode_of(a)
    cols = a.shape[1]
    r, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros((cols, len(free)), mode)
    for k, f in enumerate(free):
        basis[f, k] = one(mode)
        for i, p in enumerate(pivots):
            basis[p, k] = -r[i, f]
    basis.setflags(write=False)
    return basis


def format_scalar(value) -> str | float:
    """JSON-friendly scalar: ``"p/q"`` for fractions, 17 significant digits for floats."""
    if isinstance(value, Fraction):
        return str(value)
    value = float(value)
    if np.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(f"{value:.17g}")


def matrix_to_json(a) -> dict:
    a = _matrix(a)
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "data": [format_scalar(v) for v in a.flat],
    }


def matrix_from_json(obj, mode: str | None = None) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`; accepts a dict or a JSON string.

    With ``mode=None`` the matrix is rational if any entry is a ``"p/q"`` string.
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if rows * cols != len(data):
        raise ValueError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(data)}")
    if mode is None:
        mode = RATIONAL if any(isinstance(v, str) for v in data) else FLOAT
    return as_array(np.array(data, dtype=object).reshape(rows, cols), mode)
