"""Dense linear algebra over two scalar modes: exact rationals and complex doubles.

Every matrix carries a single mode.  Rational-mode computations are exact
(arbitrary-precision integers inside ``fractions.Fraction``); complex-mode
computations go through numpy with a relative singular-value tolerance.
Mixing modes in one operation raises :class:`ModeError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

RATIONAL = "rational"
COMPLEX = "complex"

DEFAULT_RANK_TOL = 1e-8


class ModeError(TypeError):
    """Raised when rational and complex values meet in one operation."""


def coerce_scalar(x, mode: str):
    """Validate/convert one scalar into the given mode.

    Rational mode accepts int and Fraction (and p/q strings); complex mode
    accepts int, float and complex.  Anything else is a mode violation.
    """
    if mode == RATIONAL:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise ModeError(f"cannot use {type(x).__name__} in rational mode")
    if mode == COMPLEX:
        if isinstance(x, complex):
            return x
        if isinstance(x, (int, float, np.integer, np.floating, np.complexfloating)):
            return complex(x)
        raise ModeError(f"cannot use {type(x).__name__} in complex mode")
    raise ValueError(f"unknown mode {mode!r}")


def infer_mode(x) -> str:
    if isinstance(x, (Fraction, int)):
        return RATIONAL
    if isinstance(x, (float, complex, np.floating, np.complexfloating)):
        return COMPLEX
    raise ModeError(f"no scalar mode for {type(x).__name__}")


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix; entries stored row-major in one mode."""

    mode: str
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @staticmethod
    def from_rows(rows: Sequence[Sequence], mode: str) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(coerce_scalar(x, mode) for x in r)
        return Matrix(mode, nrows, ncols, tuple(flat))

    @staticmethod
    def identity(n: int, mode: str) -> "Matrix":
        one = Fraction(1) if mode == RATIONAL else 1.0 + 0j
        zero = Fraction(0) if mode == RATIONAL else 0j
        flat = tuple(one if i == j else zero for i in range(n) for j in range(n))
        return Matrix(mode, n, n, flat)

    def at(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_lists(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        flat = tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows))
        return Matrix(self.mode, self.cols, self.rows, flat)

    def to_numpy(self) -> np.ndarray:
        if self.mode == COMPLEX:
            return np.array(self.entries, dtype=complex).reshape(self.rows, self.cols)
        return np.array([complex(x) for x in self.entries], dtype=complex).reshape(
            self.rows, self.cols
        )


def _check_tol(mode: str, tol) -> None:
    if mode == RATIONAL and tol != 0:
        raise ValueError("exact mode requires tol = 0")
    if mode == COMPLEX and not tol > 0:
        raise ValueError("floating mode requires tol > 0")


def _clear_denominators(row: Sequence[Fraction]) -> list:
    """Scale a rational row to integers (does not change rank or kernel)."""
    lcm = 1
    for x in row:
        d = x.denominator
        lcm = lcm // math.gcd(lcm, d) * d
    return [int(x * lcm) for x in row]


def _bareiss_rank(int_rows: list) -> int:
    """Fraction-free (Bareiss) elimination rank of an integer matrix."""
    m = [r[:] for r in int_rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    prev = 1
    col = 0
    while rank < nrows and col < ncols:
        piv = None
        for i in range(rank, nrows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, nrows):
            for j in range(col + 1, ncols):
                m[i][j] = (m[i][j] * p - m[i][col] * m[rank][j]) // prev
            m[i][col] = 0
        prev = p
        rank += 1
        col += 1
    return rank


def _rref(rows: list) -> tuple[list, list]:
    """Reduced row echelon form over Fraction; returns (rref rows, pivot cols).

    Pivot choice is the first nonzero entry, for determinism.
    """
    m = [[Fraction(x) for x in r] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(m: Matrix, tol=0) -> int:
    """Rank: fraction-free elimination (exact) or SVD count (floating)."""
    _check_tol(m.mode, tol)
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.mode == RATIONAL:
        int_rows = [_clear_denominators(m.row(i)) for i in range(m.rows)]
        return _bareiss_rank(int_rows)
    a = m.to_numpy()
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def kernel_basis(m: Matrix, tol=0) -> Matrix:
    """Columns spanning the right kernel of m; column count = cols - rank."""
    _check_tol(m.mode, tol)
    if m.cols == 0:
        return Matrix(m.mode, 0, 0, ())
    if m.rows == 0:
        return Matrix.identity(m.cols, m.mode)
    if m.mode == RATIONAL:
        rref, pivots = _rref(m.row_lists())
        free = [c for c in range(m.cols) if c not in pivots]
        cols = []
        for f in free:
            v = [Fraction(0)] * m.cols
            v[f] = Fraction(1)
            for r, p in enumerate(pivots):
                v[p] = -rref[r][f]
            cols.append(v)
        flat = tuple(cols[j][i] for i in range(m.cols) for j in range(len(cols)))
        return Matrix(RATIONAL, m.cols, len(cols), flat)
    a = m.to_numpy()
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > tol * smax)) if smax > 0 else 0
    basis = vh[r:].conj().T  # (cols, cols - r)
    return Matrix(COMPLEX, m.cols, m.cols - r, tuple(basis.reshape(-1)))


def solve_linear(m: Matrix, rhs: Sequence, tol=0):
    """Some solution of m x = rhs, or None when the system is inconsistent."""
    _check_tol(m.mode, tol)
    b = [coerce_scalar(x, m.mode) for x in rhs]
    if len(b) != m.rows:
        raise ValueError("rhs length mismatch")
    if m.mode == RATIONAL:
        aug = [list(m.row(i)) + [b[i]] for i in range(m.rows)]
        rref, pivots = _rref(aug)
        if m.cols in pivots:
            return None
        x = [Fraction(0)] * m.cols
        for r, p in enumerate(pivots):
            x[p] = rref[r][m.cols]
        return tuple(x)
    a = m.to_numpy()
    bb = np.array(b, dtype=complex)
    x, *_ = np.linalg.lstsq(a, bb, rcond=None)
    resid = np.linalg.norm(a @ x - bb)
    scale = np.linalg.norm(a) * np.linalg.norm(x) + np.linalg.norm(bb) + 1.0
    if resid > tol * scale:
        return None
    return tuple(complex(v) for v in x)
