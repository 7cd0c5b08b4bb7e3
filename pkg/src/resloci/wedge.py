"""Wedge calculus on V and its dual in lexicographic Plücker coordinates.

Conventions fixed once, used by every module and file format:

- Basis of degree-two wedges ordered lexicographically:
  (1,2), (1,3), ..., (1,n), (2,3), ..., (n-1,n); same scheme for degree four.
- Dual pairing on lex basis elements: <e_I, e*_J> = delta_IJ, so the
  orthogonal complement of a span is a plain coordinate kernel.
- A two-form is decomposable (= a point of the Plücker-embedded Grassmannian
  of 2-planes) iff its wedge square vanishes.

A :class:`PairVK` bundles the dimension n with a basis of the subspace K of
degree-two wedges of V; the complement basis on the dual side is derived,
never read from input.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Optional, Sequence

import numpy as np

from .linalg import (
    COMPLEX,
    DEFAULT_RANK_TOL,
    RATIONAL,
    Matrix,
    ModeError,
    coerce_scalar,
    infer_mode,
    kernel_basis,
    rank,
)

SIDE_V = "V"
SIDE_DUAL = "V*"


def other_side(side: str) -> str:
    return SIDE_DUAL if side == SIDE_V else SIDE_V


@lru_cache(maxsize=None)
def lex_pairs(n: int) -> tuple:
    """Ordered pairs (i, j), 1 <= i < j <= n, in lexicographic order."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


@lru_cache(maxsize=None)
def pair_index(n: int) -> dict:
    return {p: k for k, p in enumerate(lex_pairs(n))}


@lru_cache(maxsize=None)
def lex_quads(n: int) -> tuple:
    return tuple(
        (i, j, k, l)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        for k in range(j + 1, n + 1)
        for l in range(k + 1, n + 1)
    )


def _zero(mode: str):
    return Fraction(0) if mode == RATIONAL else 0j


@dataclass(frozen=True)
class TwoForm:
    """Degree-two element in lex coordinates, tagged with its side of duality."""

    n: int
    side: str
    mode: str
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != comb(self.n, 2):
            raise ValueError("coordinate count must be C(n,2)")

    @staticmethod
    def make(n: int, side: str, mode: str, coords: Sequence) -> "TwoForm":
        return TwoForm(n, side, mode, tuple(coerce_scalar(c, mode) for c in coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def norm(self) -> float:
        return float(np.linalg.norm([complex(c) for c in self.coords]))

    def entry(self, i: int, j: int):
        """Coordinate extended skew-symmetrically to arbitrary index order."""
        if i == j:
            return _zero(self.mode)
        if i < j:
            return self.coords[pair_index(self.n)[(i, j)]]
        return -self.coords[pair_index(self.n)[(j, i)]]

    def to_complex(self) -> "TwoForm":
        return TwoForm(self.n, self.side, COMPLEX, tuple(complex(c) for c in self.coords))


@dataclass(frozen=True)
class FourForm:
    n: int
    side: str
    mode: str
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != comb(self.n, 4):
            raise ValueError("coordinate count must be C(n,4)")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


def _check_same(f: TwoForm, g: TwoForm) -> None:
    if f.n != g.n or f.side != g.side:
        raise ValueError("two-forms live in different spaces")
    if f.mode != g.mode:
        raise ModeError("two-forms have different scalar modes")


def wedge_vectors(a: Sequence, b: Sequence, side: str = SIDE_DUAL,
                  mode: Optional[str] = None) -> TwoForm:
    """Wedge of two vectors: coordinate at (i,j) is a_i b_j - a_j b_i."""
    if len(a) != len(b):
        raise ValueError("vectors must have equal length")
    n = len(a)
    if mode is None:
        mode = infer_mode(a[0])
    av = [coerce_scalar(x, mode) for x in a]
    bv = [coerce_scalar(x, mode) for x in b]
    coords = tuple(av[i - 1] * bv[j - 1] - av[j - 1] * bv[i - 1] for i, j in lex_pairs(n))
    return TwoForm(n, side, mode, coords)


def wedge_two_forms(f: TwoForm, g: TwoForm) -> FourForm:
    """Wedge of two two-forms: signed sum over pair splittings of each quadruple."""
    _check_same(f, g)
    n = f.n
    idx = pair_index(n)
    fc, gc = f.coords, g.coords
    coords = []
    for (i, j, k, l) in lex_quads(n):
        ij, kl = idx[(i, j)], idx[(k, l)]
        ik, jl = idx[(i, k)], idx[(j, l)]
        il, jk = idx[(i, l)], idx[(j, k)]
        coords.append(
            fc[ij] * gc[kl] - fc[ik] * gc[jl] + fc[il] * gc[jk]
            + gc[ij] * fc[kl] - gc[ik] * fc[jl] + gc[il] * fc[jk]
        )
    return FourForm(n, f.side, f.mode, tuple(coords))


def is_decomposable(f: TwoForm, tol: float = DEFAULT_RANK_TOL) -> bool:
    """True iff the wedge square vanishes (exactly, or below tol * |f|^2)."""
    if f.is_zero():
        raise ValueError("zero form has no decomposability status")
    sq = wedge_two_forms(f, f)
    if f.mode == RATIONAL:
        return sq.is_zero()
    bound = tol * f.norm() ** 2
    return all(abs(c) <= bound for c in sq.coords)


def _skew_matrix(f: TwoForm):
    n = f.n
    return [[f.entry(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]


def decompose(f: TwoForm, tol: float = DEFAULT_RANK_TOL):
    """Split a decomposable two-form into spanning vectors (a, b).

    The skew matrix of coefficients has rank exactly two and its column space
    is the span carried by the form; two independent columns are selected and
    orthogonalized inside that span.  Exact mode normalizes the first nonzero
    coordinate of a to 1.
    """
    if f.is_zero():
        raise ValueError("cannot decompose the zero form")
    if not is_decomposable(f, tol):
        raise ValueError("form is not decomposable")
    n = f.n
    skew = _skew_matrix(f)
    if f.mode == RATIONAL:
        cols = [[skew[i][j] for i in range(n)] for j in range(n)]
        a = next(c for c in cols if any(x != 0 for x in c))
        b = None
        for c in cols:
            if rank(Matrix.from_rows([a, c], RATIONAL)) == 2:
                b = c
                break
        assert b is not None, "rank-two skew matrix must have two independent columns"
        dot_aa = sum(x * x for x in a)
        dot_ab = sum(x * y for x, y in zip(a, b))
        b = [y - dot_ab / dot_aa * x for x, y in zip(a, b)]
        a = _normalize_first_one(a)
        b = _normalize_first_one(b)
        return tuple(a), tuple(b)
    m = np.array([[complex(x) for x in row] for row in skew])
    norms = np.linalg.norm(m, axis=0)
    j1 = int(np.argmax(norms))
    a = m[:, j1] / norms[j1]
    resid = m - np.outer(a, a.conj() @ m)
    j2 = int(np.argmax(np.linalg.norm(resid, axis=0)))
    b = resid[:, j2]
    b = b / np.linalg.norm(b)
    return tuple(complex(x) for x in a), tuple(complex(x) for x in b)


def _normalize_first_one(v: list) -> list:
    lead = next(x for x in v if x != 0)
    return [x / lead for x in v]


def orthogonal_complement(basis: Sequence[TwoForm], tol: Optional[float] = None):
    """Span of all forms on the other side pairing to zero with every input row."""
    if not basis:
        raise ValueError("empty basis has no defined dimension n")
    f0 = basis[0]
    for f in basis[1:]:
        _check_same(f0, f)
    m = Matrix.from_rows([f.coords for f in basis], f0.mode)
    if tol is None:
        tol = 0 if f0.mode == RATIONAL else DEFAULT_RANK_TOL
    if rank(m, tol) < len(basis):
        raise ValueError("basis rows are dependent")
    ker = kernel_basis(m, tol)
    side = other_side(f0.side)
    return [
        TwoForm(f0.n, side, f0.mode, ker.column(j)) for j in range(ker.cols)
    ]


@dataclass(frozen=True)
class PairVK:
    """Dimension n plus a basis of K (side V); complement basis is derived."""

    n: int
    mode: str
    k_basis: tuple
    kperp_basis: tuple

    @property
    def dim_k(self) -> int:
        return len(self.k_basis)

    @property
    def dim_kperp(self) -> int:
        return len(self.kperp_basis)

    def __post_init__(self):
        if self.dim_k + self.dim_kperp != comb(self.n, 2):
            raise ValueError("dim K + dim Kperp must equal C(n,2)")

    @staticmethod
    def from_k_basis(n: int, rows: Sequence[Sequence], mode: str) -> "PairVK":
        k = tuple(TwoForm.make(n, SIDE_V, mode, r) for r in rows)
        if k:
            kperp = tuple(orthogonal_complement(k))
        else:
            kperp = tuple(
                TwoForm(n, SIDE_DUAL, mode, Matrix.identity(comb(n, 2), mode).column(j))
                for j in range(comb(n, 2))
            )
        return PairVK(n, mode, k, kperp)

    @staticmethod
    def from_kperp_basis(n: int, rows: Sequence[Sequence], mode: str) -> "PairVK":
        kperp = tuple(TwoForm.make(n, SIDE_DUAL, mode, r) for r in rows)
        k = tuple(orthogonal_complement(kperp)) if kperp else tuple(
            TwoForm(n, SIDE_V, mode, Matrix.identity(comb(n, 2), mode).column(j))
            for j in range(comb(n, 2))
        )
        return PairVK(n, mode, k, kperp)

    def to_complex(self) -> "PairVK":
        if self.mode == COMPLEX:
            return self
        return PairVK(
            self.n,
            COMPLEX,
            tuple(f.to_complex() for f in self.k_basis),
            tuple(f.to_complex() for f in self.kperp_basis),
        )

    def to_json_dict(self) -> dict:
        field = "rational" if self.mode == RATIONAL else "complex"
        if self.mode == RATIONAL:
            rows = [[str(c) for c in f.coords] for f in self.k_basis]
        else:
            rows = [[[c.real, c.imag] for c in f.coords] for f in self.k_basis]
        return {"n": self.n, "field": field, "K": rows}

    @staticmethod
    def from_json_dict(obj: dict) -> "PairVK":
        n = int(obj["n"])
        field = obj.get("field", "rational")
        if field not in ("rational", "complex"):
            raise ValueError(f"unknown field {field!r}")
        mode = RATIONAL if field == "rational" else COMPLEX
        rows = []
        for raw in obj["K"]:
            if len(raw) != comb(n, 2):
                raise ValueError("K row length must be C(n,2)")
            if mode == RATIONAL:
                rows.append([Fraction(str(c)) for c in raw])
            else:
                rows.append([_complex_from_json(c) for c in raw])
        return PairVK.from_k_basis(n, rows, mode)


def _complex_from_json(c):
    if isinstance(c, (list, tuple)) and len(c) == 2:
        return complex(float(c[0]), float(c[1]))
    return complex(float(c))


def vector_wedge_basis_rows(a: Sequence, n: int, mode: str) -> list:
    """The n coordinate rows of a ^ e_j, j = 1..n (tangent directions at [a^b])."""
    av = [coerce_scalar(x, mode) for x in a]
    idx = pair_index(n)
    rows = []
    for j in range(1, n + 1):
        row = [_zero(mode)] * comb(n, 2)
        for p in range(1, n + 1):
            if p < j:
                row[idx[(p, j)]] = av[p - 1]
            elif p > j:
                row[idx[(j, p)]] = -av[p - 1]
        rows.append(row)
    return rows


def resonance_matrix(a: Sequence, pair: PairVK) -> Matrix:
    """Matrix whose right kernel is {b : a ^ b lies in the complement of K}.

    Row r, column j holds the pairing of the r-th K basis element with
    a ^ e*_j.  The kernel always contains a itself.
    """
    if all(coerce_scalar(x, pair.mode) == 0 for x in a):
        raise ValueError("a must be nonzero")
    n = pair.n
    av = [coerce_scalar(x, pair.mode) for x in a]
    rows = []
    for k in pair.k_basis:
        row = []
        for j in range(1, n + 1):
            s = _zero(pair.mode)
            for p in range(1, n + 1):
                if p != j:
                    s += av[p - 1] * k.entry(p, j)
            row.append(s)
        rows.append(row)
    if not rows:
        return Matrix(pair.mode, 0, n, ())
    return Matrix.from_rows(rows, pair.mode)


def is_resonant(a: Sequence, pair: PairVK, tol: Optional[float] = None):
    """Membership test for the resonance locus, with a witness line mate.

    Returns (True, b) when some b independent of a has a ^ b in the
    complement of K, equivalently when the resonance matrix kernel has
    dimension at least two; (False, None) otherwise.
    """
    if tol is None:
        tol = 0 if pair.mode == RATIONAL else DEFAULT_RANK_TOL
    m = resonance_matrix(a, pair)
    ker = kernel_basis(m, tol)
    if ker.cols < 2:
        return False, None
    av = [coerce_scalar(x, pair.mode) for x in a]
    if pair.mode == RATIONAL:
        for j in range(ker.cols):
            cand = list(ker.column(j))
            if rank(Matrix.from_rows([av, cand], RATIONAL)) == 2:
                return True, tuple(_normalize_first_one(cand))
        raise AssertionError("kernel of dimension >= 2 must contain a vector off the line of a")
    an = np.array(av, dtype=complex)
    an = an / np.linalg.norm(an)
    best, best_norm = None, -1.0
    for j in range(ker.cols):
        cand = np.array(ker.column(j), dtype=complex)
        cand = cand - (an.conj() @ cand) * an
        nrm = float(np.linalg.norm(cand))
        if nrm > best_norm:
            best, best_norm = cand, nrm
    best = best / np.linalg.norm(best)
    return True, tuple(complex(x) for x in best)


def raag_path_pair(n: int) -> PairVK:
    """The pair whose K is spanned by adjacent wedges e_i ^ e_{i+1} of a path."""
    if n < 4:
        raise ValueError("n must be at least 4")
    idx = pair_index(n)
    rows = []
    for i in range(1, n):
        row = [Fraction(0)] * comb(n, 2)
        row[idx[(i, i + 1)]] = Fraction(1)
        rows.append(row)
    return PairVK.from_k_basis(n, rows, RATIONAL)


def random_fraction(rng: random.Random) -> Fraction:
    num = rng.randint(-10, 10)
    den = rng.randint(1, 10)
    return Fraction(num, den)


def random_rational_vector(rng: random.Random, length: int) -> list:
    return [random_fraction(rng) for _ in range(length)]


def random_rational_pair(n: int, dim_k: int, rng: random.Random) -> PairVK:
    """Random pair with the given dim K; entries have numerator and
    denominator bounded by 10; rows redrawn until independent."""
    if not 0 <= dim_k <= comb(n, 2):
        raise ValueError("dim K out of range")
    while True:
        rows = [random_rational_vector(rng, comb(n, 2)) for _ in range(dim_k)]
        if dim_k == 0 or rank(Matrix.from_rows(rows, RATIONAL)) == dim_k:
            return PairVK.from_k_basis(n, rows, RATIONAL)
