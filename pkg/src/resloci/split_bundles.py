"""Split rank-two bundles on the projective line, through binary forms.

A global section of O(a) + O(b) is a pair of homogeneous binary forms.  The
section is resonant exactly when the two components share a factor of
positive degree, and the degree of that shared factor (with conventions for
a vanishing component) is the degree of the saturated line subsheaf the
section generates.  Everything here is exact rational arithmetic: gcd by the
Euclidean algorithm on dehomogenizations, the Sylvester resultant as an
independent second route, and the wedge-calculus pair built from the kernel
of the determinant map so that the abstract rank test and the gcd test can
cross-validate each other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

import numpy as np

from .linalg import RATIONAL, Matrix, kernel_basis, rank
from .wedge import PairVK, is_resonant, lex_pairs, random_fraction


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form in two variables; coeffs[i] multiplies x0^(d-i) x1^i."""

    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("need degree + 1 coefficients")

    @staticmethod
    def make(degree: int, coeffs: Sequence) -> "BinaryForm":
        return BinaryForm(degree, tuple(Fraction(c) for c in coeffs))

    @staticmethod
    def zero(degree: int) -> "BinaryForm":
        return BinaryForm(degree, tuple(Fraction(0) for _ in range(degree + 1)))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def multiply(self, other: "BinaryForm") -> "BinaryForm":
        d = self.degree + other.degree
        out = [Fraction(0)] * (d + 1)
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            for j, e in enumerate(other.coeffs):
                out[i + j] += c * e
        return BinaryForm(d, tuple(out))


@dataclass(frozen=True)
class BinaryFormPair:
    """A section of O(a) + O(b): one form of each degree, not both zero."""

    a: int
    b: int
    h1: BinaryForm
    h2: BinaryForm

    def __post_init__(self):
        if self.h1.degree != self.a or self.h2.degree != self.b:
            raise ValueError("component degrees must match (a, b)")
        if self.h1.is_zero() and self.h2.is_zero():
            raise ValueError("the zero section is not a point of the projective space")

    def coefficient_vector(self) -> tuple:
        return self.h1.coeffs + self.h2.coeffs


@dataclass(frozen=True)
class SplitBundle:
    a: int
    b: int

    def __post_init__(self):
        if not 1 <= self.a <= self.b:
            raise ValueError("need 1 <= a <= b")

    @property
    def n(self) -> int:
        return self.a + self.b + 2


def _trimmed(coeffs: Sequence[Fraction]) -> list:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def _univariate_gcd(p: list, q: list) -> list:
    """Euclidean gcd of univariate polynomials (ascending coefficients)."""
    p, q = _trimmed(p), _trimmed(q)
    while q:
        p, q = q, _poly_mod(p, q)
    lead = p[-1]
    return [c / lead for c in p]


def _poly_mod(p: list, q: list) -> list:
    r = list(p)
    dq = len(q) - 1
    while len(r) - 1 >= dq and r:
        f = r[-1] / q[-1]
        shift = len(r) - 1 - dq
        for i, c in enumerate(q):
            r[shift + i] -= f * c
        r = _trimmed(r)
    return r


def gcd_degree(p: BinaryForm, q: BinaryForm) -> int:
    """Degree of the homogeneous gcd; a zero argument contributes the whole
    other form, so gcd_degree(0, q) = deg q."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero forms is undefined")
    if p.is_zero():
        return q.degree
    if q.is_zero():
        return p.degree
    pu, qu = _trimmed(p.coeffs), _trimmed(q.coeffs)
    # x0-adic valuations: dehomogenizing at x0 = 1 drops exactly this degree
    sp = p.degree - (len(pu) - 1)
    sq = q.degree - (len(qu) - 1)
    g = _univariate_gcd(pu, qu)
    return min(sp, sq) + len(g) - 1


def sylvester_resultant(p: BinaryForm, q: BinaryForm) -> Fraction:
    """Homogeneous resultant via the Sylvester determinant, exact.

    Vanishes iff the two forms share a projective root; the independent
    oracle for the gcd route.
    """
    dp, dq = p.degree, q.degree
    if dp == 0 and dq == 0:
        return Fraction(1)
    size = dp + dq
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(dq):
        rows.append([Fraction(0)] * i + pc + [Fraction(0)] * (size - i - dp - 1))
    for i in range(dp):
        rows.append([Fraction(0)] * i + qc + [Fraction(0)] * (size - i - dq - 1))
    return _det_fraction(rows)


def _det_fraction(rows: list) -> Fraction:
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / inv
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
    return det


def is_resonant_gcd(s: BinaryFormPair) -> bool:
    """Shared-factor membership test for the resonance of the split bundle."""
    p, q = s.h1, s.h2
    if p.is_zero() or q.is_zero():
        return True
    return gcd_degree(p, q) >= 1


def stratum(s: BinaryFormPair) -> int:
    """Degree of the saturated line subsheaf generated by the section.

    Both components nonzero: the gcd degree.  A vanishing component puts the
    section inside one summand, whose saturation is that summand: stratum b
    when the first component is zero, stratum a when the second is.
    Non-resonant sections return the distinguished value 0.
    """
    if s.h1.is_zero():
        return s.b
    if s.h2.is_zero():
        return s.a
    return gcd_degree(s.h1, s.h2)


def lambda_stratum(s1: BinaryFormPair, s2: BinaryFormPair) -> int:
    """Common saturation degree of the plane spanned by two sections.

    Requires independence and the rank-one condition (vanishing cross
    determinant h1 h2' - h2 h1'); the value agrees with the stratum of
    either generator.
    """
    if (s1.a, s1.b) != (s2.a, s2.b):
        raise ValueError("sections live in different bundles")
    m = Matrix.from_rows([s1.coefficient_vector(), s2.coefficient_vector()], RATIONAL)
    if rank(m) != 2:
        raise ValueError("sections are dependent")
    cross = s1.h1.multiply(s2.h2)
    other = s2.h1.multiply(s1.h2)
    diff = [x - y for x, y in zip(cross.coeffs, other.coeffs)]
    if any(c != 0 for c in diff):
        raise ValueError("the two sections generate a rank-two subsheaf")
    d1, d2 = stratum(s1), stratum(s2)
    assert d1 == d2, "rank-one mates must share their saturation degree"
    return d1


def build_pair(bundle: SplitBundle) -> PairVK:
    """The (V, K) pair of the bundle: the complement of K is the exact
    kernel of the determinant map on the wedge basis of global sections."""
    a, b, n = bundle.a, bundle.b, bundle.n
    rows = [[Fraction(0)] * comb(n, 2) for _ in range(a + b + 1)]
    for col, (i, j) in enumerate(lex_pairs(n)):
        if i <= a + 1 < j:
            # product of the x1^(i-1)-monomial of degree a and the
            # x1^(j-a-2)-monomial of degree b
            rows[(i - 1) + (j - a - 2)][col] = Fraction(1)
    det_matrix = Matrix.from_rows(rows, RATIONAL)
    ker = kernel_basis(det_matrix)
    kperp_rows = [list(ker.column(j)) for j in range(ker.cols)]
    return PairVK.from_kperp_basis(n, kperp_rows, RATIONAL)


def theta_d(bundle: SplitBundle, d: int, f: BinaryForm,
            g1: Optional[BinaryForm], g2: BinaryForm) -> BinaryFormPair:
    """Multiplication map into the section space: f (g1 + g2) -> (fg1, fg2).

    For d = b > a there is no first factor; g1 must be omitted and the image
    is the unique embedding of the larger summand.
    """
    a, b = bundle.a, bundle.b
    if not (1 <= d <= a or d == b):
        raise ValueError("d must satisfy 1 <= d <= a or d = b")
    if f.degree != d or f.is_zero():
        raise ValueError("f must be a nonzero form of degree d")
    if g2.degree != b - d:
        raise ValueError("g2 must have degree b - d")
    if d > a:
        if g1 is not None:
            raise ValueError("no first factor exists when d exceeds a")
        h1 = BinaryForm.zero(a)
    else:
        if g1 is None or g1.degree != a - d:
            raise ValueError("g1 must have degree a - d")
        h1 = f.multiply(g1)
    return BinaryFormPair(a, b, h1, f.multiply(g2))


def random_binary_form(rng: random.Random, degree: int) -> BinaryForm:
    while True:
        form = BinaryForm(degree, tuple(random_fraction(rng) for _ in range(degree + 1)))
        if not form.is_zero():
            return form


def sample_stratum(bundle: SplitBundle, d: int, rng: random.Random,
                   max_tries: int = 100) -> BinaryFormPair:
    """Random section of stratum exactly d: random factor of degree d times
    coprime cofactors, coprimality enforced by a nonvanishing resultant."""
    a, b = bundle.a, bundle.b
    if not (1 <= d <= a or d == b):
        raise ValueError("no stratum with that degree: need 1 <= d <= a or d = b")
    if d == b and b > a:
        return BinaryFormPair(a, b, BinaryForm.zero(a), random_binary_form(rng, b))
    f = random_binary_form(rng, d)
    for _ in range(max_tries):
        g1 = random_binary_form(rng, a - d)
        g2 = random_binary_form(rng, b - d)
        if sylvester_resultant(g1, g2) != 0:
            return theta_d(bundle, d, f, g1, g2)
    raise RuntimeError("failed to draw coprime cofactors")


def _multiplication_matrix(h: BinaryForm, source_degree: int) -> np.ndarray:
    """Matrix of multiplication by h from forms of source_degree upward."""
    rows = source_degree + h.degree + 1
    cols = source_degree + 1
    m = np.zeros((rows, cols))
    for c in range(cols):
        for i, coeff in enumerate(h.coeffs):
            m[c + i, c] = float(coeff)
    return m


def stratum_cone_dimension(bundle: SplitBundle, d: int, rng: random.Random,
                           tol: float = 1e-8) -> int:
    """Numerical rank of the stratum parametrization Jacobian at a random
    point: the affine cone dimension of the stratum, expected a+b-d+2."""
    a, b = bundle.a, bundle.b
    if not 1 <= d <= a:
        raise ValueError("need 1 <= d <= a")
    f = random_binary_form(rng, d)
    while True:
        g1 = random_binary_form(rng, a - d)
        g2 = random_binary_form(rng, b - d)
        if sylvester_resultant(g1, g2) != 0:
            break
    top = np.hstack([
        _multiplication_matrix(g1, d),
        _multiplication_matrix(f, a - d),
        np.zeros((a + 1, b - d + 1)),
    ])
    bottom = np.hstack([
        _multiplication_matrix(g2, d),
        np.zeros((b + 1, a - d + 1)),
        _multiplication_matrix(f, b - d),
    ])
    jac = np.vstack([top, bottom])
    s = np.linalg.svd(jac, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


@dataclass
class CrossCheckReport:
    bundle: SplitBundle
    total: int
    agreements: int
    witness_checked: int
    witness_consistent: int
    strata_histogram: dict
    disagreements: list

    @property
    def all_agree(self) -> bool:
        return self.agreements == self.total


def random_section(bundle: SplitBundle, rng: random.Random) -> BinaryFormPair:
    while True:
        h1 = BinaryForm(bundle.a, tuple(random_fraction(rng) for _ in range(bundle.a + 1)))
        h2 = BinaryForm(bundle.b, tuple(random_fraction(rng) for _ in range(bundle.b + 1)))
        if not (h1.is_zero() and h2.is_zero()):
            return BinaryFormPair(bundle.a, bundle.b, h1, h2)


def cross_check(bundle: SplitBundle, count: int, rng: random.Random) -> CrossCheckReport:
    """Rank-based membership on the built pair against the gcd test.

    Half the sections are forced resonant by stratum sampling, half are
    generic draws; every disagreement is reported.  Witnesses from the rank
    test are checked to span a rank-one pair with the section.
    """
    pair = build_pair(bundle)
    a_deg, b_deg = bundle.a, bundle.b
    strata = [d for d in range(1, a_deg + 1)]
    if b_deg > a_deg:
        strata.append(b_deg)
    sections = []
    for i in range(count // 2):
        sections.append(sample_stratum(bundle, strata[i % len(strata)], rng))
    for _ in range(count - count // 2):
        sections.append(random_section(bundle, rng))
    agreements = 0
    witness_checked = 0
    witness_consistent = 0
    histogram: dict = {}
    disagreements = []
    for s in sections:
        by_gcd = is_resonant_gcd(s)
        by_rank, witness = is_resonant(s.coefficient_vector(), pair)
        if by_gcd == by_rank:
            agreements += 1
        else:
            disagreements.append(s)
        if by_gcd:
            key = stratum(s)
            histogram[key] = histogram.get(key, 0) + 1
        if by_rank and witness is not None:
            witness_checked += 1
            w = BinaryFormPair(
                a_deg, b_deg,
                BinaryForm(a_deg, tuple(witness[: a_deg + 1])),
                BinaryForm(b_deg, tuple(witness[a_deg + 1 :])),
            )
            cross = s.h1.multiply(w.h2)
            other = w.h1.multiply(s.h2)
            if all(x == y for x, y in zip(cross.coeffs, other.coeffs)):
                witness_consistent += 1
    return CrossCheckReport(
        bundle=bundle,
        total=count,
        agreements=agreements,
        witness_checked=witness_checked,
        witness_consistent=witness_consistent,
        strata_histogram=histogram,
        disagreements=disagreements,
    )
