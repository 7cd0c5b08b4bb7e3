"""Grassmannian linear sections: quadric systems, certified points, lines.

The engine squares an overdetermined picture down to numbers: decomposable
points of the projectivized complement of K are cut out by one wedge-square
quadric per degree-four coordinate; a random affine chart plus random complex
combinations make the system square for total-degree continuation.  Endpoints
are filtered by the full quadric residual, deduplicated projectively, split
into spanning vector pairs, and certified transversal by a tangent-span rank
test.  Duality experiments run the same machinery on both sides of a pair.

Degeneracy is reported through three independent signals: a point-count
deficit against the Catalan-number degree, cluster/multiplicity flags from
the tracker, and tangent-rank deficits.  Any one marks an instance
degenerate; positive-dimensional sections are only ever probed at sliced
points, so reports never claim global transversality of a curve or surface.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

import numpy as np

from .homotopy import CLUSTER, MultiPoly, PolySystem, TrackConfig, solve_total_degree
from .linalg import COMPLEX, DEFAULT_RANK_TOL, RATIONAL, Matrix, rank
from .wedge import (
    SIDE_DUAL,
    SIDE_V,
    PairVK,
    TwoForm,
    decompose,
    is_resonant,
    random_fraction,
    random_rational_pair,
    random_rational_vector,
    resonance_matrix,
    vector_wedge_basis_rows,
    wedge_two_forms,
    wedge_vectors,
)


def catalan_degree(n: int) -> int:
    """Degree of the Grassmannian of 2-planes in n-space: the Catalan number
    (2m)!/(m!(m+1)!) with m = n-2; expected point count of a finite section."""
    if n < 4:
        raise ValueError("n must be at least 4")
    m = n - 2
    return math.factorial(2 * m) // (math.factorial(m) * math.factorial(m + 1))


def expected_section_dim(pair: PairVK) -> int:
    """Expected dimension of the section on the complement side of the pair."""
    n, m = pair.n, pair.dim_kperp
    return (m - 1) + (2 * n - 4) - (comb(n, 2) - 1)


@dataclass
class SectionConfig:
    path_tol: float = 1e-8
    final_tol: float = 1e-12
    dedup_tol: float = 1e-6
    residual_tol: float = 1e-8
    rank_tol: float = DEFAULT_RANK_TOL
    max_steps: int = 2000
    seed: Optional[int] = None
    membership_samples: int = 5

    def as_dict(self) -> dict:
        return {
            "path_tol": self.path_tol,
            "final_tol": self.final_tol,
            "dedup_tol": self.dedup_tol,
            "residual_tol": self.residual_tol,
            "rank_tol": self.rank_tol,
            "max_steps": self.max_steps,
        }


@dataclass(frozen=True)
class SectionPoint:
    """One certified solution of the section, with its line decomposition."""

    t: tuple
    omega: TwoForm
    a: tuple
    b: tuple
    full_residual: float
    transversal: bool
    tangent_rank: int
    multiplicity_flag: bool


@dataclass(frozen=True)
class ResonanceLine:
    a: tuple
    b: tuple


@dataclass
class SectionReport:
    n: int
    m: int
    expected_count: int
    solutions: list
    paths_run: int
    paths_converged: int
    paths_diverged: int
    paths_max_steps: int
    paths_cluster: int
    all_transversal: bool
    lines_pairwise_disjoint: bool
    disjointness: list

    @property
    def count(self) -> int:
        return len(self.solutions)

    @property
    def degenerate(self) -> bool:
        return (
            self.count != self.expected_count
            or not self.all_transversal
            or any(p.multiplicity_flag for p in self.solutions)
        )


def build_quadric_system(pair: PairVK) -> list:
    """One quadric per degree-four coordinate, cutting the decomposable
    locus out of the complement side of the pair.

    The quadric for coordinate c reads off the wedge squares of the basis:
    coefficient of t_i t_j is the c-coordinate of the wedge of basis rows i, j
    (doubled off the diagonal).
    """
    m = pair.dim_kperp
    if m < 2:
        raise ValueError("need at least a projective line on the complement side")
    basis = [f.to_complex() for f in pair.kperp_basis]
    pairwise = {}
    for i in range(m):
        for j in range(i, m):
            pairwise[(i, j)] = wedge_two_forms(basis[i], basis[j]).coords
    quadrics = []
    for c in range(comb(pair.n, 4)):
        terms = []
        for i in range(m):
            coeff = pairwise[(i, i)][c]
            if coeff != 0:
                expo = [0] * m
                expo[i] = 2
                terms.append((tuple(expo), coeff))
        for i in range(m):
            for j in range(i + 1, m):
                coeff = 2 * pairwise[(i, j)][c]
                if coeff != 0:
                    expo = [0] * m
                    expo[i] = 1
                    expo[j] = 1
                    terms.append((tuple(expo), coeff))
        quadrics.append(MultiPoly.from_terms(m, terms))
    return quadrics


def _normalized_poly(p: MultiPoly) -> MultiPoly:
    scale = max((abs(c) for _, c in p.terms), default=1.0)
    if scale == 0:
        return p
    return MultiPoly.from_terms(p.nvars, [(e, c / scale) for e, c in p.terms])


def _child_seed(seed: Optional[int], k: int) -> int:
    base = 0 if seed is None else int(seed)
    return (base * 0x9E3779B97F4A7C15 + k + 1) % (2**63)


def _project_normalize(t: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(t)))
    return t / t[i]


def _chordal_distance(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    c = abs(np.vdot(a, b)) / (na * nb)
    return math.sqrt(max(0.0, 1.0 - min(1.0, c) ** 2))


def transversality_at(a: Sequence, b: Sequence, pair: PairVK,
                      tol: float = DEFAULT_RANK_TOL):
    """Tangent-span certificate at the decomposable point spanned by (a, b).

    Stacks the 2n wedge directions of a and b with the complement basis;
    the intersection is transversal at that point iff the stack has full
    rank C(n,2).  Returns (transversal, rank).
    """
    n = pair.n
    exact = pair.mode == RATIONAL and all(
        isinstance(x, (int, Fraction)) for x in list(a) + list(b)
    )
    mode = RATIONAL if exact else COMPLEX
    cpair = pair if exact else pair.to_complex()
    av = [x if exact else complex(x) for x in a]
    bv = [x if exact else complex(x) for x in b]
    omega = wedge_vectors(av, bv, SIDE_DUAL, mode)
    _require_in_complement(omega, cpair, tol)
    rows = vector_wedge_basis_rows(av, n, mode)
    rows += vector_wedge_basis_rows(bv, n, mode)
    rows += [list(f.coords) for f in cpair.kperp_basis]
    mat = Matrix.from_rows(rows, mode)
    r = rank(mat, 0 if exact else tol)
    return r == comb(n, 2), r


def _require_in_complement(omega: TwoForm, pair: PairVK, tol: float) -> None:
    scale = omega.norm() + 1.0
    for k in pair.k_basis:
        p = sum(x * y for x, y in zip(k.coords, omega.coords))
        bad = p != 0 if pair.mode == RATIONAL else abs(p) > tol * scale * (k.norm() + 1.0)
        if bad:
            raise ValueError("the wedge of a and b does not lie in the complement of K")


def lines_and_disjointness(solutions: Sequence[SectionPoint],
                           tol: float = DEFAULT_RANK_TOL):
    """Resonance lines of the solved section and their pairwise disjointness.

    Two lines are disjoint iff the four spanning vectors have rank 4
    (floating test: fourth singular value above tol times the largest).
    """
    lines = [ResonanceLine(p.a, p.b) for p in solutions]
    k = len(lines)
    table = [[True] * k for _ in range(k)]
    all_disjoint = True
    for i in range(k):
        for j in range(i + 1, k):
            stack = np.array(
                [lines[i].a, lines[i].b, lines[j].a, lines[j].b], dtype=complex
            )
            s = np.linalg.svd(stack, compute_uv=False)
            disjoint = bool(s[-1] > tol * s[0])
            table[i][j] = table[j][i] = disjoint
            all_disjoint = all_disjoint and disjoint
    return lines, all_disjoint, table


def solve_finite_section(pair: PairVK, config: Optional[SectionConfig] = None) -> SectionReport:
    """Solve a zero-dimensional section and certify every surviving point.

    Appends one random affine chart and squares the quadrics down with a
    random complex combination matrix, tracks all 2^(m-1) paths, filters by
    the residual of every quadric, splits each point into spanning vectors,
    and certifies transversality.  Count mismatches and singularity flags are
    reported, never raised.
    """
    config = config or SectionConfig()
    n, m = pair.n, pair.dim_kperp
    if expected_section_dim(pair) != 0:
        raise ValueError(
            f"expected section dimension is {expected_section_dim(pair)}, not 0; "
            "slice the pair down first"
        )
    quadrics = [_normalized_poly(q) for q in build_quadric_system(pair)]
    nonzero = [q for q in quadrics if q.terms]
    if not nonzero:
        # the whole complement is decomposable: wildly degenerate section
        return SectionReport(
            n=n, m=m, expected_count=catalan_degree(n), solutions=[],
            paths_run=0, paths_converged=0, paths_diverged=0,
            paths_max_steps=0, paths_cluster=0, all_transversal=False,
            lines_pairwise_disjoint=False, disjointness=[],
        )
    rng = random.Random(_child_seed(config.seed, 0))
    chart_terms = []
    for i in range(m):
        expo = [0] * m
        expo[i] = 1
        phase = 2j * math.pi * rng.random()
        chart_terms.append((tuple(expo), np.exp(phase)))
    chart_terms.append(((0,) * m, -1.0 + 0j))
    chart = MultiPoly.from_terms(m, chart_terms)
    squared = [chart]
    for r in range(m - 1):
        terms = []
        for q in nonzero:
            w = complex(rng.gauss(0, 1), rng.gauss(0, 1))
            terms.extend((e, w * c) for e, c in q.terms)
        squared.append(_normalized_poly(MultiPoly.from_terms(m, terms)))
    system = PolySystem(squared)
    track = TrackConfig(
        path_tol=config.path_tol,
        final_tol=config.final_tol,
        dedup_tol=config.dedup_tol,
        max_steps=config.max_steps,
        seed=_child_seed(config.seed, 1),
    )
    result = solve_total_degree(system, track)

    kept: list = []
    for sol, mult in zip(result.solutions, result.multiplicities):
        t = _project_normalize(np.array(sol.point, dtype=complex))
        residual = max(abs(q.evaluate(t)) for q in quadrics)
        if residual > config.residual_tol:
            continue
        kept.append((t, residual, sol.status == CLUSTER or mult > 1))
    merged: list = []
    for t, residual, flag in kept:
        for i, (t2, r2, _f2) in enumerate(merged):
            if _chordal_distance(t, t2) < config.dedup_tol:
                # two affine endpoints on one projective point: multiplicity
                merged[i] = (t2, min(r2, residual), True)
                break
        else:
            merged.append((t, residual, flag))

    basis = [np.array(f.coords, dtype=complex) for f in pair.kperp_basis]
    points = []
    for t, residual, flag in merged:
        omega_coords = sum(ti * bi for ti, bi in zip(t, basis))
        omega = TwoForm(n, SIDE_DUAL, COMPLEX, tuple(complex(x) for x in omega_coords))
        a, b = decompose(omega, max(config.rank_tol, 1e-6))
        transversal, trank = transversality_at(a, b, pair, config.rank_tol)
        points.append(
            SectionPoint(
                t=tuple(complex(x) for x in t),
                omega=omega,
                a=a,
                b=b,
                full_residual=residual,
                transversal=transversal,
                tangent_rank=trank,
                multiplicity_flag=flag,
            )
        )
    _, all_disjoint, table = lines_and_disjointness(points, config.rank_tol)
    return SectionReport(
        n=n,
        m=m,
        expected_count=catalan_degree(n),
        solutions=points,
        paths_run=result.paths_run,
        paths_converged=result.n_converged,
        paths_diverged=result.n_diverged,
        paths_max_steps=result.n_max_steps,
        paths_cluster=result.n_cluster,
        all_transversal=all(p.transversal for p in points),
        lines_pairwise_disjoint=all_disjoint,
        disjointness=table,
    )


def membership_cross_check(solutions: Sequence[SectionPoint], pair: PairVK,
                           samples_per_line: int = 5,
                           seed: Optional[int] = None,
                           tol: float = DEFAULT_RANK_TOL) -> bool:
    """Line sweep versus pointwise membership: random points of every
    returned line must be resonant with kernel dimension exactly two, and
    perturbed off-line points must not be."""
    cpair = pair.to_complex()
    rng = random.Random(seed)
    n = pair.n
    for pt in solutions:
        a = np.array(pt.a, dtype=complex)
        b = np.array(pt.b, dtype=complex)
        for _ in range(samples_per_line):
            alpha = complex(rng.gauss(0, 1), rng.gauss(0, 1))
            beta = complex(rng.gauss(0, 1), rng.gauss(0, 1))
            p = alpha * a + beta * b
            p = p / np.linalg.norm(p)
            ok, _witness = is_resonant(tuple(p), cpair, tol)
            if not ok:
                return False
            r = rank(resonance_matrix(tuple(p), cpair), tol)
            if n - r != 2:
                return False
            off = p + 1e-3 * np.array(
                [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)]
            )
            if is_resonant(tuple(off), cpair, tol)[0]:
                return False
    return True


def dual_pair(pair: PairVK) -> PairVK:
    """Swap the roles of K and its complement: run the machinery on the
    other Grassmannian.  Involution on row spaces."""
    k = tuple(TwoForm(pair.n, SIDE_V, pair.mode, f.coords) for f in pair.kperp_basis)
    kperp = tuple(TwoForm(pair.n, SIDE_DUAL, pair.mode, f.coords) for f in pair.k_basis)
    return PairVK(pair.n, pair.mode, k, kperp)


def slice_to_finite(pair: PairVK, rng: random.Random) -> PairVK:
    """Cut a positive-dimensional section down to points with random
    hyperplanes: the complement row space shrinks by the expected dimension."""
    d = expected_section_dim(pair)
    if d <= 0:
        raise ValueError("section is already finite; nothing to slice")
    m = pair.dim_kperp
    while True:
        rows = []
        for _ in range(m - d):
            coeffs = (
                [random_fraction(rng) for _ in range(m)]
                if pair.mode == RATIONAL
                else [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(m)]
            )
            row = [sum(c * f.coords[j] for c, f in zip(coeffs, pair.kperp_basis))
                   for j in range(comb(pair.n, 2))]
            rows.append(row)
        mat = Matrix.from_rows(rows, pair.mode)
        tol = 0 if pair.mode == RATIONAL else DEFAULT_RANK_TOL
        if rank(mat, tol) == m - d:
            return PairVK.from_kperp_basis(pair.n, rows, pair.mode)


def degenerate_pair(n: int, dim_k: int, rng: random.Random):
    """A pair whose K side meets its Grassmannian non-transversally on purpose.

    K contains the full wedge-square plane of a three-dimensional subspace
    spanned by c, d, v: a plane of decomposables inside the tangent cone at
    mu0 = c wedge d.  Further tangent directions are added until the span
    count is violated at mu0 outright, and generic rows fill up dim K.
    Returns (pair, mu0).
    """
    tangent_dim = 2 * n - 3
    needed_overlap = tangent_dim + dim_k - comb(n, 2) + 1
    overlap = max(3, needed_overlap)
    if overlap > dim_k:
        raise ValueError("dim K too small for the tangent-cone construction")
    while True:
        c = random_rational_vector(rng, n)
        d = random_rational_vector(rng, n)
        v = random_rational_vector(rng, n)
        mu0 = wedge_vectors(c, d, SIDE_V, RATIONAL)
        if mu0.is_zero():
            continue
        rows = [
            list(mu0.coords),
            list(wedge_vectors(c, v, SIDE_V, RATIONAL).coords),
            list(wedge_vectors(d, v, SIDE_V, RATIONAL).coords),
        ]
        for k in range(overlap - 3):
            w = random_rational_vector(rng, n)
            base = c if k % 2 == 0 else d
            rows.append(list(wedge_vectors(base, w, SIDE_V, RATIONAL).coords))
        for _ in range(dim_k - len(rows)):
            rows.append(random_rational_vector(rng, comb(n, 2)))
        if rank(Matrix.from_rows(rows, RATIONAL)) == dim_k:
            return PairVK.from_k_basis(n, rows, RATIONAL), mu0


@dataclass
class DualityTrial:
    index: int
    finite_count: int
    finite_expected: int
    finite_all_transversal: bool
    finite_degenerate: bool
    dual_points: int
    dual_all_transversal: bool
    agree: bool


@dataclass
class DualityReport:
    n: int
    dim_k: int
    degenerate_mode: bool
    trials: list
    all_agree: bool
    all_flagged: bool


def duality_experiment(n: int, dim_k: int, trials: int, degenerate: bool = False,
                       seed: Optional[int] = None,
                       config: Optional[SectionConfig] = None) -> DualityReport:
    """Transversality on the finite side versus the sliced positive side.

    Random mode draws rational pairs and expects both sides transversal;
    degenerate mode constructs tangent-cone pairs and expects the finite
    side flagged.  All outcomes are reported, never raised.
    """
    if n not in (4, 5, 6):
        raise ValueError("n must be 4, 5 or 6")
    config = config or SectionConfig()
    records = []
    for i in range(trials):
        rng = random.Random(_child_seed(seed, 100 + i))
        cfg = SectionConfig(
            path_tol=config.path_tol,
            final_tol=config.final_tol,
            dedup_tol=config.dedup_tol,
            residual_tol=config.residual_tol,
            rank_tol=config.rank_tol,
            max_steps=config.max_steps,
            seed=_child_seed(seed, 200 + i),
        )
        if degenerate:
            pair, _mu0 = degenerate_pair(n, dim_k, rng)
        else:
            pair = _random_finite_side_pair(n, dim_k, rng)
        finite = solve_finite_section(pair, cfg)
        dual = dual_pair(pair)
        if expected_section_dim(dual) > 0:
            sliced = slice_to_finite(dual, rng)
        else:
            sliced = dual
        cfg2 = SectionConfig(
            path_tol=config.path_tol,
            final_tol=config.final_tol,
            dedup_tol=config.dedup_tol,
            residual_tol=config.residual_tol,
            rank_tol=config.rank_tol,
            max_steps=config.max_steps,
            seed=_child_seed(seed, 300 + i),
        )
        dual_pts_transversal = True
        dual_count = 0
        if not degenerate:
            dual_rep = solve_finite_section(sliced, cfg2)
            dual_count = dual_rep.count
            for p in dual_rep.solutions:
                ok, _ = transversality_at(p.a, p.b, dual, config.rank_tol)
                dual_pts_transversal = dual_pts_transversal and ok
        finite_ok = not finite.degenerate
        records.append(
            DualityTrial(
                index=i,
                finite_count=finite.count,
                finite_expected=finite.expected_count,
                finite_all_transversal=finite.all_transversal,
                finite_degenerate=finite.degenerate,
                dual_points=dual_count,
                dual_all_transversal=dual_pts_transversal,
                agree=(finite_ok and dual_pts_transversal) if not degenerate else finite.degenerate,
            )
        )
    return DualityReport(
        n=n,
        dim_k=dim_k,
        degenerate_mode=degenerate,
        trials=records,
        all_agree=all(t.agree for t in records),
        all_flagged=all(t.finite_degenerate for t in records) if degenerate else False,
    )


def _random_finite_side_pair(n: int, dim_k: int, rng: random.Random) -> PairVK:
    expected_m = comb(n, 2) - 2 * n + 4
    if comb(n, 2) - dim_k != expected_m:
        raise ValueError(
            f"dim K must be {comb(n, 2) - expected_m} for a finite complement side at n={n}"
        )
    return random_rational_pair(n, dim_k, rng)
