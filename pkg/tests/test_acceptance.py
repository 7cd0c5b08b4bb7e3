"""Acceptance gate: every criterion at its stated tolerance, one line each."""

import random
import time
from fractions import Fraction
from math import comb

import numpy as np

from resloci.homotopy import CONVERGED, MultiPoly, PolySystem, TrackConfig, solve_total_degree
from resloci.linalg import RATIONAL, Matrix, rank
from resloci.sections import (
    SectionConfig,
    degenerate_pair,
    duality_experiment,
    solve_finite_section,
    transversality_at,
)
from resloci.split_bundles import (
    BinaryForm,
    SplitBundle,
    build_pair,
    cross_check,
    random_binary_form,
    stratum_cone_dimension,
)
from resloci.wedge import (
    PairVK,
    decompose,
    is_resonant,
    orthogonal_complement,
    raag_path_pair,
    random_fraction,
    random_rational_pair,
    wedge_vectors,
)


def _report(number: int, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number:02d}: {status} - {detail}")


def test_criterion_01_crafted_two_lines():
    pair = PairVK.from_kperp_basis(
        4, [[1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1]], RATIONAL
    )
    t0 = time.perf_counter()
    rep = solve_finite_section(pair, SectionConfig(seed=1))
    elapsed = time.perf_counter() - t0
    targets = [np.array([1, 0]), np.array([0, 1])]
    matched = 0
    for p in rep.solutions:
        t = np.array([abs(x) for x in p.t])
        if any(np.linalg.norm(t - want) < 1e-8 for want in targets):
            matched += 1
    ok = (
        rep.count == 2
        and matched == 2
        and rep.all_transversal
        and rep.lines_pairwise_disjoint
        and elapsed < 0.1
    )
    _report(1, ok, f"2 points matched to 1e-8, transversal, disjoint, {elapsed:.3f}s")
    assert ok


def test_criterion_02_twenty_n5_instances():
    failures = []
    for seed in range(20):
        rng = random.Random(1000 + seed)
        pair = random_rational_pair(5, 6, rng)  # dim Kperp = 4
        t0 = time.perf_counter()
        rep = solve_finite_section(pair, SectionConfig(seed=2000 + seed))
        elapsed = time.perf_counter() - t0
        good = (
            rep.count == 5
            and all(p.full_residual < 1e-8 for p in rep.solutions)
            and rep.all_transversal
            and rep.lines_pairwise_disjoint
            and elapsed < 1.0
        )
        if not good:
            failures.append(seed)
    _report(2, not failures, f"20/20 instances with 5 transversal disjoint lines{failures or ''}")
    assert not failures


def test_criterion_03_twenty_n6_instances():
    failures = []
    for seed in range(20):
        rng = random.Random(3000 + seed)
        pair = random_rational_pair(6, 8, rng)  # dim Kperp = 7
        t0 = time.perf_counter()
        rep = solve_finite_section(pair, SectionConfig(seed=4000 + seed))
        elapsed = time.perf_counter() - t0
        good = (
            rep.count == 14
            and rep.paths_run == 64
            and rep.all_transversal
            and rep.lines_pairwise_disjoint
            and elapsed < 5.0
        )
        if not good:
            failures.append((seed, rep.count, round(elapsed, 2)))
    _report(3, not failures, f"20/20 instances with 14 transversal disjoint lines, 64 paths{failures or ''}")
    assert not failures


def test_criterion_04_duality_agreement():
    agreed = 0
    total = 0
    for n, dim_k in [(4, 4), (5, 6), (6, 8)]:
        rep = duality_experiment(n, dim_k, trials=10, seed=50 + n)
        agreed += sum(1 for t in rep.trials if t.agree)
        total += len(rep.trials)
    ok = agreed == total == 30
    _report(4, ok, f"{agreed}/{total} trials: finite side and sliced dual side transversal")
    assert ok


def test_criterion_05_degenerate_detection():
    flagged = 0
    for seed in range(5):
        rng = random.Random(7000 + seed)
        pair, _mu0 = degenerate_pair(6, 8, rng)
        rep = solve_finite_section(pair, SectionConfig(seed=7100 + seed))
        if rep.degenerate:
            flagged += 1
    ok = flagged == 5
    _report(5, ok, f"{flagged}/5 constructed instances flagged on the finite dual side")
    assert ok


def test_criterion_06_oracle_equivalence():
    total = 0
    agreed = 0
    for a, b in [(1, 1), (1, 2), (2, 2), (2, 3)]:
        rep = cross_check(SplitBundle(a, b), 1000, random.Random(10 * a + b))
        total += rep.total
        agreed += rep.agreements
    ok = agreed == total == 4000
    _report(6, ok, f"{agreed}/{total} rank-test vs gcd-test agreements")
    assert ok


def test_criterion_07_stratum_dimensions():
    bad = []
    for a in range(1, 5):
        for b in range(a, 5):
            for d in range(1, a + 1):
                rng = random.Random(100 * a + 10 * b + d)
                expected = a + b - d + 2
                for _ in range(10):
                    r = stratum_cone_dimension(SplitBundle(a, b), d, rng)
                    if r != expected:
                        bad.append((a, b, d, r))
    _report(7, not bad, f"parametrization Jacobian rank = a+b-d+2 at 10 points per (a,b,d){bad or ''}")
    assert not bad


def test_criterion_08_transversality_dichotomy():
    rng = random.Random(88)
    pair11 = build_pair(SplitBundle(1, 1))
    conic_ok = True
    for _ in range(25):
        al, be = random_fraction(rng), random_fraction(rng)
        if al == 0 and be == 0:
            al = Fraction(1)
        a = (al, Fraction(0), be, Fraction(0))
        b = (Fraction(0), al, Fraction(0), be)
        ok, _ = transversality_at(a, b, pair11)
        conic_ok = conic_ok and ok

    pair22 = build_pair(SplitBundle(2, 2))
    x0 = BinaryForm.make(1, [1, 0])
    x1 = BinaryForm.make(1, [0, 1])
    found_failure = False
    for _ in range(5):
        lam, mu = random_fraction(rng), random_fraction(rng)
        if lam == 0 and mu == 0:
            lam = Fraction(1)
        alpha = random_binary_form(rng, 1)
        s1, s2 = alpha.multiply(x0), alpha.multiply(x1)
        a = tuple(lam * c for c in s1.coeffs) + tuple(mu * c for c in s1.coeffs)
        b = tuple(lam * c for c in s2.coeffs) + tuple(mu * c for c in s2.coeffs)
        ok, _ = transversality_at(a, b, pair22)
        found_failure = found_failure or not ok
    ok = conic_ok and found_failure
    _report(8, ok, "25 conic points transversal; larger split bundle has a failing point")
    assert ok


def test_criterion_09_raag_classification():
    results = {}
    for n in (4, 5, 6):
        pair = raag_path_pair(n)
        rng = random.Random(900 + n)
        interior = list(range(2, n))
        mismatches = 0
        non_resonant = 0
        for k in range(1000):
            a = [random_fraction(rng) for _ in range(n)]
            if all(x == 0 for x in a):
                a[0] = Fraction(1)
            if k % 2 == 0:
                a[rng.choice(interior) - 1] = Fraction(0)
            elif k % 4 == 1:
                a[rng.choice([1, n]) - 1] = Fraction(0)
            predicted = any(a[i - 1] == 0 for i in interior)
            actual, _ = is_resonant(a, pair)
            if actual != predicted:
                mismatches += 1
            if not actual:
                non_resonant += 1
        results[n] = (mismatches, non_resonant)
    ok = all(m == 0 and nr > 0 for m, nr in results.values())
    _report(9, ok, f"hyperplane classification mismatches by n: { {n: v[0] for n, v in results.items()} }")
    assert ok


def test_criterion_10_property_suites():
    checks = {}

    # wedge antisymmetry, 200 cases
    rng = random.Random(1)
    ok = True
    for _ in range(200):
        n = rng.choice([4, 5, 6])
        a = [random_fraction(rng) for _ in range(n)]
        b = [random_fraction(rng) for _ in range(n)]
        w1, w2 = wedge_vectors(a, b), wedge_vectors(b, a)
        ok = ok and all(x == -y for x, y in zip(w1.coords, w2.coords))
    checks["antisymmetry"] = ok

    # decompose roundtrip, 200 cases
    rng = random.Random(2)
    ok = True
    done = 0
    while done < 200:
        n = rng.choice([4, 5, 6])
        a = [random_fraction(rng) for _ in range(n)]
        b = [random_fraction(rng) for _ in range(n)]
        w = wedge_vectors(a, b)
        if w.is_zero():
            continue
        x, y = decompose(w)
        m = Matrix.from_rows([list(a), list(b), list(x), list(y)], RATIONAL)
        ok = ok and rank(m) == 2
        done += 1
    checks["decompose_roundtrip"] = ok

    # double orthogonal complement, 200 cases
    rng = random.Random(3)
    ok = True
    for _ in range(200):
        n = rng.choice([4, 5])
        k = rng.randint(1, comb(n, 2) - 1)
        pair = random_rational_pair(n, k, rng)
        comp2 = orthogonal_complement(list(pair.kperp_basis))
        rows = [f.coords for f in pair.k_basis] + [f.coords for f in comp2]
        ok = ok and rank(Matrix.from_rows(rows, RATIONAL)) == k
    checks["double_complement"] = ok

    # scaling invariance of membership, 200 cases
    rng = random.Random(4)
    ok = True
    for _ in range(200):
        n = rng.choice([4, 5])
        pair = raag_path_pair(n)
        a = [random_fraction(rng) for _ in range(n)]
        if all(x == 0 for x in a):
            continue
        lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        ok = ok and is_resonant(a, pair)[0] == is_resonant([lam * x for x in a], pair)[0]
    checks["scaling_invariance"] = ok

    # Jacobian versus central differences, 200 systems at 1e-6 relative
    rng = random.Random(5)
    ok = True
    h = 1e-6
    for _ in range(200):
        nvars = rng.choice([1, 2, 3])
        polys = []
        for _ in range(nvars):
            terms = [
                (tuple(rng.randint(0, 3) for _ in range(nvars)),
                 complex(rng.gauss(0, 1), rng.gauss(0, 1)))
                for _ in range(4)
            ]
            polys.append(MultiPoly.from_terms(nvars, terms))
        sys_ = PolySystem(polys)
        z = np.array([complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(nvars)])
        jac = sys_.jacobian(z)
        for j in range(nvars):
            dz = np.zeros(nvars, dtype=complex)
            dz[j] = h
            fd = (sys_.evaluate(z + dz) - sys_.evaluate(z - dz)) / (2 * h)
            scale = np.maximum(1.0, np.abs(jac[:, j]))
            ok = ok and bool(np.all(np.abs(fd - jac[:, j]) / scale < 1e-6))
    checks["jacobian_fd"] = ok

    # gamma-rerun stability, 200 cases at 1e-6 Hausdorff
    rng = random.Random(6)
    ok = True
    for case in range(200):
        terms1 = [((2,), complex(rng.gauss(0, 1), rng.gauss(0, 1))),
                  ((1,), complex(rng.gauss(0, 1), rng.gauss(0, 1))),
                  ((0,), complex(rng.gauss(0, 1), rng.gauss(0, 1)))]
        sys_ = PolySystem([MultiPoly.from_terms(1, terms1)])
        r1 = solve_total_degree(sys_, TrackConfig(seed=2 * case))
        r2 = solve_total_degree(sys_, TrackConfig(seed=2 * case + 1))
        p1 = [np.array(s.point) for s in r1.solutions if s.status == CONVERGED]
        p2 = [np.array(s.point) for s in r2.solutions if s.status == CONVERGED]
        if len(p1) != len(p2) or not p1:
            ok = False
            continue
        hausdorff = max(min(np.linalg.norm(x - y) for y in p2) for x in p1)
        ok = ok and hausdorff < 1e-6
    checks["gamma_rerun"] = ok

    passed = all(checks.values())
    _report(10, passed, f"property suites: { {k: ('ok' if v else 'FAIL') for k, v in checks.items()} }")
    assert passed
