"""Operation drivers shared by the command line and the HTTP service.

Each run_* function executes one user-facing operation and returns
(payload dict, exit code).  Exit codes: 0 success, 1 usage error,
2 degeneracy detected, 3 negative membership answer.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Optional, Sequence

from .reports import duality_report_dict, envelope, section_report_dict, to_jsonable
from .sections import (
    SectionConfig,
    duality_experiment,
    membership_cross_check,
    solve_finite_section,
)
from .split_bundles import (
    SplitBundle,
    cross_check,
    sample_stratum,
    stratum,
    stratum_cone_dimension,
)
from .wedge import PairVK, is_resonant, raag_path_pair, random_fraction, random_rational_pair

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGENERATE = 2
EXIT_NEGATIVE = 3


def random_pair_for_solve(n: int, dim_k: int, seed: Optional[int]) -> PairVK:
    return random_rational_pair(n, dim_k, random.Random(seed))


def run_solve(pair: PairVK, config: SectionConfig, command: str = "solve"):
    t0 = time.perf_counter()
    rep = solve_finite_section(pair, config)
    membership_ok = membership_cross_check(
        rep.solutions, pair, config.membership_samples, seed=config.seed
    )
    payload = section_report_dict(rep)
    payload["membership_cross_check"] = membership_ok
    code = EXIT_DEGENERATE if rep.degenerate else EXIT_OK
    wall = time.perf_counter() - t0
    return envelope(command, config.seed, config, payload, wall), code


def run_membership(pair: PairVK, point: Sequence, config: SectionConfig):
    t0 = time.perf_counter()
    tol = None if pair.mode == "rational" else config.rank_tol
    resonant, witness = is_resonant(point, pair, tol)
    payload = {
        "n": pair.n,
        "point": to_jsonable(list(point)),
        "resonant": resonant,
        "witness": to_jsonable(list(witness)) if witness is not None else None,
    }
    code = EXIT_OK if resonant else EXIT_NEGATIVE
    wall = time.perf_counter() - t0
    return envelope("membership", config.seed, config, payload, wall), code


def run_duality(n: int, dim_k: int, trials: int, degenerate: bool,
                config: SectionConfig):
    t0 = time.perf_counter()
    rep = duality_experiment(n, dim_k, trials, degenerate, config.seed, config)
    payload = duality_report_dict(rep)
    if degenerate:
        code = EXIT_DEGENERATE if any(t.finite_degenerate for t in rep.trials) else EXIT_OK
    else:
        code = EXIT_OK if rep.all_agree else EXIT_DEGENERATE
    wall = time.perf_counter() - t0
    return envelope("duality", config.seed, config, payload, wall), code


ZERO_COMPONENT_NOTE = (
    "a section with vanishing first component is assigned to stratum b, and "
    "one with vanishing second component to stratum a: the saturation is the "
    "summand containing the section, read as closure membership"
)


def run_p1_strata(a: int, b: int, trials: int, seed: Optional[int],
                  config: SectionConfig):
    t0 = time.perf_counter()
    bundle = SplitBundle(a, b)
    rng = random.Random(seed)
    strata = list(range(1, a + 1)) + ([b] if b > a else [])
    table = []
    for d in strata:
        histogram: dict = {}
        for _ in range(trials):
            s = sample_stratum(bundle, d, rng)
            got = stratum(s)
            histogram[got] = histogram.get(got, 0) + 1
        table.append({"target_stratum": d, "observed": histogram})
    payload = {
        "a": a,
        "b": b,
        "strata": strata,
        "samples_per_stratum": trials,
        "table": table,
        "zero_component_convention": ZERO_COMPONENT_NOTE,
    }
    wall = time.perf_counter() - t0
    return envelope("p1-strata", seed, config, payload, wall), EXIT_OK


def run_p1_crosscheck(a: int, b: int, trials: int, seed: Optional[int],
                      config: SectionConfig):
    t0 = time.perf_counter()
    bundle = SplitBundle(a, b)
    rep = cross_check(bundle, trials, random.Random(seed))
    payload = {
        "a": a,
        "b": b,
        "total": rep.total,
        "agreements": rep.agreements,
        "all_agree": rep.all_agree,
        "witness_checked": rep.witness_checked,
        "witness_consistent": rep.witness_consistent,
        "strata_histogram": {str(k): v for k, v in sorted(rep.strata_histogram.items())},
        "zero_component_convention": ZERO_COMPONENT_NOTE,
    }
    code = EXIT_OK if rep.all_agree else EXIT_DEGENERATE
    wall = time.perf_counter() - t0
    return envelope("p1-crosscheck", seed, config, payload, wall), code


def run_p1_dims(a: int, b: int, trials: int, seed: Optional[int],
                config: SectionConfig):
    t0 = time.perf_counter()
    bundle = SplitBundle(a, b)
    rng = random.Random(seed)
    table = []
    all_match = True
    for d in range(1, a + 1):
        expected = a + b - d + 2
        ranks = [stratum_cone_dimension(bundle, d, rng) for _ in range(max(1, trials))]
        match = all(r == expected for r in ranks)
        all_match = all_match and match
        table.append({"d": d, "expected_cone_dim": expected, "ranks": ranks, "match": match})
    payload = {"a": a, "b": b, "table": table, "all_match": all_match}
    code = EXIT_OK if all_match else EXIT_DEGENERATE
    wall = time.perf_counter() - t0
    return envelope("p1-dims", seed, config, payload, wall), code


def run_raag(n: int, samples: int, seed: Optional[int], config: SectionConfig):
    t0 = time.perf_counter()
    pair = raag_path_pair(n)
    rng = random.Random(seed)
    interior = list(range(2, n))
    mismatches = 0
    n_resonant = 0
    for k in range(samples):
        a = [random_fraction(rng) for _ in range(n)]
        if all(x == 0 for x in a):
            a[0] = Fraction(1)
        if k % 2 == 0:
            a[rng.choice(interior) - 1] = Fraction(0)
        elif k % 4 == 1:
            a[rng.choice([1, n]) - 1] = Fraction(0)
        predicted = any(a[i - 1] == 0 for i in interior)
        actual, _ = is_resonant(a, pair)
        if actual:
            n_resonant += 1
        if actual != predicted:
            mismatches += 1
    payload = {
        "n": n,
        "hyperplane_count": n - 2,
        "hyperplanes": [f"coordinate {i} = 0" for i in interior],
        "samples": samples,
        "resonant": n_resonant,
        "non_resonant": samples - n_resonant,
        "mismatches": mismatches,
        "classification_matches": mismatches == 0,
    }
    code = EXIT_OK if mismatches == 0 else EXIT_DEGENERATE
    wall = time.perf_counter() - t0
    return envelope("raag", seed, config, payload, wall), code
