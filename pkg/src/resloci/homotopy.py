"""Total-degree homotopy continuation for small dense polynomial systems.

Square systems over the complex numbers are solved by tracking all Bezout-many
paths from the start system z_i^{d_i} - 1, blended with a random unit-modulus
constant so that paths stay nonsingular for almost every draw.  Tracking is
Euler prediction plus a short Newton correction with adaptive step length;
endpoints are Newton-refined on the target system, deduplicated, and flagged
when the Jacobian is rank-deficient at the limit.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

CONVERGED = "converged"
DIVERGED = "diverged"
MAX_STEPS = "max-steps"
CLUSTER = "cluster-suspect"

_DIVERGENCE_NORM = 1e8
_MIN_STEP = 1e-7
_SINGULAR_RATIO = 1e-8


@dataclass(frozen=True)
class MultiPoly:
    """Sparse multivariate polynomial: (exponent tuple, complex coefficient) terms."""

    nvars: int
    terms: tuple

    @staticmethod
    def from_terms(nvars: int, terms) -> "MultiPoly":
        merged: dict = {}
        for expo, coeff in terms:
            expo = tuple(int(e) for e in expo)
            if len(expo) != nvars:
                raise ValueError("exponent tuple length must equal nvars")
            merged[expo] = merged.get(expo, 0j) + complex(coeff)
        clean = tuple(sorted((e, c) for e, c in merged.items() if c != 0))
        return MultiPoly(nvars, clean)

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def evaluate(self, z: Sequence[complex]) -> complex:
        zz = np.asarray(z, dtype=complex)
        total = 0j
        for expo, coeff in self.terms:
            v = coeff
            for zi, ei in zip(zz, expo):
                if ei:
                    v *= zi**ei
            total += v
        return total

    def diff(self, var: int) -> "MultiPoly":
        terms = []
        for expo, coeff in self.terms:
            e = expo[var]
            if e:
                new = list(expo)
                new[var] = e - 1
                terms.append((tuple(new), coeff * e))
        return MultiPoly.from_terms(self.nvars, terms)


class PolySystem:
    """A sequence of polynomials in common variables, with fast batch
    evaluation and Jacobian via stacked term arrays."""

    def __init__(self, polys: Sequence[MultiPoly]):
        if not polys:
            raise ValueError("empty system")
        nvars = polys[0].nvars
        for p in polys:
            if p.nvars != nvars:
                raise ValueError("all polynomials must share the variable count")
        self.polys = tuple(polys)
        self.nvars = nvars
        self.npolys = len(polys)
        self._build_stacks()

    def degrees(self) -> tuple:
        return tuple(p.degree() for p in self.polys)

    def _build_stacks(self):
        ev_e, ev_c, ev_r = [], [], []
        ja_e, ja_c, ja_flat = [], [], []
        for i, p in enumerate(self.polys):
            for expo, coeff in p.terms:
                ev_e.append(expo)
                ev_c.append(coeff)
                ev_r.append(i)
                for j, e in enumerate(expo):
                    if e:
                        d = list(expo)
                        d[j] = e - 1
                        ja_e.append(tuple(d))
                        ja_c.append(coeff * e)
                        ja_flat.append(i * self.nvars + j)
        self._ev_e = np.array(ev_e, dtype=np.int64).reshape(len(ev_e), self.nvars)
        self._ev_c = np.array(ev_c, dtype=complex)
        self._ev_r = np.array(ev_r, dtype=np.intp)
        self._ja_e = np.array(ja_e, dtype=np.int64).reshape(len(ja_e), self.nvars)
        self._ja_c = np.array(ja_c, dtype=complex)
        self._ja_flat = np.array(ja_flat, dtype=np.intp)
        # scale of the Jacobian entries, used to judge rank deficiency at roots
        scale = np.zeros(self.npolys * self.nvars)
        np.add.at(scale, self._ja_flat, np.abs(self._ja_c))
        self.jacobian_scale = float(scale.max()) if scale.size else 1.0

    def evaluate(self, z: Sequence[complex]) -> np.ndarray:
        zz = np.asarray(z, dtype=complex)
        if zz.shape != (self.nvars,):
            raise ValueError("point length must equal nvars")
        vals = self._ev_c * np.prod(zz[None, :] ** self._ev_e, axis=1)
        out = np.zeros(self.npolys, dtype=complex)
        np.add.at(out, self._ev_r, vals)
        return out

    def jacobian(self, z: Sequence[complex]) -> np.ndarray:
        zz = np.asarray(z, dtype=complex)
        if zz.shape != (self.nvars,):
            raise ValueError("point length must equal nvars")
        out = np.zeros(self.npolys * self.nvars, dtype=complex)
        if self._ja_c.size:
            vals = self._ja_c * np.prod(zz[None, :] ** self._ja_e, axis=1)
            np.add.at(out, self._ja_flat, vals)
        return out.reshape(self.npolys, self.nvars)


@dataclass(frozen=True)
class TrackedSolution:
    point: tuple
    residual: float
    newton_iterations: int
    status: str


@dataclass
class TrackConfig:
    path_tol: float = 1e-8
    final_tol: float = 1e-12
    dedup_tol: float = 1e-6
    max_steps: int = 2000
    seed: Optional[int] = None
    newton_max_iter: int = 50


@dataclass
class SolveResult:
    solutions: list
    multiplicities: list
    paths_run: int
    n_converged: int
    n_diverged: int
    n_max_steps: int
    n_cluster: int
    gamma: complex

    def status_total(self) -> int:
        return self.n_converged + self.n_diverged + self.n_max_steps + self.n_cluster


def newton_refine(system: PolySystem, z0: Sequence[complex], max_iter: int = 50,
                  tol: float = 1e-10) -> TrackedSolution:
    """Newton iteration toward a root; singular Jacobians flag, never raise."""
    if system.npolys != system.nvars:
        raise ValueError("newton_refine requires a square system")
    z = np.asarray(z0, dtype=complex)
    f = system.evaluate(z)
    res = float(np.linalg.norm(f, ord=np.inf))
    iters = 0
    while res > tol and iters < max_iter:
        jac = system.jacobian(z)
        try:
            dz = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return TrackedSolution(tuple(z), res, iters, CLUSTER)
        if not np.all(np.isfinite(dz)):
            return TrackedSolution(tuple(z), res, iters, CLUSTER)
        z = z + dz
        if np.linalg.norm(z) > _DIVERGENCE_NORM:
            return TrackedSolution(tuple(z), float("inf"), iters + 1, DIVERGED)
        f = system.evaluate(z)
        res = float(np.linalg.norm(f, ord=np.inf))
        iters += 1
    if res > tol:
        return TrackedSolution(tuple(z), res, iters, MAX_STEPS)
    # On a multiple root, Newton stalls at distance ~sqrt(tol), where the
    # smallest singular value is itself ~sqrt(tol); the threshold must sit
    # above that to catch the singularity from the computed point.
    sv = np.linalg.svd(system.jacobian(z), compute_uv=False)
    scale = max(float(sv[0]) if sv.size else 0.0, system.jacobian_scale)
    cutoff = max(_SINGULAR_RATIO, 10.0 * math.sqrt(tol)) * scale
    status = CLUSTER if sv.size == 0 or sv[-1] < cutoff else CONVERGED
    return TrackedSolution(tuple(complex(x) for x in z), res, iters, status)


def total_degree_start_points(degrees: Sequence[int]):
    """All combinations of d_i-th roots of unity, the roots of z_i^{d_i} = 1."""
    per_var = [
        [cmath.exp(2j * cmath.pi * k / d) for k in range(d)] for d in degrees
    ]
    return [np.array(combo, dtype=complex) for combo in itertools.product(*per_var)]


class _StartSystem:
    """z_i^{d_i} - 1, with analytic evaluation and (diagonal) Jacobian."""

    def __init__(self, degrees: Sequence[int]):
        self.degrees = np.array(degrees, dtype=np.int64)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return z**self.degrees - 1.0

    def jacobian_diag(self, z: np.ndarray) -> np.ndarray:
        return self.degrees * z ** (self.degrees - 1)


def _track_path(target: PolySystem, start: _StartSystem, z0: np.ndarray,
                gamma: complex, config: TrackConfig) -> TrackedSolution:
    z = z0.copy()
    t = 0.0
    dt = 0.05
    successes = 0
    steps = 0
    nv = target.nvars
    while t < 1.0:
        if steps >= config.max_steps:
            return _endpoint(target, z, config, MAX_STEPS)
        dt = min(dt, 1.0 - t)
        gz = start.evaluate(z)
        fz = target.evaluate(z)
        hz = (1.0 - t) * gamma * np.diag(start.jacobian_diag(z)) + t * target.jacobian(z)
        ok = False
        try:
            dz = np.linalg.solve(hz, -(fz - gamma * gz))
            if np.all(np.isfinite(dz)):
                z_new, corr_ok = _newton_correct(target, start, z + dz * dt,
                                                 t + dt, gamma, config)
                ok = corr_ok
        except np.linalg.LinAlgError:
            ok = False
        if ok:
            z = z_new
            t = t + dt
            if np.linalg.norm(z) > _DIVERGENCE_NORM:
                return TrackedSolution(tuple(z), float("inf"), 0, DIVERGED)
            successes += 1
            if successes >= 4:
                dt *= 1.5
                successes = 0
        else:
            successes = 0
            dt *= 0.5
            if dt < _MIN_STEP:
                return _endpoint(target, z, config, MAX_STEPS)
        steps += 1
    return _endpoint(target, z, config, None)


def _newton_correct(target, start, z, t, gamma, config):
    """At most three Newton steps on the frozen-t homotopy; fail on growth."""
    res_prev = float("inf")
    for _ in range(3):
        h = (1.0 - t) * gamma * start.evaluate(z) + t * target.evaluate(z)
        res = float(np.linalg.norm(h, ord=np.inf))
        if res < config.path_tol:
            return z, True
        if res >= res_prev:
            return z, False
        res_prev = res
        hz = (1.0 - t) * gamma * np.diag(start.jacobian_diag(z)) + t * target.jacobian(z)
        try:
            dz = np.linalg.solve(hz, -h)
        except np.linalg.LinAlgError:
            return z, False
        if not np.all(np.isfinite(dz)):
            return z, False
        z = z + dz
    h = (1.0 - t) * gamma * start.evaluate(z) + t * target.evaluate(z)
    return z, float(np.linalg.norm(h, ord=np.inf)) < config.path_tol


def _endpoint(target, z, config, forced_status):
    if forced_status == MAX_STEPS:
        # still try to land on the target; salvaged endpoints are common
        sol = newton_refine(target, z, config.newton_max_iter, config.final_tol)
        if sol.status == CONVERGED or sol.status == CLUSTER:
            return sol
        return TrackedSolution(sol.point, sol.residual, sol.newton_iterations, MAX_STEPS)
    return newton_refine(target, z, config.newton_max_iter, config.final_tol)


def deduplicate(solutions: Sequence[TrackedSolution], tol: float):
    """Merge endpoints within relative distance tol; keeps best residual.

    Returns (representatives, multiplicities); idempotent by construction.
    """
    reps: list = []
    counts: list = []
    for sol in solutions:
        placed = False
        for i, rep in enumerate(reps):
            a = np.array(rep.point)
            b = np.array(sol.point)
            if np.linalg.norm(a - b) <= tol * (1.0 + np.linalg.norm(a)):
                counts[i] += 1
                if sol.residual < rep.residual:
                    reps[i] = sol
                placed = True
                break
        if not placed:
            reps.append(sol)
            counts.append(1)
    return reps, counts


def solve_total_degree(system: PolySystem, config: Optional[TrackConfig] = None) -> SolveResult:
    """Track every total-degree path of a square system to the target roots."""
    config = config or TrackConfig()
    if system.npolys != system.nvars:
        raise ValueError("solve_total_degree requires a square system")
    degrees = system.degrees()
    if any(d < 1 for d in degrees):
        raise ValueError("every polynomial must have degree at least 1")
    rng = random.Random(config.seed)
    gamma = cmath.exp(2j * cmath.pi * rng.random())
    start = _StartSystem(degrees)
    endpoints = []
    for z0 in total_degree_start_points(degrees):
        endpoints.append(_track_path(system, start, z0, gamma, config))
    n_conv = sum(1 for s in endpoints if s.status == CONVERGED)
    n_div = sum(1 for s in endpoints if s.status == DIVERGED)
    n_max = sum(1 for s in endpoints if s.status == MAX_STEPS)
    n_clu = sum(1 for s in endpoints if s.status == CLUSTER)
    keep = [s for s in endpoints if s.status in (CONVERGED, CLUSTER)]
    reps, counts = deduplicate(keep, config.dedup_tol)
    return SolveResult(
        solutions=reps,
        multiplicities=counts,
        paths_run=len(endpoints),
        n_converged=n_conv,
        n_diverged=n_div,
        n_max_steps=n_max,
        n_cluster=n_clu,
        gamma=gamma,
    )
