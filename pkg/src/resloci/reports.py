"""Report serialization: one JSON shape shared by the CLI and the service.

Rationals serialize as "p/q" strings, complex numbers as [re, im] pairs.
Every envelope records tool version, seed, tolerances and wall-clock time;
payloads are emitted with sorted keys so identical runs produce identical
bytes (up to the timing field).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional

from . import __version__
from .sections import DualityReport, SectionConfig, SectionReport


def to_jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def section_report_dict(rep: SectionReport) -> dict:
    return {
        "n": rep.n,
        "m": rep.m,
        "expected_count": rep.expected_count,
        "count": rep.count,
        "paths_run": rep.paths_run,
        "paths_converged": rep.paths_converged,
        "paths_diverged": rep.paths_diverged,
        "paths_max_steps": rep.paths_max_steps,
        "paths_cluster": rep.paths_cluster,
        "all_transversal": rep.all_transversal,
        "lines_pairwise_disjoint": rep.lines_pairwise_disjoint,
        "degenerate": rep.degenerate,
        "points": [
            {
                "t": to_jsonable(p.t),
                "omega": to_jsonable(p.omega.coords),
                "a": to_jsonable(p.a),
                "b": to_jsonable(p.b),
                "full_residual": p.full_residual,
                "transversal": p.transversal,
                "tangent_rank": p.tangent_rank,
                "multiplicity_flag": p.multiplicity_flag,
            }
            for p in rep.solutions
        ],
        "disjointness": rep.disjointness,
    }


def duality_report_dict(rep: DualityReport) -> dict:
    return {
        "n": rep.n,
        "dim_k": rep.dim_k,
        "degenerate_mode": rep.degenerate_mode,
        "all_agree": rep.all_agree,
        "all_flagged": rep.all_flagged,
        "trials": [
            {
                "index": t.index,
                "finite_count": t.finite_count,
                "finite_expected": t.finite_expected,
                "finite_all_transversal": t.finite_all_transversal,
                "finite_degenerate": t.finite_degenerate,
                "dual_points": t.dual_points,
                "dual_all_transversal": t.dual_all_transversal,
                "agree": t.agree,
            }
            for t in rep.trials
        ],
    }


def envelope(command: str, seed: Optional[int], config: SectionConfig,
             report: dict, wall_time_s: float) -> dict:
    return {
        "tool": "resloci",
        "version": __version__,
        "command": command,
        "seed": seed,
        "tolerances": config.as_dict(),
        "wall_time_s": wall_time_s,
        "report": report,
    }


def dump_json(payload: dict) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n"
