"""Command line entry point: thin dispatch onto the shared operation drivers.

JSON reports go to --output (or stdout); a one-line human summary goes to
stderr so that piped output stays machine-readable.  Exit codes: 0 success,
1 usage or input error, 2 degeneracy detected, 3 negative membership answer.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from . import api
from .reports import dump_json
from .sections import SectionConfig
from .wedge import PairVK


def _config(seed, tol_path, tol_final, tol_dedup, tol_rank, tol_residual) -> SectionConfig:
    cfg = SectionConfig(seed=seed)
    if tol_path is not None:
        cfg.path_tol = tol_path
    if tol_final is not None:
        cfg.final_tol = tol_final
    if tol_dedup is not None:
        cfg.dedup_tol = tol_dedup
    if tol_rank is not None:
        cfg.rank_tol = tol_rank
    if tol_residual is not None:
        cfg.residual_tol = tol_residual
    return cfg


def _tolerance_options(f):
    for opt in (
        click.option("--tol-path", type=float, default=None, help="path tracking residual tolerance"),
        click.option("--tol-final", type=float, default=None, help="endpoint refinement tolerance"),
        click.option("--tol-dedup", type=float, default=None, help="solution deduplication tolerance"),
        click.option("--tol-rank", type=float, default=None, help="relative rank tolerance"),
        click.option("--tol-residual", type=float, default=None, help="quadric residual filter"),
    ):
        f = opt(f)
    return f


def _emit(payload: dict, output, summary: str) -> None:
    text = dump_json(payload)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
        click.echo(summary)
    else:
        sys.stdout.write(text)
        click.echo(summary, err=True)


def _load_pair(path: str) -> PairVK:
    with open(path) as fh:
        obj = json.load(fh)
    return PairVK.from_json_dict(obj)


@click.group()
def main():
    """Resonance loci of pairs (V, K) via Grassmannian linear sections."""


@main.command()
@click.option("--input", "input_path", type=click.Path(exists=True), default=None,
              help="pair JSON file")
@click.option("--random", "random_draw", is_flag=True, help="draw a random rational pair")
@click.option("--n", type=int, default=None)
@click.option("--dim-k", type=int, default=None)
@click.option("--seed", type=int, default=0)
@click.option("--output", type=click.Path(), default=None)
@_tolerance_options
def solve(input_path, random_draw, n, dim_k, seed, output,
          tol_path, tol_final, tol_dedup, tol_rank, tol_residual):
    """Solve a finite section and certify its points and lines."""
    cfg = _config(seed, tol_path, tol_final, tol_dedup, tol_rank, tol_residual)
    try:
        if input_path:
            pair = _load_pair(input_path)
        elif random_draw:
            if n is None or dim_k is None:
                raise click.UsageError("--random needs --n and --dim-k")
            pair = api.random_pair_for_solve(n, dim_k, seed)
        else:
            raise click.UsageError("provide --input or --random")
        payload, code = api.run_solve(pair, cfg)
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(api.EXIT_USAGE)
    rep = payload["report"]
    _emit(payload, output,
          f"{rep['count']}/{rep['expected_count']} points, "
          f"transversal={rep['all_transversal']}, disjoint={rep['lines_pairwise_disjoint']}, "
          f"degenerate={rep['degenerate']}")
    sys.exit(code)


@main.command()
@click.option("--input", "input_path", type=click.Path(exists=True), required=True)
@click.option("--point", type=str, required=True,
              help="comma-separated coordinates, rationals as p/q")
@click.option("--seed", type=int, default=0)
@click.option("--output", type=click.Path(), default=None)
@_tolerance_options
def membership(input_path, point, seed, output,
               tol_path, tol_final, tol_dedup, tol_rank, tol_residual):
    """Test one point for resonance membership and print a witness."""
    cfg = _config(seed, tol_path, tol_final, tol_dedup, tol_rank, tol_residual)
    try:
        pair = _load_pair(input_path)
        coords = [Fraction(tok.strip()) if pair.mode == "rational" else complex(tok.strip())
                  for tok in point.split(",")]
        if len(coords) != pair.n or all(c == 0 for c in coords):
            raise ValueError("point must be nonzero of length n")
        payload, code = api.run_membership(pair, coords, cfg)
    except (ValueError, OSError, json.JSONDecodeError, KeyError, ZeroDivisionError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(api.EXIT_USAGE)
    rep = payload["report"]
    verdict = "resonant" if rep["resonant"] else "non-resonant"
    witness = f", witness {rep['witness']}" if rep["witness"] else ""
    _emit(payload, output, f"{verdict}{witness}")
    sys.exit(code)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--dim-k", type=int, required=True)
@click.option("--trials", type=int, default=10)
@click.option("--degenerate", is_flag=True)
@click.option("--seed", type=int, default=0)
@click.option("--output", type=click.Path(), default=None)
@_tolerance_options
def duality(n, dim_k, trials, degenerate, seed, output,
            tol_path, tol_final, tol_dedup, tol_rank, tol_residual):
    """Transversality on the finite side versus the sliced dual side."""
    cfg = _config(seed, tol_path, tol_final, tol_dedup, tol_rank, tol_residual)
    try:
        payload, code = api.run_duality(n, dim_k, trials, degenerate, cfg)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(api.EXIT_USAGE)
    rep = payload["report"]
    ok = sum(1 for t in rep["trials"] if t["agree"])
    _emit(payload, output, f"{ok}/{len(rep['trials'])} trials as predicted")
    sys.exit(code)


@main.group()
@click.option("--a", "a", type=int, required=True)
@click.option("--b", "b", type=int, required=True)
@click.option("--trials", type=int, default=100)
@click.option("--seed", type=int, default=0)
@click.option("--output", type=click.Path(), default=None)
@click.pass_context
def p1(ctx, a, b, trials, seed, output):
    """Split-bundle strata, gcd/rank cross-checks and stratum dimensions."""
    ctx.ensure_object(dict)
    ctx.obj.update(a=a, b=b, trials=trials, seed=seed, output=output)


@p1.command()
@click.pass_context
def strata(ctx):
    """Sample every stratum and report the observed saturation degrees."""
    o = ctx.obj
    try:
        payload, code = api.run_p1_strata(o["a"], o["b"], o["trials"], o["seed"], SectionConfig(seed=o["seed"]))
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(api.EXIT_USAGE)
    _emit(payload, o["output"], f"strata {payload['report']['strata']}")
    sys.exit(code)


@p1.command()
@click.pass_context
def crosscheck(ctx):
    """Rank-based membership against the gcd test on random sections."""
    o = ctx.obj
    try:
        payload, code = api.run_p1_crosscheck(o["a"], o["b"], o["trials"], o["seed"], SectionConfig(seed=o["seed"]))
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(api.EXIT_USAGE)
    rep = payload["report"]
    _emit(payload, o["output"], f"{rep['agreements']}/{rep['total']} agree")
    sys.exit(code)


@p1.command()
@click.pass_context
def dims(ctx):
    """Jacobian ranks of the stratum parametrizations at random points."""
    o = ctx.obj
    try:
        payload, code = api.run_p1_dims(o["a"], o["b"], max(1, min(o["trials"], 10)), o["seed"], SectionConfig(seed=o["seed"]))
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(api.EXIT_USAGE)
    rep = payload["report"]
    _emit(payload, o["output"],
          " ".join(f"d={row['d']}:{row['expected_cone_dim']}" for row in rep["table"]))
    sys.exit(code)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--samples", type=int, default=1000)
@click.option("--seed", type=int, default=0)
@click.option("--output", type=click.Path(), default=None)
@_tolerance_options
def raag(n, samples, seed, output,
         tol_path, tol_final, tol_dedup, tol_rank, tol_residual):
    """Classify random points against the path-graph hyperplane union."""
    cfg = _config(seed, tol_path, tol_final, tol_dedup, tol_rank, tol_residual)
    try:
        payload, code = api.run_raag(n, samples, seed, cfg)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(api.EXIT_USAGE)
    rep = payload["report"]
    _emit(payload, output,
          f"{rep['hyperplane_count']} hyperplanes, {rep['mismatches']} mismatches over {rep['samples']} samples")
    sys.exit(code)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service wrapping the same operations."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
