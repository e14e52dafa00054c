"""Command-line interface.

Exit codes: 0 on success, 1 when a checked bound relation is violated,
2 on usage or state-validation errors.
"""

import json
import sys
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from .bounds import check_bounds, er_lower_curve, negativity_lower_bound
from .measures import concurrence, eof, negativity
from .relent import ERSolverConfig, rel_entropy_entanglement
from .states import load_density, sample_random, save_density

#: Stride between per-row sampler seeds; rows use seed * stride + index.
SEED_STRIDE = 1_000_003

#: Bounded-work solver settings for bulk scatter runs; the certificate of a
#: budget-limited run is still honest, just looser than the default config.
_ERE_SCATTER_CFG = ERSolverConfig(tol=1e-5, max_iters=400)

_SEP_TOL = 1e-9


@click.group()
def main():
    """Two-qubit entanglement measures, bound checks, and figure data."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--full", is_flag=True, help="Also run the relative-entropy solver.")
@click.option("--json", "as_json", is_flag=True, help="Emit one JSON object.")
def measure(file, full, as_json):
    """Report measures and the bound verdict for the state in FILE."""
    try:
        rho = load_density(file)
    except (ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    values = {
        "negativity": negativity(rho),
        "concurrence": concurrence(rho),
        "eof": eof(rho),
    }
    if full:
        values["rel_entropy"] = rel_entropy_entanglement(rho).value
    verdict = check_bounds(rho)
    if as_json:
        payload = dict(values)
        payload["bounds"] = {
            "upper_ok": verdict.upper_ok,
            "lower_ok": verdict.lower_ok,
            "slack_upper": verdict.slack_upper,
            "slack_lower": verdict.slack_lower,
            "upper_tight": verdict.upper_tight,
            "lower_tight": verdict.lower_tight,
        }
        click.echo(json.dumps(payload, sort_keys=True))
    else:
        for name, val in values.items():
            click.echo(f"{name:<12} {val:.12g}")
        click.echo(f"{'upper_ok':<12} {'yes' if verdict.upper_ok else 'NO'} "
                   f"(slack {verdict.slack_upper:.6e})")
        click.echo(f"{'lower_ok':<12} {'yes' if verdict.lower_ok else 'NO'} "
                   f"(slack {verdict.slack_lower:.6e})")
        click.echo(f"{'upper_tight':<12} {'yes' if verdict.upper_tight else 'no'}")
        click.echo(f"{'lower_tight':<12} {'yes' if verdict.lower_tight else 'no'}")
    if not (verdict.upper_ok and verdict.lower_ok):
        sys.exit(1)


def _scatter_row(pair: str, rank: int, row_seed: int):
    rho = sample_random(rank, row_seed)
    n = negativity(rho)
    if n <= _SEP_TOL:
        return None
    if pair == "nc":
        return concurrence(rho), n
    return eof(rho), rel_entropy_entanglement(rho, _ERE_SCATTER_CFG).value


@main.command()
@click.option("--samples", type=click.IntRange(min=1), required=True,
              help="Number of random states to draw.")
@click.option("--rank", type=click.Choice(["1", "2", "3", "4", "all"]),
              default="all", show_default=True,
              help="State rank to sample; 'all' cycles through 1-4.")
@click.option("--pair", type=click.Choice(["nc", "ere"]), default="nc",
              show_default=True,
              help="nc: (concurrence, negativity); ere: (eof, rel. entropy).")
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), required=True)
@click.option("--self-check", is_flag=True,
              help="Re-read the file and verify every row against the bounds.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
def scatter(samples, rank, pair, seed, out, self_check, workers):
    """Write scatter data for entangled random states as CSV.

    Separable draws are skipped and counted in the trailing comment line.
    Row seeds derive from --seed and the row index, so output is
    byte-reproducible for a fixed invocation.
    """
    ranks = [1, 2, 3, 4] if rank == "all" else [int(rank)]
    if pair == "ere":
        click.echo(
            f"# ere pair: {samples} solver runs, expect roughly {max(1, samples // 8):d} s",
            err=True,
        )

    jobs = [(ranks[i % len(ranks)], seed * SEED_STRIDE + i) for i in range(samples)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda j: _scatter_row(pair, *j), jobs))
    else:
        results = [_scatter_row(pair, *j) for j in jobs]

    skipped = 0
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write("x,y,rank,seed\n")
        for (rk, rseed), res in zip(jobs, results):
            if res is None:
                skipped += 1
                continue
            x, y = res
            fh.write(f"{x:.12g},{y:.12g},{rk},{rseed}\n")
        fh.write(f"# skipped: {skipped}\n")
    click.echo(f"wrote {samples - skipped} rows to {out} ({skipped} separable draws skipped)")

    if self_check:
        bad = 0
        soft = 0
        with open(out, "r", encoding="utf-8") as fh:
            next(fh)
            for line in fh:
                if line.startswith("#"):
                    continue
                xs, ys, _, _ = line.strip().split(",")
                x, y = float(xs), float(ys)
                if not (-1e-9 <= x <= 1 + 1e-9 and -1e-9 <= y <= 1 + 1e-9):
                    bad += 1
                    continue
                if pair == "nc":
                    if y > x + 1e-9 or y < negativity_lower_bound(x) - 1e-9:
                        bad += 1
                else:
                    if y > x + 1e-3:
                        bad += 1
                    elif y < er_lower_curve(x) - 1e-3:
                        soft += 1
        if soft:
            click.echo(f"self-check: {soft} rows under the empirical lower envelope")
        if bad:
            click.echo(f"self-check FAILED: {bad} rows violate the bounds", err=True)
            sys.exit(1)
        click.echo("self-check ok")


@main.command()
@click.option("--samples", type=click.IntRange(min=1), default=1000,
              show_default=True, help="Random states per rank.")
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
def verify(samples, seed, tol):
    """Re-derive both bound relations on random states of every rank."""
    worst_upper = (-np.inf, None)
    worst_lower = (-np.inf, None)
    idx = 0
    for rk in (1, 2, 3, 4):
        for _ in range(samples):
            rseed = seed * SEED_STRIDE + idx
            idx += 1
            rho = sample_random(rk, rseed)
            c = concurrence(rho)
            n = negativity(rho)
            vu = n - c
            vl = negativity_lower_bound(c) - n
            if vu > worst_upper[0]:
                worst_upper = (vu, rho)
            if vl > worst_lower[0]:
                worst_lower = (vl, rho)
    total = 4 * samples
    click.echo(f"upper relation (negativity <= concurrence): "
               f"max violation {max(worst_upper[0], 0.0):.3e} over {total} states")
    click.echo(f"lower relation (negativity >= boundary curve): "
               f"max violation {max(worst_lower[0], 0.0):.3e} over {total} states")
    if worst_upper[0] > tol or worst_lower[0] > tol:
        offender = worst_upper[1] if worst_upper[0] >= worst_lower[0] else worst_lower[1]
        artifact = "verify_violation.json"
        save_density(offender, artifact)
        click.echo(f"violation beyond tol={tol:g}; offending state written to {artifact}",
                   err=True)
        sys.exit(1)
    click.echo("ok")


@main.command()
@click.option("--which", type=click.Choice(["neg-lower", "er-lower"]), required=True,
              help="neg-lower: least negativity vs concurrence; "
                   "er-lower: least relative entropy vs formation cost.")
@click.option("--points", type=click.IntRange(min=2), default=201, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), required=True)
def curve(which, points, out):
    """Tabulate a lower-envelope curve on a uniform grid over [0, 1]."""
    fn = negativity_lower_bound if which == "neg-lower" else er_lower_curve
    xs = np.linspace(0.0, 1.0, points)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write("x,y\n")
        for x in xs:
            fh.write(f"{x:.12g},{fn(float(x)):.12g}\n")
    click.echo(f"wrote {points} points to {out}")


if __name__ == "__main__":
    main()
