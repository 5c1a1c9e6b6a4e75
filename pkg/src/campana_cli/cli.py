"""CLI entry point for campana-cli."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path
from typing import Any, Optional

import click
from rich.console import Console

from campana_cli import __version__
from campana_cli.errors import CampanaError

console = Console(stderr=True)


def _split(value: Optional[str]) -> Optional[list[str]]:
    if value is None:
        return None
    return [part.strip() for part in value.split(",") if part.strip()]


def _ints(value: Optional[str]) -> Optional[list[int]]:
    parts = _split(value)
    if parts is None:
        return None
    try:
        return [int(p) for p in parts]
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from e


def run_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Options shared by every computing command."""
    options = [
        click.option(
            "-c",
            "--config",
            "config_path",
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            help="Configuration file (YAML)",
        ),
        click.option(
            "-B", "--bound", "bounds", type=int, multiple=True, help="Height bound (repeatable)"
        ),
        click.option("--prime-cutoff", type=int, help="Largest prime in Euler products"),
        click.option("--work-cap", type=int, help="Largest number of visited points"),
        click.option("--workers", type=int, help="Worker processes for exact counts"),
        click.option("--seed", type=int, help="Random seed"),
        click.option("--precision", "precision_bits", type=int, help="mpmath working precision in bits"),
        click.option(
            "-o", "--out", type=click.Path(dir_okay=False, path_type=Path), help="JSON report file"
        ),
        click.option("--csv", type=click.Path(dir_okay=False, path_type=Path), help="CSV series file"),
        click.option("--timings", "record_timings", is_flag=True, default=None, help="Record timings"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def fan_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """The fan argument with weight and divisor overrides."""
    func = click.option("--L", "L", help="Coefficients of L, e.g. '1/2,1,1'")(func)
    func = click.option("-m", "--m", "m", help="Orbifold weights, one value or one per ray")(func)
    return click.argument("fan")(func)


def _execute(
    ctx: click.Context,
    command: str,
    config_path: Optional[Path],
    options: dict[str, Any],
    **overrides: Any,
) -> None:
    from campana_cli.config.exporter import emit_plot_data, write_envelope
    from campana_cli.config.settings import load_config
    from campana_cli.runner import run

    verbose = ctx.obj.get("verbose", 0) > 0
    if overrides.get("bounds") == ():
        overrides["bounds"] = None
    elif overrides.get("bounds") is not None:
        overrides["bounds"] = list(overrides["bounds"])
    try:
        config = load_config(
            config_path,
            overrides={
                "command": command,
                "options": {k: v for k, v in options.items() if v is not None},
                **overrides,
            },
        )
        if verbose:
            console.print(f"[bold blue]Running:[/] {command}")
        result = run(config, verbose=verbose)
    except CampanaError as e:
        console.print(f"[red]Error:[/] {e}")
        ctx.exit(e.exit_code)

    envelope = result.envelope
    if envelope.warnings:
        console.print("[yellow]Warnings:[/]")
        for warning in envelope.warnings:
            console.print(f"  [yellow]• {warning}[/]")
    write_envelope(envelope, config.out)
    if config.out is not None:
        console.print(f"[bold green]Report written:[/] {config.out}")
    if config.csv is not None:
        if result.columns is None:
            console.print(f"[yellow]'{command}' produces no series; --csv ignored[/]")
        else:
            emit_plot_data(result.rows or [], result.columns, config.csv)
            console.print(f"[bold green]Series written:[/] {config.csv}")


@click.group()
@click.version_option(version=__version__, prog_name="campana")
@click.option("-v", "--verbose", count=True, help="Increase verbosity")
@click.pass_context
def main(ctx: click.Context, verbose: int) -> None:
    """campana - Count Campana points on split toric varieties."""
    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose


# Fan and polytope commands


@main.command()
@fan_options
@run_options
@click.pass_context
def validate(ctx: click.Context, fan: str, m: Optional[str], L: Optional[str], config_path, **kw) -> None:
    """Check that FAN is smooth and complete.

    FAN is a fan JSON file or the name of a bundled fan (p1, p2, p1xp1, ...).
    """
    _execute(ctx, "validate", config_path, {"m": _ints(m), "L": _split(L)}, fan=fan, **kw)


@main.command()
@fan_options
@run_options
@click.pass_context
def lp(ctx: click.Context, fan: str, m: Optional[str], L: Optional[str], config_path, **kw) -> None:
    """Exponents a, b by exact linear programming with dual certificates."""
    _execute(ctx, "lp", config_path, {"m": _ints(m), "L": _split(L)}, fan=fan, **kw)


@main.command()
@fan_options
@run_options
@click.pass_context
def alpha(ctx: click.Context, fan: str, m: Optional[str], L: Optional[str], config_path, **kw) -> None:
    """The volume constant alpha(L), computed in every cone."""
    _execute(ctx, "alpha", config_path, {"m": _ints(m), "L": _split(L)}, fan=fan, **kw)


@main.command()
@fan_options
@run_options
@click.pass_context
def assumption(ctx: click.Context, fan: str, m: Optional[str], L: Optional[str], config_path, **kw) -> None:
    """Check the technical assumption on the polytope of FAN."""
    _execute(ctx, "assumption", config_path, {"m": _ints(m), "L": _split(L)}, fan=fan, **kw)


@main.command("slice")
@fan_options
@click.option(
    "--measure",
    type=click.Choice(["weighted", "plain"]),
    default=None,
    help="Slice measure (weighted by 1/m_i, or plain Lebesgue)",
)
@click.option("--monte-carlo", "monte_carlo_samples", type=int, help="Monte Carlo samples for a cross-check")
@run_options
@click.pass_context
def slice_(
    ctx: click.Context,
    fan: str,
    m: Optional[str],
    L: Optional[str],
    measure: Optional[str],
    monte_carlo_samples: Optional[int],
    config_path,
    **kw,
) -> None:
    """Slice volumes of the polytope near its optimal face."""
    options = {
        "m": _ints(m),
        "L": _split(L),
        "measure": measure,
        "monte_carlo_samples": monte_carlo_samples,
    }
    _execute(ctx, "slice", config_path, options, fan=fan, **kw)


# m-full commands


@main.group()
def mfull() -> None:
    """m-full integers: counts, constants and identities."""


@mfull.command("count")
@click.option("-m", "--m", "m", type=int, help="Fullness exponent")
@click.option("-d", "--d", "d", type=int, help="Squarefree divisor")
@click.option("--naive", is_flag=True, default=None, help="Cross-check with the valuation scan")
@run_options
@click.pass_context
def mfull_count(ctx: click.Context, m: Optional[int], d: Optional[int], naive, config_path, **kw) -> None:
    """Exact counts F_m(B, d)."""
    _execute(ctx, "mfull.count", config_path, {"m": m, "d": d, "naive": naive}, **kw)


@mfull.command("constants")
@click.option("-m", "--m", "m", help="Exponents, e.g. '1,2,3'")
@click.option("-d", "--d", "d", help="Divisors, e.g. '1,2,6'")
@click.option("--mu-max", type=int, help="Largest exponent in the coefficient tables")
@run_options
@click.pass_context
def mfull_constants(
    ctx: click.Context, m: Optional[str], d: Optional[str], mu_max: Optional[int], config_path, **kw
) -> None:
    """The constants C_m, c_{m,d}, K_m and the coefficients a_m."""
    _execute(
        ctx, "mfull.constants", config_path, {"m": _ints(m), "d": _ints(d), "mu_max": mu_max}, **kw
    )


@mfull.command("verify")
@click.option("-m", "--m", "m", help="Exponents, e.g. '2,3'")
@click.option("-p", "--primes", help="Primes, e.g. '2,3,5'")
@click.option("-d", "--d", "d", type=int, help="Squarefree divisor for the divisor variant")
@run_options
@click.pass_context
def mfull_verify(
    ctx: click.Context, m: Optional[str], primes: Optional[str], d: Optional[int], config_path, **kw
) -> None:
    """Verify the forced-prime identities exactly."""
    _execute(
        ctx, "mfull.verify", config_path, {"m": _ints(m), "primes": _ints(primes), "d": d}, **kw
    )


# Hyperbola commands


@main.group()
def hyperbola() -> None:
    """Hyperbola-method main terms and exact sums."""


@hyperbola.command("demo")
@click.option("--preset", type=click.Choice(["dirichlet", "squarefull"]), default=None)
@click.option("--theta", help="Box ratio for the box decomposition, e.g. '3/2'")
@run_options
@click.pass_context
def hyperbola_demo(
    ctx: click.Context, preset: Optional[str], theta: Optional[str], config_path, **kw
) -> None:
    """Compare exact sums with the main term on a bundled example."""
    _execute(ctx, "hyperbola.demo", config_path, {"preset": preset, "theta": theta}, **kw)


@hyperbola.command("estimate")
@click.option(
    "--system",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="System JSON with keys alpha, b, f and optional varpi",
)
@click.option("--exact", is_flag=True, default=None, help="Also compute the exact sum")
@run_options
@click.pass_context
def hyperbola_estimate(
    ctx: click.Context, system: Optional[Path], exact, config_path, **kw
) -> None:
    """Main term of the sum of f over a box constraint system."""
    options = {"system": None if system is None else str(system), "exact": exact}
    _execute(ctx, "hyperbola.estimate", config_path, options, **kw)


# Counting commands


@main.command()
@fan_options
@click.option("--inversion-check", is_flag=True, default=None, help="Verify the Moebius inversion")
@run_options
@click.pass_context
def count(
    ctx: click.Context, fan: str, m: Optional[str], L: Optional[str], inversion_check, config_path, **kw
) -> None:
    """Exact counts N(B) of Campana points."""
    options = {"m": _ints(m), "L": _split(L), "inversion_check": inversion_check}
    _execute(ctx, "count", config_path, options, fan=fan, **kw)


@main.command()
@fan_options
@click.option("--d-cap", type=int, help="Also evaluate the direct divisor sum up to this cap")
@run_options
@click.pass_context
def constant(
    ctx: click.Context, fan: str, m: Optional[str], L: Optional[str], d_cap: Optional[int], config_path, **kw
) -> None:
    """The leading constant c of the asymptotic."""
    options = {"m": _ints(m), "L": _split(L), "d_cap": d_cap}
    _execute(ctx, "constant", config_path, options, fan=fan, **kw)


@main.command()
@fan_options
@run_options
@click.pass_context
def asymptotic(ctx: click.Context, fan: str, m: Optional[str], L: Optional[str], config_path, **kw) -> None:
    """Exact counts against the predicted asymptotic c B (log B)^(b-1)."""
    _execute(ctx, "asymptotic", config_path, {"m": _ints(m), "L": _split(L)}, fan=fan, **kw)


@main.command("init-config")
@click.option(
    "-o",
    "--output",
    type=click.Path(dir_okay=False, path_type=Path),
    default=Path("campana_config.yaml"),
    help="Output config file",
)
@click.option("--command", "command", default="asymptotic", help="Command the template is for")
@click.option("--fan", default="p2", help="Fan file or bundled fan name")
@click.pass_context
def init_config(ctx: click.Context, output: Path, command: str, fan: str) -> None:
    """Generate a configuration template."""
    from campana_cli.config.exporter import export_config
    from campana_cli.config.settings import load_config

    try:
        config = load_config(overrides={"command": command, "fan": fan}, env={})
    except CampanaError as e:
        console.print(f"[red]Error:[/] {e}")
        ctx.exit(e.exit_code)
    export_config(config, output)
    console.print(f"[bold green]Config template created:[/] {output}")


if __name__ == "__main__":
    main()
