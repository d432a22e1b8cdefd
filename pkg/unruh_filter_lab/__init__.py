"""Unruh acceleration and local filtering lab: command-line interface."""
import logging
import os
from enum import Enum
from pathlib import Path
from typing import Optional

import typer
from dotenv import load_dotenv
from pydantic import ValidationError
from typer import Typer

from app import __version__
from app.models.models import FilterMode, PairPolicy, Subsystem

app = Typer(help="Qubit-qutrit Unruh acceleration and local filtering simulator.")

logger = logging.getLogger(__name__)


class FilterTarget(str, Enum):
    NONE = "none"
    QUBIT = "qubit"
    QUTRIT = "qutrit"


@app.callback()
def _configure() -> None:
    load_dotenv()
    level = os.getenv("LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


@app.command()
def figure(
    figure_id: int = typer.Option(..., "--id", min=1, max=6, help="Figure preset, 1..6"),
    mu: float = typer.Option(..., min=0.0, max=0.5, help="Family parameter"),
    mode: FilterMode = typer.Option(FilterMode.POSTSELECT, help="Qutrit filter mode"),
    out: Path = typer.Option(Path("figures"), help="Directory for the per-curve CSV files"),
    svg: Optional[Path] = typer.Option(None, help="SVG path (default <out>/figure-<id>.svg)"),
    workers: Optional[int] = typer.Option(None, min=1, help="Grid-evaluation threads"),
) -> None:
    """Regenerate one of the six figure presets as CSV files plus an SVG chart."""
    from app.errors import LabError
    from app.services.output_service import OutputService
    from app.services.sweep_service import SweepService

    output = OutputService()
    try:
        results = SweepService(workers=workers).run_figure(figure_id, mu, mode)
        out.mkdir(parents=True, exist_ok=True)
        for index, result in enumerate(results, start=1):
            path = out / f"figure-{figure_id}-{index}.csv"
            output.write_csv(result, path)
            typer.echo(str(path))
        svg_path = svg or out / f"figure-{figure_id}.svg"
        output.write_svg(results, svg_path)
        typer.echo(str(svg_path))
    except (LabError, OSError) as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=1)


@app.command()
def sweep(
    mu: float = typer.Option(..., min=0.0, max=0.5, help="Family parameter"),
    accelerate: Subsystem = typer.Option(..., help="Accelerated subsystem"),
    filter: FilterTarget = typer.Option(FilterTarget.NONE, help="Filtered subsystem"),
    strength: Optional[float] = typer.Option(None, help="kappa or Q, strictly inside (0, 1)"),
    mode: FilterMode = typer.Option(FilterMode.POSTSELECT, help="Qutrit filter mode"),
    pair: Optional[PairPolicy] = typer.Option(
        None, help="Pair-level policy (default discard, keep for --mode channel)"
    ),
    r_min: float = typer.Option(0.0, help="First r of the grid"),
    r_max: Optional[float] = typer.Option(None, help="Last r of the grid (default pi/4)"),
    steps: int = typer.Option(101, min=1, help="Number of r points"),
    out: Optional[Path] = typer.Option(None, help="CSV path (default stdout)"),
    svg: Optional[Path] = typer.Option(None, help="Optional SVG chart path"),
    workers: Optional[int] = typer.Option(None, min=1, help="Grid-evaluation threads"),
) -> None:
    """Sweep negativity over r for one scenario."""
    from app.errors import LabError
    from app.models.models import R_MAX, ScenarioConfig, ScenarioFilter
    from app.services.output_service import OutputService
    from app.services.sweep_service import SweepService, r_grid

    if filter == FilterTarget.NONE and strength is not None:
        raise typer.BadParameter("--strength needs --filter", param_hint="--strength")
    if filter != FilterTarget.NONE and strength is None:
        raise typer.BadParameter("--filter needs --strength", param_hint="--strength")
    try:
        filtered = None
        if filter != FilterTarget.NONE:
            target = Subsystem(filter.value)
            filtered = ScenarioFilter(
                target=target,
                strength=strength,
                mode=mode if target == Subsystem.QUTRIT else FilterMode.POSTSELECT,
                pair_policy=pair,
            )
        cfg = ScenarioConfig(
            mu=mu,
            accelerated=accelerate,
            filtered=filtered,
            r_grid=r_grid(steps, r_min, R_MAX if r_max is None else r_max),
        )
    except ValidationError as e:
        message = "; ".join(error["msg"] for error in e.errors())
        raise typer.BadParameter(message)

    output = OutputService()
    try:
        result = SweepService(workers=workers).run_scenario(cfg)
        if out is None:
            typer.echo(output.render_csv(result), nl=False)
        else:
            output.write_csv(result, out)
            typer.echo(str(out))
        if svg is not None:
            output.write_svg([result], svg)
    except LabError as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=1)


@app.command("eval")
def eval_command(
    pipeline: str = typer.Argument(..., help="e.g. 'state(mu=0) | negativity'"),
) -> None:
    """Evaluate a channel pipeline and print the scalar or the final state."""
    from app.errors import PipelineEvalError, PipelineSemanticError, PipelineSyntaxError
    from app.services.output_service import OutputService

    from .pipeline import evaluate

    try:
        result = evaluate(pipeline)
    except (PipelineSyntaxError, PipelineSemanticError) as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=2)
    except PipelineEvalError as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=1)
    if result.kind == "scalar":
        typer.echo(f"{result.value:.15g}")
    else:
        typer.echo(OutputService().format_dump(result.state))


@app.command()
def check() -> None:
    """Run the verification suite; exits 1 if any check fails."""
    from app.services.check_service import CheckService

    report = CheckService().run()
    for result in report.results:
        typer.echo(f"{result.status.value} {result.name}: {result.detail}")
    if not report.passed:
        raise typer.Exit(code=1)


@app.command()
def serve(
    host: str = typer.Option("0.0.0.0", help="Bind address"),
    port: Optional[int] = typer.Option(None, help="Port (default $PORT or 8000)"),
) -> None:
    """Run the HTTP API."""
    import uvicorn

    uvicorn.run("app.main:app", host=host, port=port or int(os.getenv("PORT", "8000")))


@app.command()
def version() -> None:
    """Print the library version."""
    typer.echo(__version__)
