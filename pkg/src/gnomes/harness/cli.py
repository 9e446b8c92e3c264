"""Command-line front end: maze generation, batch simulation, statistics,
and learned-wall heatmaps."""

from __future__ import annotations

import json
from pathlib import Path

import click

from gnomes.core.mazefile import MazeFileError, load_maze, loads_maze, save_maze
from gnomes.core.mazegen import generate_setup
from gnomes.harness.episode import TURN_CAP, Condition
from gnomes.harness.experiment import (
    PROXY_VARIANTS,
    RECOMMENDED_ITERATIONS,
    ExperimentConfig,
    ExperimentResult,
    run_experiment,
)
from gnomes.harness.heatmap import emit_heatmap
from gnomes.planner import PlannerConfig

_CONDITION_SETS = {
    "comm": (Condition.COMM,),
    "mute": (Condition.MUTE,),
    "both": (Condition.COMM, Condition.MUTE),
}


@click.group()
def main() -> None:
    """Tools for the shared-control maze game."""


@main.command("gen-maze")
@click.option("--seed", type=int, required=True, help="Generator seed.")
@click.option("--width", type=int, default=9, show_default=True)
@click.option("--height", type=int, default=9, show_default=True)
@click.option("--rounds", type=int, default=5, show_default=True)
@click.option("--density", type=float, default=0.15, show_default=True, help="Extra wall removals.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), required=True)
def gen_maze(seed: int, width: int, height: int, rounds: int, density: float, out: str) -> None:
    """Generate a solvable multi-round maze file."""
    setup = generate_setup(seed, width, height, rounds=rounds, removal_density=density)
    save_maze(setup, out)
    click.echo(f"wrote {width}x{height} maze with {rounds} rounds to {out}")


@main.command("simulate")
@click.option("--seeds", type=int, default=12, show_default=True, help="Number of maze seeds.")
@click.option(
    "--condition",
    type=click.Choice(sorted(_CONDITION_SETS)),
    default="both",
    show_default=True,
)
@click.option("--maze-file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Fixed board for every seed instead of generated mazes.")
@click.option("--proxy", type=click.Choice(sorted(PROXY_VARIANTS)), default="greedy-flagging",
              show_default=True)
@click.option("--error-rate", type=float, default=0.0, show_default=True,
              help="Chance the proxy falsely refuses a valid proposal.")
@click.option("--iterations", type=int, default=RECOMMENDED_ITERATIONS, show_default=True,
              help="Search iterations per agent decision.")
@click.option("--width", type=int, default=9, show_default=True)
@click.option("--height", type=int, default=9, show_default=True)
@click.option("--rounds", type=int, default=5, show_default=True)
@click.option("--master-seed", type=int, default=0, show_default=True)
@click.option("--turn-cap", type=int, default=TURN_CAP, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), required=True)
def simulate(
    seeds: int,
    condition: str,
    maze_file: str | None,
    proxy: str,
    error_rate: float,
    iterations: int,
    width: int,
    height: int,
    rounds: int,
    master_seed: int,
    turn_cap: int,
    out: str,
) -> None:
    """Run seeded self-play games and write a results file."""
    setup = None
    if maze_file is not None:
        try:
            setup = load_maze(maze_file)
        except MazeFileError as exc:
            raise click.UsageError(f"{maze_file}: {exc}") from exc
        rounds = len(setup.treasures)
    config = ExperimentConfig(
        maze_seeds=tuple(range(seeds)),
        conditions=_CONDITION_SETS[condition],
        proxy_variant=proxy,
        error_rate=error_rate,
        width=width,
        height=height,
        rounds=rounds,
        planner=PlannerConfig(iterations=iterations),
        turn_cap=turn_cap,
        master_seed=master_seed,
    )
    result = run_experiment(
        config,
        setup_override=setup,
        progress=lambda line: click.echo(line, err=True),
    )
    Path(out).write_text(json.dumps(result.to_dict(), indent=2) + "\n", encoding="utf-8")
    click.echo(f"wrote {len(result.records)} games to {out}")


@main.command("stats")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "md"]), default="md", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def stats(in_path: str, fmt: str, out: str | None) -> None:
    """Summarize a results file into per-round tables."""
    result = _load_results(in_path)
    table = result.stats()
    text = table.render_csv() if fmt == "csv" else table.render_markdown()
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote stats to {out}")


@main.command("heatmap")
@click.option("--log", "log_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def heatmap(log_path: str, out: str | None) -> None:
    """Render learned-vs-actual partner walls for each logged game."""
    result = _load_results(log_path)
    sections = []
    for record in result.records:
        side_h = loads_maze(record.maze_text).side_h
        report = emit_heatmap(record.omega, side_h)
        sections.append(
            f"maze seed {record.maze_seed}, condition {record.condition.value}\n"
            + report.render()
        )
    text = "\n".join(sections)
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote heatmap to {out}")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--log-dir", type=click.Path(file_okay=False), default=None,
              help="Directory for per-session event and episode logs.")
def serve(host: str, port: int, log_dir: str | None) -> None:
    """Run the multiplayer game server."""
    import uvicorn

    from gnomes.server import ServerConfig, create_app

    config = ServerConfig.from_env()
    if log_dir is not None:
        config.log_dir = Path(log_dir)
    uvicorn.run(create_app(config), host=host, port=port)


def _load_results(path: str) -> ExperimentResult:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"{path} is not valid JSON: {exc}") from exc
    if data.get("kind") != "experiment-results":
        raise click.UsageError(f"{path} is not a results file")
    return ExperimentResult.from_dict(data)
